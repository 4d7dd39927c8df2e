#include "hybridnet/replay.hpp"

#include <stdexcept>

#include "hybridnet/errors.hpp"

namespace hybridnet {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be at least 1");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
    return;
  }
  storage_[cursor_] = std::move(t);
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t k, Rng& rng) const {
  if (storage_.empty()) throw std::logic_error("cannot sample from an empty replay buffer");
  std::vector<Transition> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(storage_[uniform_index(rng, storage_.size())]);
  return out;
}

const Transition& ReplayBuffer::oldest(std::size_t i) const {
  if (i >= storage_.size()) throw std::out_of_range("replay index out of range");
  return storage_[(cursor_ + i) % storage_.size()];
}

}  // namespace hybridnet
