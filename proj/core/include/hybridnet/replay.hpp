#pragma once

#include <cstddef>
#include <vector>

#include "hybridnet/mlp.hpp"
#include "hybridnet/rng.hpp"

namespace hybridnet {

// Fixed-capacity FIFO of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);

  // k draws, uniform with replacement. Throws std::logic_error when empty.
  std::vector<Transition> sample(std::size_t k, Rng& rng) const;

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return storage_.empty(); }

  // i-th oldest entry.
  const Transition& oldest(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;  // next slot to overwrite once full
  std::vector<Transition> storage_;
};

}  // namespace hybridnet
