#pragma once

#include <cstddef>
#include <vector>

#include "hybridnet/environment.hpp"

namespace hybridnet {

// Every per-user power vector over a discrete level set whose sum fits the
// AP budget, in lexicographic order so indices are stable.
class ActionSpace {
 public:
  // Throws ConfigError when the level set is empty, negative, or admits no
  // feasible vector.
  static ActionSpace enumerate(std::vector<double> levels, std::size_t n_users, double max_sum);

  std::size_t size() const { return actions_.size(); }
  std::size_t num_users() const { return n_users_; }
  const PowerAction& operator[](std::size_t i) const { return actions_[i]; }
  const std::vector<PowerAction>& actions() const { return actions_; }
  const std::vector<double>& levels() const { return levels_; }
  double max_sum() const { return max_sum_; }

  auto begin() const { return actions_.begin(); }
  auto end() const { return actions_.end(); }

 private:
  std::vector<PowerAction> actions_;
  std::vector<double> levels_;
  std::size_t n_users_ = 0;
  double max_sum_ = 0.0;
};

// n evenly spaced levels 0, max/(n-1), ..., max. n == 1 gives {0}.
std::vector<double> evenly_spaced_levels(std::size_t n, double max_power);

}  // namespace hybridnet
