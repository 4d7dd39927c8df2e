#include "hybridnet/action_space.hpp"

#include <algorithm>

#include "hybridnet/errors.hpp"

namespace hybridnet {

ActionSpace ActionSpace::enumerate(std::vector<double> levels, std::size_t n_users, double max_sum) {
  if (levels.empty()) throw ConfigError("power level set is empty");
  if (n_users == 0) throw ConfigError("action space needs at least one user");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.front() < 0.0) throw ConfigError("power levels must be non-negative");

  ActionSpace space;
  space.levels_ = levels;
  space.n_users_ = n_users;
  space.max_sum_ = max_sum;

  // Odometer over level indices, last user fastest: lexicographic order.
  std::vector<std::size_t> idx(n_users, 0);
  PowerAction current{std::vector<double>(n_users, levels.front())};
  while (true) {
    if (within_budget(current.total(), max_sum)) space.actions_.push_back(current);
    std::size_t pos = n_users;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < levels.size()) {
        current.per_user[pos] = levels[idx[pos]];
        break;
      }
      idx[pos] = 0;
      current.per_user[pos] = levels.front();
      if (pos == 0) {
        pos = n_users;  // wrapped the most significant digit
        break;
      }
    }
    if (pos == n_users) break;
  }

  if (space.actions_.empty())
    throw ConfigError("no power vector over the level set fits within the budget");
  return space;
}

std::vector<double> evenly_spaced_levels(std::size_t n, double max_power) {
  if (n == 0) throw ConfigError("power level count must be at least 1");
  if (n == 1) return {0.0};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = max_power * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

}  // namespace hybridnet
