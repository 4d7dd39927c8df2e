#pragma once

#include <cstddef>

#include "hybridnet/action_space.hpp"
#include "hybridnet/environment.hpp"

namespace hybridnet {

// One access point's learner. Agents see only the shared network observation
// and the shared reward; they never read one another.
class PowerAgent {
 public:
  virtual ~PowerAgent() = default;

  virtual std::size_t act(const NetworkState& observation, double eps) = 0;
  virtual void learn(const NetworkState& observation, std::size_t action, double reward,
                     const NetworkState& next_observation) = 0;
  virtual const ActionSpace& action_space() const = 0;
};

}  // namespace hybridnet
