#pragma once

// Independent DQN agents over the continuous (rate, target) state.

#include <cstddef>
#include <span>
#include <vector>

#include "hybridnet/agent.hpp"
#include "hybridnet/mlp.hpp"
#include "hybridnet/replay.hpp"
#include "hybridnet/rng.hpp"

namespace hybridnet {

// [R1, T1, ..., RN, TN] / normalization.
std::vector<double> build_state_vector(std::span<const double> actual, std::span<const double> targets,
                                       double normalization);

std::size_t dqn_select_action(const MlpParams& params, std::span<const double> state, double eps, Rng& rng);

struct DqnParams {
  std::vector<std::size_t> hidden_layers{32, 32, 32};
  std::size_t replay_capacity = 10000;
  std::size_t minibatch_size = 32;
  double discount = 0.5;
  double state_normalization = 50e6;  // bit/s
  AdamParams adam;
};

class DqnAgent final : public PowerAgent {
 public:
  DqnAgent(ActionSpace actions, DqnParams params, Rng init_rng, Rng exploration_rng, Rng replay_rng);

  std::size_t act(const NetworkState& observation, double eps) override;

  // Stores the transition and, once the buffer holds a full minibatch, runs
  // one training step on a uniform sample.
  void learn(const NetworkState& observation, std::size_t action, double reward,
             const NetworkState& next_observation) override;

  const ActionSpace& action_space() const override { return actions_; }

  // TD targets -> MSE gradient -> Adam. Returns the loss before the update.
  double train_step(std::span<const Transition> minibatch);

  std::vector<double> q_values(const NetworkState& observation) const;

  const MlpParams& network() const { return net_; }
  MlpParams& network() { return net_; }
  const AdamState& optimizer() const { return adam_; }
  const ReplayBuffer& replay() const { return replay_; }
  const DqnParams& params() const { return params_; }

 private:
  std::vector<double> encode(const NetworkState& s) const;

  ActionSpace actions_;
  DqnParams params_;
  MlpParams net_;
  AdamState adam_;
  MlpParams grad_;
  ReplayBuffer replay_;
  Rng explore_rng_;
  Rng replay_rng_;
};

}  // namespace hybridnet
