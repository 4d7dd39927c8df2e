#pragma once

// Independent tabular Q-learning over the three-zone joint user state.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hybridnet/agent.hpp"
#include "hybridnet/rng.hpp"

namespace hybridnet {

// Where a user's rate sits relative to its target band.
enum class RateZone : std::uint8_t {
  kBelow = 1,   // R < T
  kAbove = 2,   // R > T + B
  kInBand = 3,  // T <= R <= T + B
};

RateZone rate_zone(double actual, double target, double band);

struct DiscreteState {
  std::vector<RateZone> per_user;

  // Base-3 joint index in [0, 3^N); user 0 is the least significant digit.
  std::size_t index() const;
  static std::size_t count(std::size_t n_users);
};

DiscreteState discretize_state(std::span<const double> actual, std::span<const double> targets,
                               std::span<const double> bands);

class QTable {
 public:
  QTable(std::size_t num_states, std::size_t num_actions, double learning_rate, double discount);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double learning_rate() const { return learning_rate_; }
  double discount() const { return discount_; }

  double at(std::size_t s, std::size_t a) const { return values_[s * num_actions_ + a]; }
  double& at(std::size_t s, std::size_t a) { return values_[s * num_actions_ + a]; }
  std::span<const double> row(std::size_t s) const { return {values_.data() + s * num_actions_, num_actions_}; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  double learning_rate_;
  double discount_;
  std::vector<double> values_;
};

std::size_t select_action(const QTable& q, std::size_t state, double eps, Rng& rng);

// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a'))
void q_update(QTable& q, std::size_t state, std::size_t action, double reward, std::size_t next_state);

// Rows "state,action,value" with a header.
void write_qtable_csv(const QTable& q, const std::filesystem::path& path);

struct QLearningParams {
  double learning_rate = 0.5;
  double discount = 0.5;
};

class QLearningAgent final : public PowerAgent {
 public:
  QLearningAgent(ActionSpace actions, QLearningParams params, Rng exploration_rng);

  std::size_t act(const NetworkState& observation, double eps) override;
  void learn(const NetworkState& observation, std::size_t action, double reward,
             const NetworkState& next_observation) override;
  const ActionSpace& action_space() const override { return actions_; }

  const QTable& table() const { return table_; }

 private:
  static std::size_t observe(const NetworkState& s);

  ActionSpace actions_;
  QTable table_;
  Rng rng_;
};

}  // namespace hybridnet
