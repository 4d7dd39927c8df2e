#include "hybridnet/tabular_rl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hybridnet/errors.hpp"
#include "hybridnet/policy.hpp"

namespace hybridnet {

RateZone rate_zone(double actual, double target, double band) {
  if (actual < target) return RateZone::kBelow;
  if (actual > target + band) return RateZone::kAbove;
  return RateZone::kInBand;
}

std::size_t DiscreteState::index() const {
  std::size_t idx = 0;
  for (std::size_t u = per_user.size(); u-- > 0;) idx = idx * 3 + (static_cast<std::size_t>(per_user[u]) - 1);
  return idx;
}

std::size_t DiscreteState::count(std::size_t n_users) {
  std::size_t n = 1;
  for (std::size_t u = 0; u < n_users; ++u) n *= 3;
  return n;
}

DiscreteState discretize_state(std::span<const double> actual, std::span<const double> targets,
                               std::span<const double> bands) {
  if (actual.size() != targets.size() || actual.size() != bands.size())
    throw ShapeError("discretize_state: rate, target and band vectors differ in length");
  DiscreteState s;
  s.per_user.reserve(actual.size());
  for (std::size_t u = 0; u < actual.size(); ++u) s.per_user.push_back(rate_zone(actual[u], targets[u], bands[u]));
  return s;
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, double learning_rate, double discount)
    : num_states_(num_states),
      num_actions_(num_actions),
      learning_rate_(learning_rate),
      discount_(discount),
      values_(num_states * num_actions, 0.0) {
  if (num_states == 0 || num_actions == 0) throw ConfigError("Q-table needs at least one state and one action");
  if (learning_rate < 0.0 || learning_rate > 1.0) throw ConfigError("Q-learning rate must lie in [0, 1]");
  if (discount < 0.0 || discount >= 1.0) throw ConfigError("discount must lie in [0, 1)");
}

std::size_t select_action(const QTable& q, std::size_t state, double eps, Rng& rng) {
  return epsilon_greedy(q.row(state), eps, rng);
}

void q_update(QTable& q, std::size_t state, std::size_t action, double reward, std::size_t next_state) {
  const auto next = q.row(next_state);
  const double best_next = *std::max_element(next.begin(), next.end());
  const double alpha = q.learning_rate();
  double& cell = q.at(state, action);
  cell = (1.0 - alpha) * cell + alpha * (reward + q.discount() * best_next);
}

void write_qtable_csv(const QTable& q, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "state,action,value\n";
  out.precision(17);
  for (std::size_t s = 0; s < q.num_states(); ++s)
    for (std::size_t a = 0; a < q.num_actions(); ++a) out << s << ',' << a << ',' << q.at(s, a) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

QLearningAgent::QLearningAgent(ActionSpace actions, QLearningParams params, Rng exploration_rng)
    : actions_(std::move(actions)),
      table_(DiscreteState::count(actions_.num_users()), actions_.size(), params.learning_rate, params.discount),
      rng_(std::move(exploration_rng)) {}

std::size_t QLearningAgent::observe(const NetworkState& s) {
  return discretize_state(s.actual_rates, s.target_rates, s.target_bands).index();
}

std::size_t QLearningAgent::act(const NetworkState& observation, double eps) {
  return select_action(table_, observe(observation), eps, rng_);
}

void QLearningAgent::learn(const NetworkState& observation, std::size_t action, double reward,
                           const NetworkState& next_observation) {
  q_update(table_, observe(observation), action, reward, observe(next_observation));
}

}  // namespace hybridnet
