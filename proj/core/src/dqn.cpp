#include "hybridnet/dqn.hpp"

#include "hybridnet/errors.hpp"
#include "hybridnet/policy.hpp"

namespace hybridnet {

std::vector<double> build_state_vector(std::span<const double> actual, std::span<const double> targets,
                                       double normalization) {
  if (actual.size() != targets.size()) throw ShapeError("build_state_vector: rates and targets differ in length");
  std::vector<double> out;
  out.reserve(2 * actual.size());
  for (std::size_t u = 0; u < actual.size(); ++u) {
    out.push_back(actual[u] / normalization);
    out.push_back(targets[u] / normalization);
  }
  return out;
}

std::size_t dqn_select_action(const MlpParams& params, std::span<const double> state, double eps, Rng& rng) {
  const auto q = mlp_forward(params, state);
  return epsilon_greedy(q, eps, rng);
}

namespace {

std::vector<std::size_t> agent_topology(std::size_t n_users, const DqnParams& p, std::size_t n_actions) {
  std::vector<std::size_t> topo{2 * n_users};
  topo.insert(topo.end(), p.hidden_layers.begin(), p.hidden_layers.end());
  topo.push_back(n_actions);
  return topo;
}

}  // namespace

DqnAgent::DqnAgent(ActionSpace actions, DqnParams params, Rng init_rng, Rng exploration_rng, Rng replay_rng)
    : actions_(std::move(actions)),
      params_(std::move(params)),
      replay_(params_.replay_capacity),
      explore_rng_(std::move(exploration_rng)),
      replay_rng_(std::move(replay_rng)) {
  if (params_.minibatch_size == 0) throw ConfigError("DQN minibatch size must be at least 1");
  if (!(params_.state_normalization > 0.0)) throw ConfigError("DQN state normalization must be positive");
  const auto topo = agent_topology(actions_.num_users(), params_, actions_.size());
  net_ = MlpParams::uniform_init(topo, init_rng);
  grad_ = MlpParams::zeros(topo);
  adam_ = AdamState::for_params(net_, params_.adam);
}

std::vector<double> DqnAgent::encode(const NetworkState& s) const {
  return build_state_vector(s.actual_rates, s.target_rates, params_.state_normalization);
}

std::vector<double> DqnAgent::q_values(const NetworkState& observation) const {
  return mlp_forward(net_, encode(observation));
}

std::size_t DqnAgent::act(const NetworkState& observation, double eps) {
  return dqn_select_action(net_, encode(observation), eps, explore_rng_);
}

void DqnAgent::learn(const NetworkState& observation, std::size_t action, double reward,
                     const NetworkState& next_observation) {
  if (action >= actions_.size()) throw ShapeError("DQN transition action outside the action space");
  replay_.push(Transition{encode(observation), action, reward, encode(next_observation)});
  if (replay_.size() < params_.minibatch_size) return;
  const auto batch = replay_.sample(params_.minibatch_size, replay_rng_);
  train_step(batch);
}

double DqnAgent::train_step(std::span<const Transition> minibatch) {
  const auto targets = td_targets(minibatch, net_, params_.discount);
  const double loss = mse_loss_and_grad(net_, minibatch, targets, grad_);
  adam_step(net_, grad_, adam_);
  return loss;
}

}  // namespace hybridnet
