#include <benchmark/benchmark.h>

#include "hybridnet/config.hpp"
#include "hybridnet/dqn.hpp"
#include "hybridnet/environment.hpp"
#include "hybridnet/harness.hpp"
#include "hybridnet/tabular_rl.hpp"

namespace hn = hybridnet;

namespace {

hn::ActionSpace rf_space() { return hn::ActionSpace::enumerate(hn::evenly_spaced_levels(11, 0.01), 2, 0.01); }

std::vector<hn::Transition> batch_of(std::size_t k, std::size_t actions) {
  hn::Rng rng(1);
  std::vector<hn::Transition> batch;
  for (std::size_t j = 0; j < k; ++j)
    batch.push_back({{hn::uniform01(rng), 0.4, hn::uniform01(rng), 0.24},
                     hn::uniform_index(rng, actions),
                     -hn::uniform01(rng),
                     {hn::uniform01(rng), 0.4, hn::uniform01(rng), 0.24}});
  return batch;
}

void BM_MlpForward(benchmark::State& state) {
  hn::Rng rng(1);
  const std::vector<std::size_t> topo{4, 32, 32, 32, rf_space().size()};
  const auto p = hn::MlpParams::uniform_init(topo, rng);
  const std::vector<double> x{0.4, 0.4, 0.24, 0.24};
  for (auto _ : state) benchmark::DoNotOptimize(hn::mlp_forward(p, x));
}
BENCHMARK(BM_MlpForward);

void BM_DqnTrainStep(benchmark::State& state) {
  auto space = rf_space();
  const auto actions = space.size();
  hn::DqnAgent agent(std::move(space), {}, hn::Rng(1), hn::Rng(2), hn::Rng(3));
  const auto batch = batch_of(static_cast<std::size_t>(state.range(0)), actions);
  for (auto _ : state) benchmark::DoNotOptimize(agent.train_step(batch));
}
BENCHMARK(BM_DqnTrainStep)->Arg(32)->Arg(128);

void BM_EnvironmentStep(benchmark::State& state) {
  hn::EnvironmentParams params;
  hn::HybridEnvironment env(params, {hn::UserConfig::at({2.5, 2.0}, 20e6), hn::UserConfig::at({-2.0, -2.5}, 12e6)},
                            hn::Rng(4));
  hn::JointAction joint;
  joint.vlc_actions.assign(env.num_vlc_aps(), hn::PowerAction{{0.0, 0.0}});
  joint.vlc_actions[0] = hn::PowerAction{{1.0, 0.6}};
  joint.vlc_actions[3] = hn::PowerAction{{0.4, 1.0}};
  joint.rf_action = hn::PowerAction{{0.005, 0.003}};
  for (auto _ : state) benchmark::DoNotOptimize(env.step(joint).reward);
}
BENCHMARK(BM_EnvironmentStep);

void BM_QLearningActLearn(benchmark::State& state) {
  hn::QLearningAgent agent(rf_space(), {}, hn::Rng(5));
  hn::NetworkState s;
  s.actual_rates = {5e6, 13e6};
  s.target_rates = {20e6, 12e6};
  s.target_bands = {1e6, 0.6e6};
  for (auto _ : state) {
    const auto a = agent.act(s, 0.1);
    agent.learn(s, a, -1.0, s);
  }
}
BENCHMARK(BM_QLearningActLearn);

void BM_Episode(benchmark::State& state) {
  hn::ExperimentConfig cfg;
  cfg.algorithm = state.range(0) ? hn::Algorithm::kDqn : hn::Algorithm::kQLearning;
  cfg.max_iterations = 500;
  cfg.target_mode = hn::TargetMode::kPreset;
  cfg.preset_targets = {200e6, 200e6};  // unreachable, so every episode runs to the cap
  for (auto _ : state) benchmark::DoNotOptimize(hn::run_episode(cfg, 1).iterations());
}
BENCHMARK(BM_Episode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
