#include "hybridnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hybridnet/dqn.hpp"
#include "hybridnet/errors.hpp"
#include "hybridnet/policy.hpp"
#include "hybridnet/tabular_rl.hpp"

namespace hybridnet {

bool window_in_band(std::span<const std::vector<double>> traces, std::span<const double> targets,
                    std::span<const double> bands, std::size_t start, std::size_t window) {
  for (std::size_t u = 0; u < traces.size(); ++u) {
    const auto& trace = traces[u];
    if (start < 1 || start - 1 + window > trace.size()) return false;
    double sum = 0.0;
    for (std::size_t i = start - 1; i < start - 1 + window; ++i) sum += trace[i];
    const double mean = sum / static_cast<double>(window);
    if (mean < targets[u] || mean > targets[u] + bands[u]) return false;
  }
  return true;
}

std::optional<std::size_t> detect_convergence(std::span<const std::vector<double>> traces,
                                              std::span<const double> targets, std::span<const double> bands,
                                              std::size_t window) {
  if (window == 0) throw std::invalid_argument("detect_convergence: window must be at least 1");
  if (traces.size() != targets.size() || traces.size() != bands.size())
    throw ShapeError("detect_convergence: traces, targets and bands differ in length");
  if (traces.empty()) return std::nullopt;
  std::size_t length = traces.front().size();
  for (const auto& t : traces) length = std::min(length, t.size());
  for (std::size_t start = 1; start + window - 1 <= length; ++start)
    if (window_in_band(traces, targets, bands, start, window)) return start;
  return std::nullopt;
}

std::optional<double> steady_state_gap(const EpisodeRecord& record, std::size_t window) {
  if (!record.convergence_iteration) return std::nullopt;
  const std::size_t start = *record.convergence_iteration - 1;
  double total = 0.0;
  for (std::size_t u = 0; u < record.rates.size(); ++u) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + window; ++i) sum += record.rates[u][i];
    total += std::abs(sum / static_cast<double>(window) - record.targets[u]);
  }
  return total / static_cast<double>(record.rates.size()) / kMbps;
}

std::vector<UserConfig> draw_users(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::vector<Point2> positions = cfg.user_positions;
  if (positions.empty()) positions = place_users(seed, cfg.env.layout, cfg.n_users);

  std::vector<UserConfig> users;
  Rng target_rng = make_rng(seed, Stream::kTargets);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const double target = cfg.target_mode == TargetMode::kPreset
                              ? cfg.preset_targets[u]
                              : cfg.target_min + (cfg.target_max - cfg.target_min) * uniform01(target_rng);
    users.push_back(UserConfig::at(positions[u], target));
  }
  return users;
}

namespace {

const ExperimentConfig& validated(const ExperimentConfig& cfg) {
  cfg.validate();
  return cfg;
}

std::unique_ptr<PowerAgent> make_agent(const ExperimentConfig& cfg, ActionSpace space, std::uint64_t seed,
                                       std::size_t agent_index) {
  Rng explore = make_rng(seed, Stream::kExploration, agent_index);
  if (cfg.algorithm == Algorithm::kQLearning)
    return std::make_unique<QLearningAgent>(std::move(space), cfg.ql, std::move(explore));
  return std::make_unique<DqnAgent>(std::move(space), cfg.dqn, make_rng(seed, Stream::kAgentInit, agent_index),
                                    std::move(explore), make_rng(seed, Stream::kReplay, agent_index));
}

}  // namespace

Episode::Episode(const ExperimentConfig& cfg, std::uint64_t seed)
    : cfg_(validated(cfg)),
      seed_(seed),
      env_(cfg.env, draw_users(cfg, seed), make_rng(seed, Stream::kChannel)) {
  const auto vlc_space =
      ActionSpace::enumerate(evenly_spaced_levels(cfg_.vlc_power_levels, cfg_.env.p_max_vlc), cfg_.n_users,
                             cfg_.env.p_max_vlc);
  const auto rf_space = ActionSpace::enumerate(evenly_spaced_levels(cfg_.rf_power_levels, cfg_.env.p_max_rf),
                                               cfg_.n_users, cfg_.env.p_max_rf);
  const std::size_t k = env_.num_vlc_aps();
  for (std::size_t l = 0; l < k; ++l) agents_.push_back(make_agent(cfg_, vlc_space, seed, l));
  agents_.push_back(make_agent(cfg_, rf_space, seed, k));
}

void Episode::wrap_agents(const AgentWrapper& wrap) {
  for (std::size_t i = 0; i < agents_.size(); ++i) agents_[i] = wrap(i, std::move(agents_[i]));
}

EpisodeRecord Episode::run() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = env_.num_users();
  const std::size_t k = env_.num_vlc_aps();
  const std::size_t window = cfg_.convergence_window;

  EpisodeRecord rec;
  rec.seed = seed_;
  for (const auto& u : env_.users()) {
    rec.positions.push_back(u.position);
    rec.targets.push_back(u.target_rate);
    rec.bands.push_back(u.target_band);
  }
  rec.rates.assign(n, {});
  for (auto& r : rec.rates) r.reserve(cfg_.max_iterations);
  rec.rewards.reserve(cfg_.max_iterations);
  rec.epsilons.reserve(cfg_.max_iterations);

  NetworkState obs = env_.state();
  std::vector<std::size_t> chosen(agents_.size());
  JointAction joint;
  joint.vlc_actions.resize(k);

  for (std::size_t t = 1; t <= cfg_.max_iterations; ++t) {
    const double eps = epsilon(t);
    for (std::size_t i = 0; i < agents_.size(); ++i) chosen[i] = agents_[i]->act(obs, eps);
    for (std::size_t l = 0; l < k; ++l) joint.vlc_actions[l] = agents_[l]->action_space()[chosen[l]];
    joint.rf_action = agents_[k]->action_space()[chosen[k]];

    StepResult step = env_.step(joint);
    for (std::size_t i = 0; i < agents_.size(); ++i) agents_[i]->learn(obs, chosen[i], step.reward, step.state);

    for (std::size_t u = 0; u < n; ++u) rec.rates[u].push_back(step.state.actual_rates[u]);
    rec.rewards.push_back(step.reward);
    rec.epsilons.push_back(eps);
    obs = std::move(step.state);

    if (t >= window && window_in_band(rec.rates, rec.targets, rec.bands, t - window + 1, window)) {
      rec.convergence_iteration = t - window + 1;
      break;
    }
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

EpisodeRecord run_episode(const ExperimentConfig& cfg, std::uint64_t seed) { return Episode(cfg, seed).run(); }

std::vector<std::size_t> MonteCarloSummary::convergence_iterations() const {
  std::vector<std::size_t> out;
  for (const auto& r : runs)
    if (r.convergence_iteration) out.push_back(*r.convergence_iteration);
  return out;
}

MonteCarloSummary summarize(std::vector<RunOutcome> runs) {
  MonteCarloSummary s;
  s.runs = std::move(runs);
  auto iters = s.convergence_iterations();
  std::sort(iters.begin(), iters.end());
  if (!s.runs.empty()) s.convergence_rate = static_cast<double>(iters.size()) / static_cast<double>(s.runs.size());
  if (!iters.empty()) {
    const std::size_t m = iters.size();
    s.median = m % 2 ? static_cast<double>(iters[m / 2])
                     : 0.5 * (static_cast<double>(iters[m / 2 - 1]) + static_cast<double>(iters[m / 2]));
    for (std::size_t i = 0; i < m; ++i)
      if (i + 1 == m || iters[i + 1] != iters[i])
        s.cdf.push_back({static_cast<double>(iters[i]), static_cast<double>(i + 1) / static_cast<double>(m)});
    double gap = 0.0;
    std::size_t count = 0;
    for (const auto& r : s.runs)
      if (r.steady_state_gap_mbps) {
        gap += *r.steady_state_gap_mbps;
        ++count;
      }
    if (count) s.mean_steady_state_gap_mbps = gap / static_cast<double>(count);
  }
  return s;
}

MonteCarloSummary run_monte_carlo(const ExperimentConfig& cfg, std::size_t n,
                                  const std::function<void(const RunOutcome&)>& progress) {
  cfg.validate();
  if (n == 0) throw ConfigError("Monte Carlo batch needs at least one run");
  std::vector<RunOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const std::uint64_t seed = cfg.master_seed + i;
      const EpisodeRecord rec = run_episode(cfg, seed);
      RunOutcome& o = outcomes[i];
      o.run_index = i;
      o.seed = seed;
      o.convergence_iteration = rec.convergence_iteration;
      o.steady_state_gap_mbps = steady_state_gap(rec, cfg.convergence_window);
      o.iterations = rec.iterations();
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(o);
      }
    }
  };

  const std::size_t threads = std::min(cfg.workers, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return summarize(std::move(outcomes));
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_csv(const EpisodeRecord& record, std::ostream& out) {
  out << "iteration";
  for (std::size_t u = 0; u < record.rates.size(); ++u) out << ",rate_user_" << (u + 1);
  out << ",reward,epsilon\n";
  for (std::size_t i = 0; i < record.iterations(); ++i) {
    out << (i + 1);
    for (const auto& trace : record.rates) out << ',' << num(trace[i] / kMbps);
    out << ',' << num(record.rewards[i]) << ',' << num(record.epsilons[i]) << '\n';
  }
}

void write_csv(const MonteCarloSummary& summary, std::ostream& out) {
  out << "run_index,seed,converged,convergence_iteration\n";
  for (const auto& r : summary.runs) {
    out << r.run_index << ',' << r.seed << ',' << (r.convergence_iteration ? 1 : 0) << ',';
    if (r.convergence_iteration) out << *r.convergence_iteration;
    out << '\n';
  }
}

void export_csv(const EpisodeRecord& record, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_csv(record, out);
  finish(out, path);
}

void export_csv(const MonteCarloSummary& summary, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_csv(summary, out);
  finish(out, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
      const auto comma = line.find(',', begin);
      cells.push_back(line.substr(begin, comma - begin));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    return cells;
  };
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) table.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) table.rows.push_back(split(line));
  return table;
}

}  // namespace hybridnet
