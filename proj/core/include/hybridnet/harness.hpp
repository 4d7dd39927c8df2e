#pragma once

// Episode loop, convergence detection, Monte Carlo batches and CSV export.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hybridnet/agent.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/environment.hpp"

namespace hybridnet {

struct EpisodeRecord {
  std::uint64_t seed = 0;
  std::vector<Point2> positions;
  std::vector<double> targets;  // bit/s
  std::vector<double> bands;    // bit/s
  std::vector<std::vector<double>> rates;  // [user][iteration - 1], bit/s
  std::vector<double> rewards;             // Mbps
  std::vector<double> epsilons;
  std::optional<std::size_t> convergence_iteration;  // 1-based
  double wall_time_s = 0.0;

  std::size_t iterations() const { return rewards.size(); }
};

// True when every user's mean rate over iterations [start, start + window)
// (1-based) lies in [T, T + B].
bool window_in_band(std::span<const std::vector<double>> traces, std::span<const double> targets,
                    std::span<const double> bands, std::size_t start, std::size_t window);

// First 1-based iteration t* whose window satisfies window_in_band, if any.
std::optional<std::size_t> detect_convergence(std::span<const std::vector<double>> traces,
                                              std::span<const double> targets, std::span<const double> bands,
                                              std::size_t window);

// Mean over users of |window-mean rate - T| across the convergence window, Mbps.
std::optional<double> steady_state_gap(const EpisodeRecord& record, std::size_t window);

// Users, environment and agents for one seeded episode. Agents are ordered
// VLC AP 0..K-1, then the RF AP.
class Episode {
 public:
  Episode(const ExperimentConfig& cfg, std::uint64_t seed);

  // Lets callers decorate agents (e.g. to observe what each one receives).
  using AgentWrapper = std::function<std::unique_ptr<PowerAgent>(std::size_t index, std::unique_ptr<PowerAgent>)>;
  void wrap_agents(const AgentWrapper& wrap);

  // Runs until convergence or max_iterations. Call once.
  EpisodeRecord run();

  const HybridEnvironment& environment() const { return env_; }
  const std::vector<std::unique_ptr<PowerAgent>>& agents() const { return agents_; }

 private:
  ExperimentConfig cfg_;
  std::uint64_t seed_;
  HybridEnvironment env_;
  std::vector<std::unique_ptr<PowerAgent>> agents_;
};

// Positions and targets the episode with this seed would use.
std::vector<UserConfig> draw_users(const ExperimentConfig& cfg, std::uint64_t seed);

EpisodeRecord run_episode(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunOutcome {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> convergence_iteration;
  std::optional<double> steady_state_gap_mbps;
  std::size_t iterations = 0;
};

struct CdfPoint {
  double iteration = 0.0;
  double fraction = 0.0;
};

struct MonteCarloSummary {
  std::vector<RunOutcome> runs;
  std::optional<double> median;  // over converged runs
  double convergence_rate = 0.0;
  std::optional<double> mean_steady_state_gap_mbps;
  std::vector<CdfPoint> cdf;  // empirical CDF of convergence iterations over converged runs

  std::vector<std::size_t> convergence_iterations() const;
};

MonteCarloSummary summarize(std::vector<RunOutcome> runs);

// Episodes use seed master_seed + i and may run on cfg.workers threads; the
// summary is identical to a sequential run.
MonteCarloSummary run_monte_carlo(const ExperimentConfig& cfg, std::size_t n,
                                  const std::function<void(const RunOutcome&)>& progress = {});

// Header: iteration,rate_user_1..N,reward,epsilon (rates in Mbps).
void write_csv(const EpisodeRecord& record, std::ostream& out);
// Header: run_index,seed,converged,convergence_iteration (blank when not converged).
void write_csv(const MonteCarloSummary& summary, std::ostream& out);

// Files are written with LF line endings; I/O failures name the path.
void export_csv(const EpisodeRecord& record, const std::filesystem::path& path);
void export_csv(const MonteCarloSummary& summary, const std::filesystem::path& path);

// Rows of an exported CSV, without the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace hybridnet
