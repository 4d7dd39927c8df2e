// Command-line front end: single episodes, Monte Carlo batches, config dumps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/dqn.hpp"
#include "hybridnet/errors.hpp"
#include "hybridnet/harness.hpp"
#include "hybridnet/tabular_rl.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::string targets;
  bool frozen_channel = false;
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Config file (key = value per line)")->check(CLI::ExistingFile);
  cmd->add_option("--algorithm", o.algorithm, "ql or dqn")->check(CLI::IsMember({"ql", "dqn"}));
  cmd->add_option("--seed", o.seed, "Episode seed (run) or master seed (montecarlo)");
  cmd->add_option("--targets", o.targets, "Preset per-user target rates in Mbps, e.g. 20,12");
  cmd->add_flag("--frozen-channel", o.frozen_channel, "Pin shadowing and fading at their means");
  cmd->add_option("--max-iterations", o.max_iterations, "Iteration cap per episode");
  cmd->add_option("--workers", o.workers, "Worker threads for Monte Carlo batches");
}

hybridnet::ExperimentConfig resolve(const CommonOptions& o) {
  using namespace hybridnet;
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (!o.algorithm.empty()) cfg.algorithm = parse_algorithm(o.algorithm);
  if (o.seed) cfg.master_seed = *o.seed;
  if (!o.targets.empty()) {
    // Reuse the config grammar so the flag and the file agree on parsing.
    const ExperimentConfig t = parse_config("targets_mbps = " + o.targets);
    cfg.preset_targets = t.preset_targets;
    cfg.target_mode = TargetMode::kPreset;
    cfg.n_users = cfg.preset_targets.size();
  }
  if (o.frozen_channel) cfg.env.frozen_channel = true;
  if (o.max_iterations) cfg.max_iterations = *o.max_iterations;
  if (o.workers) cfg.workers = *o.workers;
  cfg.validate();
  return cfg;
}

void emit(const std::string& out_path, const auto& data) {
  if (out_path.empty() || out_path == "-") {
    hybridnet::write_csv(data, std::cout);
  } else {
    hybridnet::export_csv(data, out_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid RF/VLC multi-agent power allocation simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_out;
  std::string qtable_out;
  std::string weights_out;
  auto* run = app.add_subcommand("run", "Run one episode and emit its per-iteration CSV");
  add_common(run, run_opts);
  run->add_option("--out", run_out, "Episode CSV path ('-' or omitted: stdout)");
  run->add_option("--qtable-out", qtable_out, "QL only: directory for per-agent Q-table CSVs");
  run->add_option("--weights-out", weights_out, "DQN only: directory for per-agent weight CSVs");

  CommonOptions mc_opts;
  std::string mc_out;
  std::optional<std::size_t> runs;
  bool quiet = false;
  auto* mc = app.add_subcommand("montecarlo", "Run a batch of seeded episodes and emit the summary CSV");
  add_common(mc, mc_opts);
  mc->add_option("--runs", runs, "Number of episodes");
  mc->add_option("--out", mc_out, "Summary CSV path ('-' or omitted: stdout)");
  mc->add_flag("--quiet", quiet, "No per-run progress on stderr");

  CommonOptions dump_opts;
  auto* dump = app.add_subcommand("dump-config", "Print the resolved configuration");
  add_common(dump, dump_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace hybridnet;
    if (*run) {
      const ExperimentConfig cfg = resolve(run_opts);
      Episode episode(cfg, cfg.master_seed);
      const EpisodeRecord rec = episode.run();
      emit(run_out, rec);

      const auto& agents = episode.agents();
      for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string name = i + 1 == agents.size() ? "rf" : "vlc" + std::to_string(i);
        if (!qtable_out.empty()) {
          if (const auto* ql = dynamic_cast<const QLearningAgent*>(agents[i].get())) {
            std::filesystem::create_directories(qtable_out);
            write_qtable_csv(ql->table(), std::filesystem::path(qtable_out) / ("qtable_" + name + ".csv"));
          }
        }
        if (!weights_out.empty()) {
          if (const auto* dqn = dynamic_cast<const DqnAgent*>(agents[i].get())) {
            std::filesystem::create_directories(weights_out);
            write_weights_csv(dqn->network(), cfg.master_seed,
                              std::filesystem::path(weights_out) / ("weights_" + name + ".csv"));
          }
        }
      }

      std::cerr << to_string(cfg.algorithm) << " seed " << rec.seed << ": ";
      if (rec.convergence_iteration)
        std::cerr << "converged at iteration " << *rec.convergence_iteration;
      else
        std::cerr << "not converged";
      std::cerr << " (" << rec.iterations() << " iterations, " << rec.wall_time_s << " s)\n";
    } else if (*mc) {
      ExperimentConfig cfg = resolve(mc_opts);
      if (runs) cfg.monte_carlo_runs = *runs;
      cfg.validate();
      std::function<void(const RunOutcome&)> progress;
      if (!quiet) {
        progress = [](const RunOutcome& r) {
          std::cerr << "run " << r.run_index << " seed " << r.seed << ": ";
          if (r.convergence_iteration)
            std::cerr << "converged at " << *r.convergence_iteration << '\n';
          else
            std::cerr << "not converged after " << r.iterations << '\n';
        };
      }
      const MonteCarloSummary summary = run_monte_carlo(cfg, cfg.monte_carlo_runs, progress);
      emit(mc_out, summary);
      std::cerr << to_string(cfg.algorithm) << ": " << summary.runs.size() << " runs, convergence rate "
                << summary.convergence_rate * 100.0 << "%, median ";
      if (summary.median)
        std::cerr << *summary.median;
      else
        std::cerr << "n/a";
      if (summary.mean_steady_state_gap_mbps)
        std::cerr << ", mean steady-state gap " << *summary.mean_steady_state_gap_mbps << " Mbps";
      std::cerr << '\n';
    } else if (*dump) {
      std::cout << dump_config(resolve(dump_opts));
    }
  } catch (const hybridnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
