#pragma once

// Experiment configuration and its flat "key = value" text form.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hybridnet/dqn.hpp"
#include "hybridnet/environment.hpp"
#include "hybridnet/tabular_rl.hpp"

namespace hybridnet {

enum class Algorithm { kQLearning, kDqn };
enum class TargetMode { kPreset, kUniform };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct ExperimentConfig {
  EnvironmentParams env;
  std::size_t n_users = 2;

  TargetMode target_mode = TargetMode::kUniform;
  std::vector<double> preset_targets{20e6, 12e6};  // bit/s
  double target_min = 10e6;                        // bit/s
  double target_max = 25e6;                        // bit/s
  std::vector<Point2> user_positions;              // empty: uniform random placement

  Algorithm algorithm = Algorithm::kDqn;
  std::size_t vlc_power_levels = 11;
  std::size_t rf_power_levels = 11;
  QLearningParams ql;
  DqnParams dqn;

  std::size_t max_iterations = 5000;
  std::size_t convergence_window = 100;
  std::size_t monte_carlo_runs = 1000;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;

  // Throws ConfigError on the first violated constraint.
  void validate() const;
};

// Parses the text form over the defaults. Unknown keys, malformed values and
// duplicate keys are ConfigErrors that name the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key with its resolved value; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace hybridnet
