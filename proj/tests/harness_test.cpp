#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hybridnet/config.hpp"
#include "hybridnet/errors.hpp"
#include "hybridnet/harness.hpp"
#include "oracles.hpp"

namespace hybridnet {
namespace {

ExperimentConfig quick_config(Algorithm algorithm) {
  ExperimentConfig cfg;
  cfg.algorithm = algorithm;
  cfg.max_iterations = 150;
  cfg.convergence_window = 20;
  return cfg;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hybridnet_" + name);
}

TEST(DetectConvergence, EntersBandAtIteration50) {
  std::vector<std::vector<double>> traces{std::vector<double>(200, 5e6)};
  for (std::size_t i = 49; i < 200; ++i) traces[0][i] = 20e6;
  const std::vector<double> t{20e6}, b{1e6};
  EXPECT_EQ(detect_convergence(traces, t, b, 100), 50u);
}

TEST(DetectConvergence, NeverInBandOrTooShort) {
  const std::vector<double> t{20e6}, b{1e6};
  std::vector<std::vector<double>> low{std::vector<double>(300, 19.99e6)};
  EXPECT_FALSE(detect_convergence(low, t, b, 100));
  std::vector<std::vector<double>> short_trace{std::vector<double>(99, 20.5e6)};
  EXPECT_FALSE(detect_convergence(short_trace, t, b, 100));
}

TEST(DetectConvergence, BandEdgesAreInclusive) {
  const std::vector<double> t{10e6, 10e6}, b{0.5e6, 0.5e6};
  std::vector<std::vector<double>> traces{std::vector<double>(10, 10e6), std::vector<double>(10, 10.5e6)};
  EXPECT_EQ(detect_convergence(traces, t, b, 10), 1u);
}

TEST(DetectConvergence, MeanNotPointwise) {
  // Alternates 19 and 22 Mbps: every sample is outside [20, 21] but the mean is 20.5.
  std::vector<std::vector<double>> traces{std::vector<double>(100)};
  for (std::size_t i = 0; i < 100; ++i) traces[0][i] = i % 2 ? 22e6 : 19e6;
  const std::vector<double> t{20e6}, b{1e6};
  EXPECT_EQ(detect_convergence(traces, t, b, 100), 1u);
}

TEST(DetectConvergence, MatchesBruteForceScan) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 3);
    const std::size_t len = 50 + uniform_index(rng, 150);
    const std::size_t window = 1 + uniform_index(rng, 40);
    std::vector<double> t(n), b(n);
    std::vector<std::vector<double>> traces(n, std::vector<double>(len));
    for (std::size_t u = 0; u < n; ++u) {
      t[u] = 10e6 + 15e6 * uniform01(rng);
      b[u] = std::max(0.05 * t[u], 0.5e6);
      const double drift = 4e6 * (uniform01(rng) - 0.5);
      for (std::size_t i = 0; i < len; ++i)
        traces[u][i] = t[u] + drift * (1.0 - static_cast<double>(i) / static_cast<double>(len)) +
                       3e6 * (uniform01(rng) - 0.3);
    }
    ASSERT_EQ(detect_convergence(traces, t, b, window), oracle::brute_force_convergence(traces, t, b, window))
        << "trial " << trial;
  }
}

TEST(Episode, SameSeedSameTrace) {
  for (auto algorithm : {Algorithm::kQLearning, Algorithm::kDqn}) {
    const auto cfg = quick_config(algorithm);
    const auto a = run_episode(cfg, 5);
    const auto b = run_episode(cfg, 5);
    EXPECT_EQ(a.rates, b.rates);
    EXPECT_EQ(a.rewards, b.rewards);
    EXPECT_EQ(a.convergence_iteration, b.convergence_iteration);
    EXPECT_EQ(a.positions, b.positions);
  }
}

TEST(Episode, RecordShapeAndEpsilon) {
  const auto cfg = quick_config(Algorithm::kQLearning);
  const auto rec = run_episode(cfg, 9);
  ASSERT_EQ(rec.rates.size(), 2u);
  EXPECT_EQ(rec.rates[0].size(), rec.iterations());
  EXPECT_EQ(rec.epsilons.size(), rec.iterations());
  EXPECT_DOUBLE_EQ(rec.epsilons[0], 1.0);
  if (rec.convergence_iteration) EXPECT_EQ(rec.iterations(), *rec.convergence_iteration + cfg.convergence_window - 1);
  else EXPECT_EQ(rec.iterations(), cfg.max_iterations);
}

TEST(Episode, PresetTargetsAndPositions) {
  auto cfg = quick_config(Algorithm::kQLearning);
  cfg.target_mode = TargetMode::kPreset;
  cfg.user_positions = {{1.0, 2.0}, {-3.0, 0.5}};
  const auto users = draw_users(cfg, 123);
  EXPECT_EQ(users[0].target_rate, 20e6);
  EXPECT_EQ(users[1].target_rate, 12e6);
  EXPECT_EQ(users[0].target_band, 1e6);
  EXPECT_EQ(users[1].position, (Point2{-3.0, 0.5}));
}

TEST(Episode, ZeroIterationsRejected) {
  auto cfg = quick_config(Algorithm::kDqn);
  cfg.max_iterations = 0;
  EXPECT_THROW(run_episode(cfg, 1), ConfigError);
}

TEST(MonteCarlo, ParallelMatchesSequential) {
  auto cfg = quick_config(Algorithm::kQLearning);
  cfg.master_seed = 40;
  const auto seq = run_monte_carlo(cfg, 6);
  cfg.workers = 3;
  const auto par = run_monte_carlo(cfg, 6);
  ASSERT_EQ(seq.runs.size(), par.runs.size());
  for (std::size_t i = 0; i < seq.runs.size(); ++i) {
    EXPECT_EQ(seq.runs[i].seed, 40u + i);
    EXPECT_EQ(seq.runs[i].seed, par.runs[i].seed);
    EXPECT_EQ(seq.runs[i].convergence_iteration, par.runs[i].convergence_iteration);
    EXPECT_EQ(seq.runs[i].iterations, par.runs[i].iterations);
  }
}

TEST(MonteCarlo, RunDependsOnlyOnItsSeed) {
  auto cfg = quick_config(Algorithm::kQLearning);
  cfg.master_seed = 10;
  const auto batch = run_monte_carlo(cfg, 4);
  cfg.master_seed = 12;
  const auto shifted = run_monte_carlo(cfg, 2);
  EXPECT_EQ(batch.runs[2].convergence_iteration, shifted.runs[0].convergence_iteration);
  EXPECT_EQ(batch.runs[3].iterations, shifted.runs[1].iterations);
  EXPECT_EQ(run_episode(cfg, 13).iterations(), batch.runs[3].iterations);
}

TEST(Summary, MedianRateAndCdf) {
  std::vector<RunOutcome> runs;
  const std::vector<std::optional<std::size_t>> iters{300, std::nullopt, 100, 200, 400, std::nullopt, 200};
  for (std::size_t i = 0; i < iters.size(); ++i) runs.push_back({i, i, iters[i], iters[i] ? std::optional(0.5) : std::nullopt, 0});
  const auto s = summarize(runs);
  EXPECT_DOUBLE_EQ(s.convergence_rate, 5.0 / 7.0);
  EXPECT_DOUBLE_EQ(*s.median, 200.0);
  EXPECT_DOUBLE_EQ(*s.mean_steady_state_gap_mbps, 0.5);
  ASSERT_EQ(s.cdf.size(), 4u);
  EXPECT_DOUBLE_EQ(s.cdf[1].iteration, 200.0);
  EXPECT_DOUBLE_EQ(s.cdf[1].fraction, 0.6);
  EXPECT_DOUBLE_EQ(s.cdf.back().fraction, 1.0);

  runs.pop_back();
  EXPECT_DOUBLE_EQ(*summarize(runs).median, 250.0);
}

TEST(Summary, CdfAtMedianIsNearHalf) {
  Rng rng(31);
  std::vector<RunOutcome> runs;
  for (std::size_t i = 0; i < 501; ++i) runs.push_back({i, i, 1 + uniform_index(rng, 4000), std::nullopt, 0});
  const auto s = summarize(runs);
  double at_median = 0.0;
  for (const auto& p : s.cdf)
    if (p.iteration <= *s.median) at_median = p.fraction;
  EXPECT_NEAR(at_median, 0.5, 1.0 / 501.0 + 1e-12);
  for (std::size_t i = 1; i < s.cdf.size(); ++i) EXPECT_GT(s.cdf[i].fraction, s.cdf[i - 1].fraction);
}

TEST(Summary, NothingConverged) {
  const auto s = summarize({{0, 1, std::nullopt, std::nullopt, 10}});
  EXPECT_EQ(s.convergence_rate, 0.0);
  EXPECT_FALSE(s.median);
  EXPECT_TRUE(s.cdf.empty());
}

TEST(Csv, EpisodeColumnsAndRoundTrip) {
  const auto rec = run_episode(quick_config(Algorithm::kQLearning), 3);
  const auto path = temp_file("episode.csv");
  export_csv(rec, path);
  const auto table = read_csv(path);
  EXPECT_EQ(table.header, (std::vector<std::string>{"iteration", "rate_user_1", "rate_user_2", "reward", "epsilon"}));
  ASSERT_EQ(table.rows.size(), rec.iterations());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ASSERT_EQ(table.rows[i].size(), 5u);
    EXPECT_EQ(std::stoul(table.rows[i][0]), i + 1);
    EXPECT_EQ(std::stod(table.rows[i][1]), rec.rates[0][i] / 1e6);
    EXPECT_EQ(std::stod(table.rows[i][3]), rec.rewards[i]);
  }
  std::ifstream raw(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(raw)), std::istreambuf_iterator<char>());
  EXPECT_EQ(bytes.find('\r'), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Csv, EmptyEpisodeStillHasHeader) {
  EpisodeRecord rec;
  rec.rates.assign(2, {});
  std::ostringstream out;
  write_csv(rec, out);
  EXPECT_EQ(out.str(), "iteration,rate_user_1,rate_user_2,reward,epsilon\n");
}

TEST(Csv, SummaryBlankForUnconverged) {
  const auto s = summarize({{0, 7, 120, 0.3, 219}, {1, 8, std::nullopt, std::nullopt, 5000}});
  std::ostringstream out;
  write_csv(s, out);
  EXPECT_EQ(out.str(), "run_index,seed,converged,convergence_iteration\n0,7,1,120\n1,8,0,\n");
}

TEST(Csv, UnwritablePathNamesIt) {
  EpisodeRecord rec;
  const std::filesystem::path bad = "/nonexistent-dir/x.csv";
  try {
    export_csv(rec, bad);
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(Config, DefaultsValidateAndDumpRoundTrips) {
  ExperimentConfig cfg;
  cfg.validate();
  cfg.algorithm = Algorithm::kQLearning;
  cfg.vlc_power_levels = 7;
  cfg.user_positions = {{1.5, -2.0}, {0.0, 4.25}};
  cfg.env.rf.fading_model = FadingModel::kDbDomain;
  const auto text = dump_config(cfg);
  const auto back = parse_config(text);
  EXPECT_EQ(dump_config(back), text);
  EXPECT_EQ(back.algorithm, Algorithm::kQLearning);
  EXPECT_EQ(back.vlc_power_levels, 7u);
  EXPECT_EQ(back.user_positions, cfg.user_positions);
  EXPECT_DOUBLE_EQ(back.env.vlc.noise_psd, cfg.env.vlc.noise_psd);
}

TEST(Config, ParsesUnitsAndComments) {
  const auto cfg = parse_config("# comment\np_max_rf_w = 0.02\ntarget_mode = preset\ntargets_mbps = 18, 9  # trailing\nalgorithm = ql\n");
  EXPECT_DOUBLE_EQ(cfg.env.p_max_rf, 0.02);
  EXPECT_EQ(cfg.target_mode, TargetMode::kPreset);
  EXPECT_EQ(cfg.preset_targets, (std::vector<double>{18e6, 9e6}));
  EXPECT_EQ(cfg.algorithm, Algorithm::kQLearning);
}

TEST(Config, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("seed = 1\nbogus_key = 3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("max_iterations = ten\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("seed = 1\nseed = 2\n").find("line 2"), std::string::npos);
  EXPECT_THROW(parse_config("p_max_vlc_w = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("n_users = 3\ntarget_mode = preset\ntargets_mbps = 20, 12\n"), ConfigError);
}

}  // namespace
}  // namespace hybridnet
