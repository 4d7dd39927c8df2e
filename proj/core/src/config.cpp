#include "hybridnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hybridnet/errors.hpp"

namespace hybridnet {

std::string_view to_string(Algorithm a) { return a == Algorithm::kQLearning ? "ql" : "dqn"; }

Algorithm parse_algorithm(std::string_view s) {
  if (s == "ql") return Algorithm::kQLearning;
  if (s == "dqn") return Algorithm::kDqn;
  throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected ql or dqn)");
}

void ExperimentConfig::validate() const {
  env.validate();
  if (n_users == 0) throw ConfigError("n_users must be at least 1");
  if (max_iterations == 0) throw ConfigError("max_iterations must be at least 1");
  if (convergence_window == 0) throw ConfigError("convergence_window must be at least 1");
  if (max_iterations < convergence_window) throw ConfigError("max_iterations must be >= convergence_window");
  if (monte_carlo_runs == 0) throw ConfigError("monte_carlo_runs must be at least 1");
  if (workers == 0) throw ConfigError("workers must be at least 1");
  if (vlc_power_levels == 0 || rf_power_levels == 0) throw ConfigError("power level counts must be at least 1");
  if (target_mode == TargetMode::kPreset) {
    if (preset_targets.size() != n_users) throw ConfigError("targets_mbps must list one target per user");
    for (double t : preset_targets)
      if (!(t > 0.0)) throw ConfigError("target rates must be positive");
  } else if (!(target_min > 0.0) || !(target_max >= target_min)) {
    throw ConfigError("target range must satisfy 0 < target_min_mbps <= target_max_mbps");
  }
  if (!user_positions.empty()) {
    if (user_positions.size() != n_users) throw ConfigError("user_positions must list one position per user");
    for (const auto& p : user_positions)
      if (!env.layout.contains(p)) throw ConfigError("a fixed user position lies outside the room");
  }
  if (ql.learning_rate < 0.0 || ql.learning_rate > 1.0) throw ConfigError("learning_rate must lie in [0, 1]");
  if (ql.discount < 0.0 || ql.discount >= 1.0) throw ConfigError("discount must lie in [0, 1)");
  if (dqn.discount < 0.0 || dqn.discount >= 1.0) throw ConfigError("dqn_discount must lie in [0, 1)");
  if (dqn.replay_capacity == 0 || dqn.minibatch_size == 0) throw ConfigError("replay sizes must be at least 1");
  if (!(dqn.adam.learning_rate > 0.0)) throw ConfigError("adam_learning_rate must be positive");
  if (!(dqn.state_normalization > 0.0)) throw ConfigError("state_normalization_mbps must be positive");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split(v, ',')) out.push_back(to_double(s));
  return out;
}

Point2 to_point(const std::string& v) {
  const auto xy = to_doubles(v);
  if (xy.size() != 2) throw ConfigError("expected a point 'x,y', got '" + v + "'");
  return {xy[0], xy[1]};
}

std::vector<Point2> to_points(const std::string& v) {
  std::vector<Point2> out;
  for (const auto& s : split(v, ';')) out.push_back(to_point(s));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Values that pass through a unit conversion are printed at 12 significant
// digits so that e.g. -57 dBm/MHz does not come back as -56.99999999999999.
std::string fmt_converted(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v, double scale = 1.0) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_converted(v[i] / scale);
  return out;
}

std::string fmt_points(const std::vector<Point2>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? "; " : "") + fmt(pts[i].x) + "," + fmt(pts[i].y);
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

// Ordered so that dump_config groups related keys.
const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"p_max_rf_w", {[](C& c, S v) { c.env.p_max_rf = to_double(v); }, [](const C& c) { return fmt(c.env.p_max_rf); }}},
      {"noise_psd_rf_dbm_per_mhz",
       {[](C& c, S v) { c.env.rf.noise_psd = dbm_per_mhz_to_w_per_hz(to_double(v)); },
        [](const C& c) { return fmt_converted(w_per_hz_to_dbm_per_mhz(c.env.rf.noise_psd)); }}},
      {"bandwidth_rf_mhz",
       {[](C& c, S v) { c.env.rf.bandwidth = to_double(v) * kMHz; },
        [](const C& c) { return fmt_converted(c.env.rf.bandwidth / kMHz); }}},
      {"p_max_vlc_w", {[](C& c, S v) { c.env.p_max_vlc = to_double(v); }, [](const C& c) { return fmt(c.env.p_max_vlc); }}},
      {"noise_psd_vlc_dbm_per_mhz",
       {[](C& c, S v) { c.env.vlc.noise_psd = dbm_per_mhz_to_w_per_hz(to_double(v)); },
        [](const C& c) { return fmt_converted(w_per_hz_to_dbm_per_mhz(c.env.vlc.noise_psd)); }}},
      {"bandwidth_vlc_mhz",
       {[](C& c, S v) { c.env.vlc_bandwidth = to_double(v) * kMHz; },
        [](const C& c) { return fmt_converted(c.env.vlc_bandwidth / kMHz); }}},
      {"ceiling_height_m",
       {[](C& c, S v) { c.env.layout.ceiling_height = to_double(v); },
        [](const C& c) { return fmt(c.env.layout.ceiling_height); }}},
      {"psi_fov_deg",
       {[](C& c, S v) { c.env.vlc.fov_half = deg_to_rad(to_double(v)); },
        [](const C& c) { return fmt_converted(rad_to_deg(c.env.vlc.fov_half)); }}},
      {"psi_half_deg",
       {[](C& c, S v) { c.env.vlc.semi_angle_half_power = deg_to_rad(to_double(v)); },
        [](const C& c) { return fmt_converted(rad_to_deg(c.env.vlc.semi_angle_half_power)); }}},
      {"pd_area_m2", {[](C& c, S v) { c.env.vlc.pd_area = to_double(v); }, [](const C& c) { return fmt(c.env.vlc.pd_area); }}},
      {"responsivity_a_per_w",
       {[](C& c, S v) { c.env.vlc.responsivity = to_double(v); }, [](const C& c) { return fmt(c.env.vlc.responsivity); }}},
      {"filter_gain", {[](C& c, S v) { c.env.vlc.filter_gain = to_double(v); }, [](const C& c) { return fmt(c.env.vlc.filter_gain); }}},
      {"concentrator_index",
       {[](C& c, S v) { c.env.vlc.concentrator_index = to_double(v); },
        [](const C& c) { return fmt(c.env.vlc.concentrator_index); }}},
      {"conversion_efficiency",
       {[](C& c, S v) { c.env.vlc.conversion_eff = to_double(v); }, [](const C& c) { return fmt(c.env.vlc.conversion_eff); }}},
      {"modulation_depth",
       {[](C& c, S v) { c.env.vlc.modulation_depth = to_double(v); },
        [](const C& c) { return fmt(c.env.vlc.modulation_depth); }}},
      {"pathloss_exponent",
       {[](C& c, S v) { c.env.rf.pathloss_exponent = to_double(v); },
        [](const C& c) { return fmt(c.env.rf.pathloss_exponent); }}},
      {"reference_distance_m",
       {[](C& c, S v) { c.env.rf.reference_distance = to_double(v); },
        [](const C& c) { return fmt(c.env.rf.reference_distance); }}},
      {"shadowing_std_db",
       {[](C& c, S v) { c.env.rf.shadowing_stddev = to_double(v); },
        [](const C& c) { return fmt(c.env.rf.shadowing_stddev); }}},
      {"fading_mean_db",
       {[](C& c, S v) { c.env.rf.fading_mean_db = to_double(v); }, [](const C& c) { return fmt(c.env.rf.fading_mean_db); }}},
      {"fading_model",
       {[](C& c, S v) {
          if (v == "linear")
            c.env.rf.fading_model = FadingModel::kLinearMean;
          else if (v == "db")
            c.env.rf.fading_model = FadingModel::kDbDomain;
          else
            throw ConfigError("fading_model must be 'linear' or 'db'");
        },
        [](const C& c) { return std::string(c.env.rf.fading_model == FadingModel::kLinearMean ? "linear" : "db"); }}},
      {"frozen_channel",
       {[](C& c, S v) { c.env.frozen_channel = to_bool(v); },
        [](const C& c) { return std::string(c.env.frozen_channel ? "true" : "false"); }}},
      {"room_width_m", {[](C& c, S v) { c.env.layout.width = to_double(v); }, [](const C& c) { return fmt(c.env.layout.width); }}},
      {"room_depth_m", {[](C& c, S v) { c.env.layout.depth = to_double(v); }, [](const C& c) { return fmt(c.env.layout.depth); }}},
      {"rf_ap", {[](C& c, S v) { c.env.layout.rf_ap = to_point(v); }, [](const C& c) { return fmt_points({c.env.layout.rf_ap}); }}},
      {"vlc_aps",
       {[](C& c, S v) { c.env.layout.vlc_aps = to_points(v); }, [](const C& c) { return fmt_points(c.env.layout.vlc_aps); }}},
      {"n_users", {[](C& c, S v) { c.n_users = to_uint(v); }, [](const C& c) { return std::to_string(c.n_users); }}},
      {"target_mode",
       {[](C& c, S v) {
          if (v == "preset")
            c.target_mode = TargetMode::kPreset;
          else if (v == "uniform")
            c.target_mode = TargetMode::kUniform;
          else
            throw ConfigError("target_mode must be 'preset' or 'uniform'");
        },
        [](const C& c) { return std::string(c.target_mode == TargetMode::kPreset ? "preset" : "uniform"); }}},
      {"targets_mbps",
       {[](C& c, S v) {
          c.preset_targets.clear();
          for (double t : to_doubles(v)) c.preset_targets.push_back(t * kMbps);
        },
        [](const C& c) { return fmt_list(c.preset_targets, kMbps); }}},
      {"target_min_mbps",
       {[](C& c, S v) { c.target_min = to_double(v) * kMbps; }, [](const C& c) { return fmt_converted(c.target_min / kMbps); }}},
      {"target_max_mbps",
       {[](C& c, S v) { c.target_max = to_double(v) * kMbps; }, [](const C& c) { return fmt_converted(c.target_max / kMbps); }}},
      {"user_positions",
       {[](C& c, S v) { c.user_positions = to_points(v); }, [](const C& c) { return fmt_points(c.user_positions); }}},
      {"algorithm",
       {[](C& c, S v) { c.algorithm = parse_algorithm(v); }, [](const C& c) { return std::string(to_string(c.algorithm)); }}},
      {"vlc_power_levels",
       {[](C& c, S v) { c.vlc_power_levels = to_uint(v); }, [](const C& c) { return std::to_string(c.vlc_power_levels); }}},
      {"rf_power_levels",
       {[](C& c, S v) { c.rf_power_levels = to_uint(v); }, [](const C& c) { return std::to_string(c.rf_power_levels); }}},
      {"learning_rate", {[](C& c, S v) { c.ql.learning_rate = to_double(v); }, [](const C& c) { return fmt(c.ql.learning_rate); }}},
      {"discount_factor",
       {[](C& c, S v) { c.ql.discount = c.dqn.discount = to_double(v); }, [](const C& c) { return fmt(c.ql.discount); }}},
      {"dqn_hidden_layers",
       {[](C& c, S v) {
          c.dqn.hidden_layers.clear();
          for (const auto& s : split(v, ',')) c.dqn.hidden_layers.push_back(to_uint(s));
        },
        [](const C& c) {
          std::string out;
          for (std::size_t i = 0; i < c.dqn.hidden_layers.size(); ++i)
            out += (i ? "," : "") + std::to_string(c.dqn.hidden_layers[i]);
          return out;
        }}},
      {"replay_capacity",
       {[](C& c, S v) { c.dqn.replay_capacity = to_uint(v); }, [](const C& c) { return std::to_string(c.dqn.replay_capacity); }}},
      {"minibatch_size",
       {[](C& c, S v) { c.dqn.minibatch_size = to_uint(v); }, [](const C& c) { return std::to_string(c.dqn.minibatch_size); }}},
      {"adam_learning_rate",
       {[](C& c, S v) { c.dqn.adam.learning_rate = to_double(v); }, [](const C& c) { return fmt(c.dqn.adam.learning_rate); }}},
      {"adam_beta1", {[](C& c, S v) { c.dqn.adam.beta1 = to_double(v); }, [](const C& c) { return fmt(c.dqn.adam.beta1); }}},
      {"adam_beta2", {[](C& c, S v) { c.dqn.adam.beta2 = to_double(v); }, [](const C& c) { return fmt(c.dqn.adam.beta2); }}},
      {"adam_epsilon",
       {[](C& c, S v) { c.dqn.adam.epsilon_hat = to_double(v); }, [](const C& c) { return fmt(c.dqn.adam.epsilon_hat); }}},
      {"state_normalization_mbps",
       {[](C& c, S v) { c.dqn.state_normalization = to_double(v) * kMbps; },
        [](const C& c) { return fmt_converted(c.dqn.state_normalization / kMbps); }}},
      {"max_iterations",
       {[](C& c, S v) { c.max_iterations = to_uint(v); }, [](const C& c) { return std::to_string(c.max_iterations); }}},
      {"convergence_window",
       {[](C& c, S v) { c.convergence_window = to_uint(v); }, [](const C& c) { return std::to_string(c.convergence_window); }}},
      {"monte_carlo_runs",
       {[](C& c, S v) { c.monte_carlo_runs = to_uint(v); }, [](const C& c) { return std::to_string(c.monte_carlo_runs); }}},
      {"seed", {[](C& c, S v) { c.master_seed = to_uint(v); }, [](const C& c) { return std::to_string(c.master_seed); }}},
      {"workers", {[](C& c, S v) { c.workers = to_uint(v); }, [](const C& c) { return std::to_string(c.workers); }}},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, const Field*> index;
  for (const auto& [key, field] : fields()) index[key] = &field;

  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->second->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : fields()) {
    const std::string value = field.get(cfg);
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace hybridnet
