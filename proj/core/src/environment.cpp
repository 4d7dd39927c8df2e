#include "hybridnet/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hybridnet/errors.hpp"

namespace hybridnet {

bool RoomLayout::contains(Point2 p) const {
  return std::abs(p.x) <= width / 2.0 && std::abs(p.y) <= depth / 2.0;
}

void RoomLayout::validate() const {
  if (!(width > 0.0) || !(depth > 0.0)) throw ConfigError("room width and depth must be positive");
  if (!(ceiling_height > 0.0)) throw ConfigError("ceiling height must be positive");
  if (!contains(rf_ap)) throw ConfigError("RF AP lies outside the room");
  if (vlc_aps.empty()) throw ConfigError("at least one VLC AP is required");
  for (const auto& ap : vlc_aps)
    if (!contains(ap)) throw ConfigError("VLC AP lies outside the room");
}

double target_band(double target_rate) { return std::max(0.05 * target_rate, kMinTargetBand); }

UserConfig UserConfig::at(Point2 position, double target_rate) {
  return UserConfig{position, target_rate, hybridnet::target_band(target_rate)};
}

double PowerAction::total() const { return std::accumulate(per_user.begin(), per_user.end(), 0.0); }

std::vector<Point2> place_users(Rng& rng, const RoomLayout& layout, std::size_t n_users) {
  std::vector<Point2> out;
  out.reserve(n_users);
  for (std::size_t i = 0; i < n_users; ++i) {
    const double x = (uniform01(rng) - 0.5) * layout.width;
    const double y = (uniform01(rng) - 0.5) * layout.depth;
    out.push_back({x, y});
  }
  return out;
}

std::vector<Point2> place_users(std::uint64_t seed, const RoomLayout& layout, std::size_t n_users) {
  Rng rng = make_rng(seed, Stream::kPlacement);
  return place_users(rng, layout, n_users);
}

Association associate_users(std::span<const Point2> positions, const RoomLayout& layout, const VlcPhyParams& phy) {
  Association out(positions.size());
  for (std::size_t u = 0; u < positions.size(); ++u) {
    double best = phy.fov_half;
    for (std::size_t l = 0; l < layout.vlc_aps.size(); ++l) {
      const double dist = std::hypot(positions[u].x - layout.vlc_aps[l].x, positions[u].y - layout.vlc_aps[l].y);
      const double angle = LinkGeometry::from_distances(dist, layout.ceiling_height).incidence_angle;
      if (angle <= best && (!out[u] || angle < best)) {
        best = angle;
        out[u] = l;
      }
    }
  }
  return out;
}

std::vector<double> allocate_bandwidth(const Association& association, double total_vlc_bandwidth) {
  std::vector<std::size_t> load;
  for (const auto& ap : association) {
    if (!ap) continue;
    if (*ap >= load.size()) load.resize(*ap + 1, 0);
    ++load[*ap];
  }
  std::vector<double> out(association.size(), 0.0);
  for (std::size_t u = 0; u < association.size(); ++u)
    if (association[u]) out[u] = total_vlc_bandwidth / static_cast<double>(load[*association[u]]);
  return out;
}

double utility(std::span<const double> actual, std::span<const double> targets, std::span<const double> bands) {
  if (actual.size() != targets.size() || actual.size() != bands.size())
    throw ShapeError("utility: rate, target and band vectors differ in length");
  double sum = 0.0;
  for (std::size_t u = 0; u < actual.size(); ++u) sum += bands[u] - std::abs(actual[u] - targets[u]);
  return sum / kMbps;
}

bool within_budget(double total, double max_total) { return total <= max_total * (1.0 + kPowerSumTolerance); }

void EnvironmentParams::validate() const {
  layout.validate();
  vlc.validate();
  rf.validate();
  if (!(vlc_bandwidth > 0.0)) throw ConfigError("VLC bandwidth must be positive");
  if (!(p_max_vlc >= 0.0) || !(p_max_rf >= 0.0)) throw ConfigError("maximum powers must be non-negative");
}

HybridEnvironment::HybridEnvironment(EnvironmentParams params, std::vector<UserConfig> users, Rng channel_rng)
    : params_(std::move(params)), users_(std::move(users)), rng_(std::move(channel_rng)) {
  params_.validate();
  if (users_.empty()) throw ConfigError("environment needs at least one user");
  std::vector<Point2> positions;
  for (const auto& u : users_) {
    if (!params_.layout.contains(u.position)) throw ConfigError("user placed outside the room");
    if (!(u.target_rate > 0.0)) throw ConfigError("user target rate must be positive");
    positions.push_back(u.position);
  }

  state_.association = associate_users(positions, params_.layout, params_.vlc);
  state_.per_user_vlc_bandwidth = allocate_bandwidth(state_.association, params_.vlc_bandwidth);
  state_.actual_rates.assign(users_.size(), 0.0);
  for (const auto& u : users_) {
    state_.target_rates.push_back(u.target_rate);
    state_.target_bands.push_back(u.target_band);
  }

  const double h = params_.layout.ceiling_height;
  for (std::size_t u = 0; u < users_.size(); ++u) {
    const Point2 p = users_[u].position;
    double gain = 0.0;
    if (const auto ap = state_.association[u]) {
      const Point2 a = params_.layout.vlc_aps[*ap];
      gain = vlc_channel_gain(LinkGeometry::from_distances(std::hypot(p.x - a.x, p.y - a.y), h), params_.vlc);
    }
    vlc_gain_.push_back(gain);
    const Point2 rf = params_.layout.rf_ap;
    rf_distance_.push_back(std::sqrt((p.x - rf.x) * (p.x - rf.x) + (p.y - rf.y) * (p.y - rf.y) + h * h));
  }
}

void HybridEnvironment::check_action(const JointAction& action) const {
  if (action.vlc_actions.size() != num_vlc_aps()) throw ShapeError("joint action has wrong number of VLC actions");
  auto check = [&](const PowerAction& a, double max_total, const std::string& who) {
    if (a.per_user.size() != num_users()) throw ShapeError(who + " action has wrong number of users");
    for (double p : a.per_user)
      if (!(p >= 0.0)) throw ConstraintViolation(who + " allocated a negative power");
    if (!within_budget(a.total(), max_total))
      throw ConstraintViolation(who + " exceeded its power budget: " + std::to_string(a.total()) + " W > " +
                                std::to_string(max_total) + " W");
  };
  for (std::size_t l = 0; l < action.vlc_actions.size(); ++l)
    check(action.vlc_actions[l], params_.p_max_vlc, "VLC AP " + std::to_string(l));
  check(action.rf_action, params_.p_max_rf, "RF AP");
}

StepResult HybridEnvironment::step(const JointAction& action) {
  check_action(action);
  const std::size_t n = num_users();
  StepResult out;
  out.rf_rates.resize(n);
  out.vlc_rates.resize(n);

  for (std::size_t u = 0; u < n; ++u) {
    double shadow_db = 0.0;
    double fading = mean_fading_power(params_.rf);
    if (!params_.frozen_channel) {
      if (params_.rf.shadowing_stddev > 0.0)
        shadow_db = std::normal_distribution<double>(0.0, params_.rf.shadowing_stddev)(rng_);
      // Inverse-CDF exponential draw; 1 - U keeps the log argument in (0, 1].
      const double e = -std::log(1.0 - uniform01(rng_));
      fading = params_.rf.fading_model == FadingModel::kLinearMean
                   ? mean_fading_power(params_.rf) * e
                   : db_to_linear(params_.rf.fading_mean_db * e);
    }
    const double g_rf = rf_channel_gain(rf_path_loss(rf_distance_[u], shadow_db, params_.rf), fading);
    out.rf_rates[u] = rf_rate(action.rf_action.per_user[u], g_rf, params_.rf);

    if (const auto ap = state_.association[u]) {
      out.vlc_rates[u] = vlc_rate(action.vlc_actions[*ap].per_user[u], vlc_gain_[u],
                                  state_.per_user_vlc_bandwidth[u], params_.vlc);
    } else {
      out.vlc_rates[u] = 0.0;
    }
    state_.actual_rates[u] = total_rate(out.rf_rates[u], out.vlc_rates[u]);
  }
  ++state_.timestep;
  out.reward = utility(state_.actual_rates, state_.target_rates, state_.target_bands);
  out.state = state_;
  return out;
}

}  // namespace hybridnet
