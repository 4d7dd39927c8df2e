#pragma once

// Indoor hybrid RF/VLC downlink: room geometry, user placement, VLC
// association, bandwidth sharing and the shared utility/reward.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hybridnet/channel.hpp"
#include "hybridnet/rng.hpp"

namespace hybridnet {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Room footprint is centred on the origin; APs hang from the ceiling.
struct RoomLayout {
  double width = 12.0;
  double depth = 12.0;
  double ceiling_height = 3.0;
  Point2 rf_ap{0.0, 0.0};
  std::vector<Point2> vlc_aps{{-3.0, -3.0}, {-3.0, 3.0}, {3.0, -3.0}, {3.0, 3.0}};

  bool contains(Point2 p) const;
  void validate() const;
};

// Target band floor, bit/s.
inline constexpr double kMinTargetBand = 0.5e6;

// max(0.05 T, 0.5 Mbps)
double target_band(double target_rate);

struct UserConfig {
  Point2 position;
  double target_rate = 0.0;  // bit/s
  double target_band = 0.0;  // bit/s

  static UserConfig at(Point2 position, double target_rate);
};

// VLC AP index serving each user, if any.
using Association = std::vector<std::optional<std::size_t>>;

struct PowerAction {
  std::vector<double> per_user;  // W
  double total() const;
  friend bool operator==(const PowerAction&, const PowerAction&) = default;
  friend auto operator<=>(const PowerAction&, const PowerAction&) = default;
};

struct JointAction {
  std::vector<PowerAction> vlc_actions;  // one per VLC AP
  PowerAction rf_action;
};

// What every agent observes after a step.
struct NetworkState {
  std::vector<double> actual_rates;  // bit/s
  std::vector<double> target_rates;  // bit/s
  std::vector<double> target_bands;  // bit/s
  Association association;
  std::vector<double> per_user_vlc_bandwidth;  // Hz
  std::size_t timestep = 0;
};

std::vector<Point2> place_users(std::uint64_t seed, const RoomLayout& layout, std::size_t n_users);
std::vector<Point2> place_users(Rng& rng, const RoomLayout& layout, std::size_t n_users);

// Smallest incidence angle among covering APs; ties go to the lowest index.
Association associate_users(std::span<const Point2> positions, const RoomLayout& layout, const VlcPhyParams& phy);

std::vector<double> allocate_bandwidth(const Association& association, double total_vlc_bandwidth);

// Sum over users of B - |R - T|, reported in Mbps. Inputs are bit/s.
double utility(std::span<const double> actual, std::span<const double> targets, std::span<const double> bands);

// Relative slack when checking a power sum against its budget.
inline constexpr double kPowerSumTolerance = 1e-9;

bool within_budget(double total, double max_total);

struct EnvironmentParams {
  RoomLayout layout;
  VlcPhyParams vlc;
  RfPhyParams rf;
  double vlc_bandwidth = 20.0 * kMHz;  // total per VLC AP
  double p_max_vlc = 2.0;              // W
  double p_max_rf = 0.01;              // W
  bool frozen_channel = false;         // shadowing and fading pinned at their means

  void validate() const;
};

struct StepResult {
  NetworkState state;
  double reward = 0.0;  // Mbps, shared by every agent
  std::vector<double> rf_rates;
  std::vector<double> vlc_rates;
};

class HybridEnvironment {
 public:
  HybridEnvironment(EnvironmentParams params, std::vector<UserConfig> users, Rng channel_rng);

  const NetworkState& state() const { return state_; }
  const EnvironmentParams& params() const { return params_; }
  const std::vector<UserConfig>& users() const { return users_; }
  std::size_t num_users() const { return users_.size(); }
  std::size_t num_vlc_aps() const { return params_.layout.vlc_aps.size(); }

  double vlc_gain(std::size_t user) const { return vlc_gain_[user]; }
  double rf_distance(std::size_t user) const { return rf_distance_[user]; }

  // Applies the joint action for one timestep. Redraws RF shadowing and
  // fading unless the channel is frozen. Throws ConstraintViolation when any
  // AP exceeds its power budget.
  StepResult step(const JointAction& action);

 private:
  void check_action(const JointAction& action) const;

  EnvironmentParams params_;
  std::vector<UserConfig> users_;
  Rng rng_;
  std::vector<double> vlc_gain_;
  std::vector<double> rf_distance_;
  NetworkState state_;
};

}  // namespace hybridnet
