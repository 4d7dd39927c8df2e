#pragma once

// Free-space VLC (Lambertian line-of-sight) and indoor RF link models.
// Every function here is pure.

#include "hybridnet/units.hpp"

namespace hybridnet {

struct VlcPhyParams {
  double pd_area = 1e-4;                           // m^2
  double responsivity = 0.4;                       // A/W
  double filter_gain = 1.0;
  double concentrator_index = 1.5;
  double fov_half = deg_to_rad(45.0);              // rad
  double semi_angle_half_power = deg_to_rad(60.0); // rad
  double conversion_eff = 1.0;
  double modulation_depth = 1.0;
  double noise_psd = dbm_per_mhz_to_w_per_hz(-100.0);  // W/Hz

  void validate() const;
};

// How the "mean 2.46 dB" small-scale fading figure is read.
enum class FadingModel {
  kLinearMean,  // |h|^2 ~ Exp(mean = 10^(mean_db/10))
  kDbDomain,    // fading_db ~ Exp(mean = mean_db), |h|^2 = 10^(fading_db/10)
};

struct RfPhyParams {
  double pathloss_exponent = 1.6;
  double reference_distance = 1.0;  // m
  double shadowing_stddev = 1.8;    // dB
  double fading_mean_db = 2.46;     // dB
  double noise_psd = dbm_per_mhz_to_w_per_hz(-57.0);  // W/Hz
  double bandwidth = 5.0 * kMHz;    // Hz
  FadingModel fading_model = FadingModel::kLinearMean;

  void validate() const;
};

// Fading power used when the channel is frozen at its mean.
double mean_fading_power(const RfPhyParams& phy);

// Relative placement of a receiver below a ceiling-mounted VLC AP. The
// photodiode faces straight up, so irradiance and incidence angles coincide.
struct LinkGeometry {
  double horizontal_dist = 0.0;   // m
  double vertical_dist = 1.0;     // m
  double irradiance_angle = 0.0;  // rad
  double incidence_angle = 0.0;   // rad

  static LinkGeometry from_distances(double horizontal, double vertical);
};

// m = -1 / log2(cos(semi_angle)). Throws std::domain_error outside (0, pi/2).
double lambertian_order(double semi_angle_half_power);

// n_c^2 / sin^2(fov) inside the field of view (boundary inclusive), else 0.
double concentrator_gain(double incidence_angle, const VlcPhyParams& phy);

double vlc_channel_gain(const LinkGeometry& geom, const VlcPhyParams& phy);

// (W/2) log2(1 + (kappa m_d P G)^2 / (W sigma^2)); W is the bandwidth share of this user.
double vlc_rate(double power, double gain, double bandwidth, const VlcPhyParams& phy);

// 47.9 + 10 nu log10(d / d0) + X  [dB]; d is clamped to d0 from below.
double rf_path_loss(double distance, double shadowing_db, const RfPhyParams& phy);

double rf_channel_gain(double pathloss_db, double fading_power);

double rf_rate(double power, double gain, const RfPhyParams& phy);

inline double total_rate(double rf, double vlc) { return rf + vlc; }

}  // namespace hybridnet
