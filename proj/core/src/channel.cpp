#include "hybridnet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hybridnet/errors.hpp"

namespace hybridnet {

namespace {

// Free-space RF loss at the 1 m reference distance, dB.
constexpr double kRfReferenceLossDb = 47.9;

bool open_right_angle(double a) { return a > 0.0 && a < std::numbers::pi / 2.0; }

}  // namespace

void VlcPhyParams::validate() const {
  if (!(pd_area > 0.0)) throw ConfigError("VLC photodiode area must be positive");
  if (!(responsivity > 0.0)) throw ConfigError("VLC responsivity must be positive");
  if (!open_right_angle(fov_half)) throw ConfigError("VLC half field-of-view must lie in (0, 90) degrees");
  if (!open_right_angle(semi_angle_half_power))
    throw ConfigError("LED half-power semi-angle must lie in (0, 90) degrees");
  if (!(noise_psd > 0.0)) throw ConfigError("VLC noise PSD must be positive");
  if (filter_gain < 0.0 || concentrator_index <= 0.0 || conversion_eff < 0.0 || modulation_depth < 0.0)
    throw ConfigError("VLC gains and efficiencies must be non-negative");
}

void RfPhyParams::validate() const {
  if (!(pathloss_exponent > 0.0)) throw ConfigError("RF path-loss exponent must be positive");
  if (!(reference_distance > 0.0)) throw ConfigError("RF reference distance must be positive");
  if (!(bandwidth > 0.0)) throw ConfigError("RF bandwidth must be positive");
  if (!(noise_psd > 0.0)) throw ConfigError("RF noise PSD must be positive");
  if (shadowing_stddev < 0.0) throw ConfigError("RF shadowing std-dev must be non-negative");
}

double mean_fading_power(const RfPhyParams& phy) { return db_to_linear(phy.fading_mean_db); }

LinkGeometry LinkGeometry::from_distances(double horizontal, double vertical) {
  const double angle = std::atan(horizontal / vertical);
  return LinkGeometry{horizontal, vertical, angle, angle};
}

double lambertian_order(double semi_angle_half_power) {
  if (!open_right_angle(semi_angle_half_power))
    throw std::domain_error("lambertian_order: semi-angle must lie strictly between 0 and 90 degrees");
  return -1.0 / std::log2(std::cos(semi_angle_half_power));
}

double concentrator_gain(double incidence_angle, const VlcPhyParams& phy) {
  if (incidence_angle < 0.0 || incidence_angle > phy.fov_half) return 0.0;
  const double s = std::sin(phy.fov_half);
  return phy.concentrator_index * phy.concentrator_index / (s * s);
}

double vlc_channel_gain(const LinkGeometry& geom, const VlcPhyParams& phy) {
  const double hc = concentrator_gain(geom.incidence_angle, phy);
  if (hc == 0.0) return 0.0;
  const double m = lambertian_order(phy.semi_angle_half_power);
  const double d2 = geom.horizontal_dist * geom.horizontal_dist + geom.vertical_dist * geom.vertical_dist;
  const double radiant = (m + 1.0) * phy.pd_area * phy.responsivity * std::pow(std::cos(geom.irradiance_angle), m) /
                         (2.0 * std::numbers::pi * d2);
  return radiant * phy.filter_gain * hc * std::cos(geom.incidence_angle);
}

double vlc_rate(double power, double gain, double bandwidth, const VlcPhyParams& phy) {
  if (power <= 0.0 || gain <= 0.0 || bandwidth <= 0.0) return 0.0;
  const double signal = phy.conversion_eff * phy.modulation_depth * power * gain;
  const double snr = signal * signal / (bandwidth * phy.noise_psd);
  return 0.5 * bandwidth * std::log2(1.0 + snr);
}

double rf_path_loss(double distance, double shadowing_db, const RfPhyParams& phy) {
  const double d = std::max(distance, phy.reference_distance);
  return kRfReferenceLossDb + 10.0 * phy.pathloss_exponent * std::log10(d / phy.reference_distance) + shadowing_db;
}

double rf_channel_gain(double pathloss_db, double fading_power) {
  return std::pow(10.0, -pathloss_db / 10.0) * fading_power;
}

double rf_rate(double power, double gain, const RfPhyParams& phy) {
  if (power <= 0.0 || gain <= 0.0) return 0.0;
  return phy.bandwidth * std::log2(1.0 + power * gain / (phy.bandwidth * phy.noise_psd));
}

}  // namespace hybridnet
