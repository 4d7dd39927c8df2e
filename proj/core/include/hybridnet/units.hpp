#pragma once

#include <cmath>
#include <numbers>

namespace hybridnet {

inline constexpr double kMbps = 1e6;
inline constexpr double kMHz = 1e6;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// x dBm/MHz -> W/Hz
inline double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz) {
  return std::pow(10.0, (dbm_per_mhz - 30.0) / 10.0) / kMHz;
}

inline double w_per_hz_to_dbm_per_mhz(double w_per_hz) {
  return 10.0 * std::log10(w_per_hz * kMHz) + 30.0;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace hybridnet
