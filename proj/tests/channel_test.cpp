#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hybridnet/channel.hpp"

namespace hybridnet {
namespace {

// Pinned with an independent calculator (Python, math module) from the
// closed-form link equations and the default physical constants.
constexpr double kGainUnderAp = 6.366197723675816e-06;
constexpr double kVlcRate2W = 36757240.611490905;   // P = 2 W, G = 6.37e-6, W = 10 MHz
constexpr double kRfRate10mW = 20546181.667023987;  // P = 10 mW, G = 1.622e-5

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(LambertianOrder, SixtyDegreesIsOne) { EXPECT_DOUBLE_EQ(lambertian_order(deg_to_rad(60.0)), 1.0); }

TEST(LambertianOrder, FortyFiveDegreesIsTwo) { EXPECT_NEAR(lambertian_order(deg_to_rad(45.0)), 2.0, 1e-12); }

TEST(LambertianOrder, Deterministic) {
  EXPECT_EQ(lambertian_order(deg_to_rad(60.0)), lambertian_order(deg_to_rad(60.0)));
}

TEST(LambertianOrder, RejectsDegenerateAngles) {
  EXPECT_THROW(lambertian_order(0.0), std::domain_error);
  EXPECT_THROW(lambertian_order(std::numbers::pi / 2.0), std::domain_error);
  EXPECT_THROW(lambertian_order(2.0), std::domain_error);
}

TEST(ConcentratorGain, InsideAndOnBoundary) {
  VlcPhyParams phy;
  EXPECT_NEAR(concentrator_gain(0.0, phy), 4.5, 1e-12);
  EXPECT_NEAR(concentrator_gain(deg_to_rad(45.0), phy), 4.5, 1e-12);
}

TEST(ConcentratorGain, ZeroOutsideFieldOfView) {
  VlcPhyParams phy;
  EXPECT_EQ(concentrator_gain(deg_to_rad(46.0), phy), 0.0);
}

TEST(VlcChannelGain, DirectlyBelowAp) {
  VlcPhyParams phy;
  const double g = vlc_channel_gain(LinkGeometry::from_distances(0.0, 3.0), phy);
  EXPECT_LT(rel(g, kGainUnderAp), 1e-12);
}

TEST(VlcChannelGain, ZeroBeyondFieldOfView) {
  VlcPhyParams phy;
  EXPECT_EQ(vlc_channel_gain(LinkGeometry::from_distances(3.01, 3.0), phy), 0.0);
  EXPECT_EQ(vlc_channel_gain(LinkGeometry::from_distances(5.0, 3.0), phy), 0.0);
}

TEST(VlcChannelGain, InverseSquareInHeightBelowAp) {
  VlcPhyParams phy;
  const double g3 = vlc_channel_gain(LinkGeometry::from_distances(0.0, 3.0), phy);
  const double g6 = vlc_channel_gain(LinkGeometry::from_distances(0.0, 6.0), phy);
  EXPECT_NEAR(g3 / g6, 4.0, 1e-12);
}

TEST(VlcRate, ZeroPowerOrGain) {
  VlcPhyParams phy;
  EXPECT_EQ(vlc_rate(0.0, kGainUnderAp, 10e6, phy), 0.0);
  EXPECT_EQ(vlc_rate(2.0, 0.0, 10e6, phy), 0.0);
}

TEST(VlcRate, PinnedRegression) {
  VlcPhyParams phy;
  EXPECT_LT(rel(vlc_rate(2.0, 6.37e-6, 10e6, phy), kVlcRate2W), 1e-12);
}

TEST(RfPathLoss, ReferenceDistance) {
  RfPhyParams phy;
  EXPECT_DOUBLE_EQ(rf_path_loss(1.0, 0.0, phy), 47.9);
  EXPECT_NEAR(rf_path_loss(1.0, 1.8, phy), 49.7, 1e-12);
}

TEST(RfPathLoss, TenMetres) {
  RfPhyParams phy;
  EXPECT_NEAR(rf_path_loss(10.0, 0.0, phy), 63.9, 1e-12);
}

TEST(RfPathLoss, ClampsBelowReferenceDistance) {
  RfPhyParams phy;
  EXPECT_DOUBLE_EQ(rf_path_loss(0.0, 0.0, phy), 47.9);
  EXPECT_DOUBLE_EQ(rf_path_loss(0.5, 0.0, phy), 47.9);
}

TEST(RfChannelGain, Values) {
  EXPECT_NEAR(rf_channel_gain(47.9, 1.0), 1.62181009735893e-05, 1e-18);
  EXPECT_EQ(rf_channel_gain(47.9, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(rf_channel_gain(0.0, 1.0), 1.0);
}

TEST(RfRate, ZeroPowerAndConcavity) {
  RfPhyParams phy;
  EXPECT_EQ(rf_rate(0.0, 1e-5, phy), 0.0);
  // SNR > 1 here: doubling P.G raises the rate by less than 2x.
  const double r1 = rf_rate(0.01, 1.622e-5, phy);
  const double r2 = rf_rate(0.02, 1.622e-5, phy);
  EXPECT_GT(r2, r1);
  EXPECT_LT(r2, 2.0 * r1);
}

TEST(RfRate, PinnedRegression) {
  RfPhyParams phy;
  EXPECT_LT(rel(rf_rate(0.01, 1.622e-5, phy), kRfRate10mW), 1e-12);
}

TEST(TotalRate, Additive) {
  EXPECT_EQ(total_rate(0.0, 0.0), 0.0);
  EXPECT_EQ(total_rate(5e6, 0.0), 5e6);
  EXPECT_EQ(total_rate(5e6, 12e6), 17e6);
}

TEST(Units, PsdConversion) {
  EXPECT_NEAR(dbm_per_mhz_to_w_per_hz(-100.0), 1e-19, 1e-31);
  EXPECT_NEAR(dbm_per_mhz_to_w_per_hz(-57.0), 1.995262314968883e-15, 1e-27);
}

// Property tests over randomized inputs.

TEST(ChannelProperties, NonNegativeAndMonotoneInPower) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> horiz(0.0, 8.0), height(0.5, 6.0), power(0.0, 3.0), bw(1e5, 4e7);
  VlcPhyParams vlc;
  RfPhyParams rf;
  for (int i = 0; i < 2000; ++i) {
    const double g = vlc_channel_gain(LinkGeometry::from_distances(horiz(rng), height(rng)), vlc);
    ASSERT_GE(g, 0.0);
    double p1 = power(rng), p2 = power(rng);
    if (p1 > p2) std::swap(p1, p2);
    const double w = bw(rng);
    if (g > 0.0 && p1 < p2) {
      ASSERT_LT(vlc_rate(p1, g, w, vlc), vlc_rate(p2, g, w, vlc));
    }
    ASSERT_EQ(vlc_rate(p1, 0.0, w, vlc), vlc_rate(p2, 0.0, w, vlc));

    const double g_rf = rf_channel_gain(rf_path_loss(1.0 + horiz(rng), 0.0, rf), 1.0);
    ASSERT_GE(g_rf, 0.0);
    if (p1 < p2) {
      ASSERT_LT(rf_rate(p1 / 100.0, g_rf, rf), rf_rate(p2 / 100.0, g_rf, rf));
    }
    ASSERT_GE(rf_rate(p1, g_rf, rf), 0.0);
  }
}

TEST(ChannelProperties, FieldOfViewCutoff) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> horiz(0.0, 8.0), height(0.5, 6.0);
  VlcPhyParams vlc;
  for (int i = 0; i < 2000; ++i) {
    const auto geom = LinkGeometry::from_distances(horiz(rng), height(rng));
    const double g = vlc_channel_gain(geom, vlc);
    ASSERT_EQ(g == 0.0, geom.incidence_angle > vlc.fov_half);
  }
}

TEST(ChannelProperties, RotationalSymmetryAroundAp) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> radius(0.0, 3.5), angle(0.0, 2.0 * std::numbers::pi);
  VlcPhyParams vlc;
  for (int i = 0; i < 500; ++i) {
    const double r = radius(rng);
    const double a = angle(rng), b = angle(rng);
    const double ga = vlc_channel_gain(LinkGeometry::from_distances(std::hypot(r * std::cos(a), r * std::sin(a)), 3.0), vlc);
    const double gb = vlc_channel_gain(LinkGeometry::from_distances(std::hypot(r * std::cos(b), r * std::sin(b)), 3.0), vlc);
    if (ga == 0.0 || gb == 0.0) continue;  // rotation can nudge r across the FOV edge by one ulp
    ASSERT_LT(std::abs(ga - gb) / ga, 1e-12);
  }
}

TEST(ChannelProperties, PsdRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dbm(-180.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dbm(rng);
    const double w = dbm_per_mhz_to_w_per_hz(x);
    ASSERT_LT(std::abs(w_per_hz_to_dbm_per_mhz(w) - x), 1e-12 * std::max(1.0, std::abs(x)));
    ASSERT_LT(std::abs(dbm_per_mhz_to_w_per_hz(w_per_hz_to_dbm_per_mhz(w)) - w) / w, 1e-12);
  }
}

TEST(PhyParams, ValidateRejectsBadValues) {
  VlcPhyParams vlc;
  vlc.fov_half = deg_to_rad(95.0);
  EXPECT_ANY_THROW(vlc.validate());
  RfPhyParams rf;
  rf.bandwidth = 0.0;
  EXPECT_ANY_THROW(rf.validate());
  EXPECT_NO_THROW(VlcPhyParams{}.validate());
  EXPECT_NO_THROW(RfPhyParams{}.validate());
}

}  // namespace
}  // namespace hybridnet
