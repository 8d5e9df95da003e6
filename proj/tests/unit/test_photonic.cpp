#include "vitalchirp/photonic.hpp"

#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::photonic {
namespace {

FbgProfile fbg1() { return make_fbg_profile(17.70, 11.2e9); }

TEST(DeriveChirp, QuadruplesTheIfDrive) {
  const auto c = derive_chirp(IfLfmParams{6.6e9, 1e9, 100e-6, 60e-6});
  EXPECT_DOUBLE_EQ(c.start_freq_hz, 24.4e9);
  EXPECT_DOUBLE_EQ(c.sweep_bandwidth_hz, 4e9);
  EXPECT_DOUBLE_EQ(c.center_freq_hz(), 26.4e9);
  EXPECT_NEAR(c.chirp_rate_hz_per_s, 6.6666666666666664e13, 1.0);
  EXPECT_NEAR(c.carrier_wavelength_m, 0.012286576147540983, 1e-15);
  EXPECT_DOUBLE_EQ(c.pulse_period_s, 100e-6);
  EXPECT_DOUBLE_EQ(c.pulse_width_s, 60e-6);
}

TEST(DeriveChirp, CentreIsFourTimesTheIfCentre) {
  for (double fc : {3e9, 6.6e9, 9.1e9}) {
    for (double fb : {0.2e9, 1e9, 1.5e9}) {
      const auto c = derive_chirp(IfLfmParams{fc, fb, 100e-6, 60e-6});
      EXPECT_NEAR(c.center_freq_hz(), 4.0 * fc, 1e-3);
      EXPECT_NEAR(c.carrier_wavelength_m * c.start_freq_hz, oracle::kC, 1e-6);
    }
  }
}

TEST(DeriveChirp, ScalingBandwidthAndPulseWidthKeepsTheRate) {
  const auto a = derive_chirp(IfLfmParams{6.6e9, 1e9, 100e-6, 60e-6});
  const auto b = derive_chirp(IfLfmParams{6.6e9, 0.5e9, 100e-6, 30e-6});
  EXPECT_NEAR(a.chirp_rate_hz_per_s, b.chirp_rate_hz_per_s, 1e-2);
}

TEST(DeriveChirp, RejectsInvalidDrive) {
  EXPECT_THROW(derive_chirp(IfLfmParams{6.6e9, 0.0, 100e-6, 60e-6}), ValidationError);
  EXPECT_THROW(derive_chirp(IfLfmParams{6.6e9, 1e9, 50e-6, 60e-6}), ValidationError);
  EXPECT_THROW(derive_chirp(IfLfmParams{6.6e9, 1e9, 100e-6, 0.0}), ValidationError);
}

TEST(FbgTransmission, ThreeDbPointsSitAtHalfTheWidth) {
  const auto f = fbg1();
  EXPECT_NEAR(fbg_transmission(f, 5.6e9), std::pow(10.0, -0.3), 1e-12);
  EXPECT_NEAR(fbg_transmission(f, -5.6e9), std::pow(10.0, -0.3), 1e-12);
  EXPECT_NEAR(fbg_transmission_db(f, 5.6e9), -3.0, 1e-12);
}

TEST(FbgTransmission, CentreDepth) {
  EXPECT_NEAR(fbg_transmission(fbg1(), 0.0), 0.016982436524617443, 1e-15);
}

TEST(FbgTransmission, SigmaFromDepthAndWidth) {
  EXPECT_NEAR(fbg1().sigma_hz(), 2972211291.747105, 1e-3);
}

TEST(FbgTransmission, MatchesDefinitionOnAGrid) {
  FbgProfile f;
  f.notch_depth_db = 17.76;
  f.fwhm_3db_hz = 10e9;
  for (double df = -30e9; df <= 30e9; df += 0.37e9) {
    EXPECT_NEAR(fbg_transmission(f, df), oracle::notch_transmittance(17.76, 10e9, df), 1e-14);
  }
}

TEST(FbgTransmission, EvenMonotoneAndBounded) {
  const auto f = fbg1();
  const double floor = std::pow(10.0, -f.notch_depth_db / 10.0);
  double prev = 0.0;
  for (double df = 0.0; df <= 60e9; df += 0.05e9) {
    const double t = fbg_transmission(f, df);
    EXPECT_DOUBLE_EQ(t, fbg_transmission(f, -df));
    EXPECT_GE(t, floor - 1e-15);
    EXPECT_LE(t, 1.0);
    if (df > 0.0) EXPECT_GE(t, prev);
    if (df > 0.0 && t < 1.0 - 1e-9) EXPECT_GT(t, prev);
    prev = t;
  }
  EXPECT_NEAR(fbg_transmission(f, 1e12), 1.0, 1e-12);
}

TEST(FbgTransmission, RejectsShallowNotch) {
  FbgProfile f;
  f.notch_depth_db = 3.0;
  EXPECT_THROW(fbg_transmission(f, 0.0), ValidationError);
  f.notch_depth_db = 10.0;
  f.fwhm_3db_hz = 0.0;
  EXPECT_THROW(fbg_transmission(f, 0.0), ValidationError);
}

TEST(OperatingPoint, DefaultSitsAtTheSteepestEdge) {
  const auto f = fbg1();
  EXPECT_NEAR(f.carrier_operating_offset_hz, -5549484950.976609, 1e3);
  auto slope = [&](double df) {
    const double h = 1e5;
    return std::abs(oracle::notch_transmittance(17.70, 11.2e9, df + h) -
                    oracle::notch_transmittance(17.70, 11.2e9, df - h)) /
           (2 * h);
  };
  double best = 0.0;
  for (double df = 0.0; df <= 20e9; df += 1e6) best = std::max(best, slope(df));
  EXPECT_GE(slope(f.carrier_operating_offset_hz), 0.99 * best);
}

TEST(ContactIntensity, StaticChestGivesConstantPower) {
  const auto f = fbg1();
  const auto g = physio::make_time_grid(4.0, 50.0);
  const std::vector<double> x(g.count, 0.0);
  const auto sig = contact_intensity(x, f, 0.8, 0.01, 0.0, g);
  const double expect = 0.8 * fbg_transmission(f, f.carrier_operating_offset_hz) + 0.02;
  for (double p : sig.intensity_mw) EXPECT_DOUBLE_EQ(p, expect);
  EXPECT_FALSE(sig.edge_warning);
}

TEST(ContactIntensity, SinusoidalMotionDominatesAtItsFrequency) {
  const auto f = fbg1();
  const auto g = physio::make_time_grid(20.0, 50.0);
  std::vector<double> x(g.count);
  for (std::size_t n = 0; n < g.count; ++n) x[n] = 0.5 * std::sin(2 * oracle::kPi * 0.35 * g.at(n));
  const auto sig = contact_intensity(x, f, 1.0, 0.0, 0.0, g);
  std::vector<double> ac = sig.intensity_mw;
  double mean = 0.0;
  for (double v : ac) mean += v;
  mean /= ac.size();
  for (auto& v : ac) v -= mean;
  const auto X = oracle::naive_dft(ac, ac.size());
  std::size_t best = 1;
  for (std::size_t k = 1; k < X.size(); ++k) {
    if (std::abs(X[k]) > std::abs(X[best])) best = k;
  }
  EXPECT_EQ(best, 7u);  // 0.35 Hz at 0.05 Hz resolution
  EXPECT_LT(std::abs(X[14]), 0.05 * std::abs(X[7]));
}

TEST(ContactIntensity, LargeExcursionRaisesWarning) {
  auto f = fbg1();
  f.displacement_to_shift_hz_per_mm = 2e9;
  const auto g = physio::make_time_grid(2.0, 50.0);
  std::vector<double> x(g.count, 0.0);
  x[10] = 4.0;
  EXPECT_TRUE(contact_intensity(x, f, 1.0, 0.0, 0.0, g).edge_warning);
}

TEST(ContactIntensity, RejectsOperatingPointOutsideTheNotch) {
  auto f = fbg1();
  f.carrier_operating_offset_hz = -4.0 * f.sigma_hz();
  const auto g = physio::make_time_grid(1.0, 50.0);
  const std::vector<double> x(g.count, 0.0);
  EXPECT_THROW(contact_intensity(x, f, 1.0, 0.0, 0.0, g), ValidationError);
}

TEST(ContactIntensity, LengthMismatchIsAnError) {
  const auto g = physio::make_time_grid(1.0, 50.0);
  const std::vector<double> x(g.count + 1, 0.0);
  EXPECT_THROW(contact_intensity(x, fbg1(), 1.0, 0.0, 0.0, g), ValidationError);
}

TEST(ContactIntensity, NoiseIsMultiplicativeAndSeeded) {
  const auto g = physio::make_time_grid(100.0, 50.0);
  const std::vector<double> x(g.count, 0.0);
  const auto a = contact_intensity(x, fbg1(), 1.0, 0.0, 0.02, g, 7);
  const auto b = contact_intensity(x, fbg1(), 1.0, 0.0, 0.02, g, 7);
  EXPECT_EQ(a.intensity_mw, b.intensity_mw);
  const double p0 = fbg_transmission(fbg1(), fbg1().carrier_operating_offset_hz);
  double ss = 0.0;
  for (double p : a.intensity_mw) ss += (p / p0 - 1.0) * (p / p0 - 1.0);
  EXPECT_NEAR(std::sqrt(ss / a.intensity_mw.size()), 0.02, 0.001);
}

TEST(SidebandWeights, MatchBesselSeries) {
  for (double m : {0.1, 0.5, 0.8, 1.7, 2.9}) {
    const auto w = sideband_weights({m, Bias::matp});
    EXPECT_NEAR(w.carrier, oracle::bessel_j(0, m), 1e-12);
    EXPECT_NEAR(w.second_order, oracle::bessel_j(2, m), 1e-12);
    EXPECT_LE(w.carrier_power() + 2.0 * w.sideband_power(), 1.0 + 1e-12);
  }
  const auto w = sideband_weights({0.8, Bias::matp});
  EXPECT_NEAR(w.second_order / w.carrier, 0.08958867486147921, 1e-12);
}

TEST(SidebandWeights, VanishingIndexLeavesOnlyTheCarrier) {
  const auto w = sideband_weights({1e-6, Bias::matp});
  EXPECT_NEAR(w.carrier, 1.0, 1e-12);
  EXPECT_NEAR(w.second_order, 0.0, 1e-12);
}

TEST(SidebandWeights, SecondOrderGrowsWithIndex) {
  double prev = 0.0;
  for (double m = 0.05; m <= 3.0; m += 0.05) {
    const double s = sideband_weights({m, Bias::matp}).second_order;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(SidebandWeights, QuadratureBiasIsUnsupported) {
  EXPECT_THROW(sideband_weights({0.5, Bias::qtp}), ValidationError);
  EXPECT_THROW(sideband_weights({0.0, Bias::matp}), ValidationError);
}

}  // namespace
}  // namespace vitalchirp::photonic
