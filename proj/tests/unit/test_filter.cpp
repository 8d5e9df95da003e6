#include "vitalchirp/dsp/filter.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vitalchirp/dsp/elliptic.hpp"
#include "vitalchirp/dsp/linear_prediction.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::dsp {
namespace {

BandpassSpec resp_spec() { return BandpassSpec{0.13, 0.5, 50.0}; }
BandpassSpec heart_spec() { return BandpassSpec{0.8, 1.9, 50.0}; }

TEST(Elliptic, CompleteIntegral) {
  EXPECT_NEAR(ellipk(0.0), oracle::kPi / 2, 1e-15);
  EXPECT_NEAR(ellipk(0.5), 1.685750354812596, 1e-13);
  EXPECT_NEAR(ellipk(0.9), 2.2805491384227703, 1e-13);
}

TEST(Elliptic, FourthOrderPrototype) {
  // Reference roots of the order-4, 1 dB / 40 dB normalized prototype.
  const auto z = elliptic_lowpass_prototype(4, 1.0, 40.0);
  ASSERT_EQ(z.poles.size(), 4u);
  ASSERT_EQ(z.zeros.size(), 4u);
  auto has = [](const std::vector<std::complex<double>>& v, std::complex<double> x) {
    return std::any_of(v.begin(), v.end(), [&](auto y) { return std::abs(y - x) < 1e-7; });
  };
  EXPECT_TRUE(has(z.poles, {-0.3642906, 0.47860277}));
  EXPECT_TRUE(has(z.poles, {-0.10528126, -0.99371081}));
  EXPECT_TRUE(has(z.zeros, {0.0, 3.52528743}));
  EXPECT_TRUE(has(z.zeros, {0.0, -1.6095504}));
  EXPECT_NEAR(std::abs(z.response({0.0, 0.0})), std::pow(10.0, -1.0 / 20.0), 1e-9);
}

TEST(Elliptic, PrototypeIsEquiripple) {
  for (int n : {2, 3, 5, 7}) {
    const auto z = elliptic_lowpass_prototype(n, 1.0, 40.0);
    const double k = elliptic_selectivity(n, 1.0, 40.0);
    double pass_min = 1e9, pass_max = -1e9, stop_max = -1e9;
    for (double w = 0.0; w <= 1.0; w += 1e-4) {
      const double db = 20 * std::log10(std::abs(z.response({0.0, w})));
      pass_min = std::min(pass_min, db);
      pass_max = std::max(pass_max, db);
    }
    for (double w = 1.0 / k; w <= 50.0 / k; w += 1e-3) {
      stop_max = std::max(stop_max, 20 * std::log10(std::abs(z.response({0.0, w}))));
    }
    EXPECT_NEAR(pass_min, -1.0, 1e-6) << n;
    EXPECT_NEAR(pass_max, 0.0, 1e-6) << n;
    EXPECT_NEAR(stop_max, -40.0, 1e-3) << n;
  }
}

TEST(Elliptic, MinimumOrder) {
  EXPECT_EQ(elliptic_min_order(1.0, 40.0, 1.0 / 1.486), 5);
  EXPECT_EQ(elliptic_min_order(1.0, 40.0, 0.5), 4);
  EXPECT_GE(elliptic_selectivity(5, 1.0, 40.0), 1.0 / 1.486);
  EXPECT_LT(elliptic_selectivity(4, 1.0, 40.0), 1.0 / 1.486);
}

// Magnitudes in dB from the same specification evaluated with scipy.signal.ellip.
TEST(Bandpass, MatchesReferenceDesigns) {
  const auto r = design_bandpass(resp_spec());
  EXPECT_EQ(r.prototype_order, 5);
  const std::vector<std::pair<double, double>> resp_ref{
      {0.05, -40.0694179261}, {0.1, -41.6139744227}, {0.2, -0.9555827469},
      {0.3, -0.6214476886},   {0.7, -49.2136401062}, {1.2, -40.0008905907},
      {5.0, -49.5933656436}};
  for (auto [f, db] : resp_ref) EXPECT_NEAR(r.magnitude_db(f), db, 1e-7) << f;
  EXPECT_NEAR(r.max_pole_radius(), 0.9995204856157431, 1e-10);

  const auto h = design_bandpass(heart_spec());
  EXPECT_EQ(h.prototype_order, 4);
  const std::vector<std::pair<double, double>> heart_ref{
      {0.05, -40.1609784433}, {0.3, -50.2643994043}, {0.7, -24.5630970448},
      {1.0, -0.0358843322},   {1.2, -0.9582230252},  {1.5, -0.0021336072},
      {2.5, -43.9890651490}};
  for (auto [f, db] : heart_ref) EXPECT_NEAR(h.magnitude_db(f), db, 1e-7) << f;
  EXPECT_NEAR(h.max_pole_radius(), 0.9956739968728344, 1e-10);
}

TEST(Bandpass, BothBandsConformOnADenseGrid) {
  for (const auto& spec : {resp_spec(), heart_spec()}) {
    const auto c = design_bandpass(spec);
    for (std::size_t points : {4096u, 8192u, 65536u}) {
      const auto k = check_conformance(c, points);
      EXPECT_TRUE(k.meets_spec) << spec.low_edge_hz << " " << points;
      EXPECT_TRUE(k.stable);
      EXPECT_GE(k.passband_min_db, -1.0 - 1e-6);
      EXPECT_LE(k.stopband_max_db, -40.0 + 1e-6);
    }
    for (const auto& s : c.sections) EXPECT_LT(s.max_pole_radius(), 1.0);
  }
}

TEST(Bandpass, SectionsAgreeWithExpandedPolynomial) {
  const auto c = design_bandpass(heart_spec());
  std::vector<double> b{c.gain}, a{1.0};
  for (const auto& s : c.sections) {
    b = oracle::poly_mul(b, {s.b0, s.b1, s.b2});
    a = oracle::poly_mul(a, {1.0, s.a1, s.a2});
  }
  for (double f = 0.01; f < 25.0; f += 0.173) {
    const double ref = 20 * std::log10(oracle::polynomial_magnitude(b, a, f, 50.0));
    EXPECT_NEAR(c.magnitude_db(f), ref, 1e-4) << f;
  }
}

TEST(Bandpass, OrderIsAMinimum) {
  auto spec = resp_spec();
  spec.order = 7;
  EXPECT_EQ(design_bandpass(spec).prototype_order, 7);
  spec.order = 2;
  EXPECT_EQ(design_bandpass(spec).prototype_order, 5);
}

TEST(Bandpass, RejectsUnrealizableSpecs) {
  auto s = resp_spec();
  s.low_edge_hz = 0.6;
  EXPECT_THROW(design_bandpass(s), DesignError);
  s = resp_spec();
  s.high_edge_hz = 30.0;
  EXPECT_THROW(design_bandpass(s), DesignError);
  s = resp_spec();
  s.stopband_atten_db = 0.5;
  EXPECT_THROW(design_bandpass(s), DesignError);
  s = resp_spec();
  s.transition_ratio = 1.2;
  EXPECT_THROW(design_bandpass(s), DesignError);
  s = resp_spec();
  s.order = 13;
  try {
    design_bandpass(s);
    FAIL() << "expected DesignError";
  } catch (const DesignError& e) {
    EXPECT_NE(std::string(e.what()).find("order"), std::string::npos);
  }
}

TEST(SinglePass, MatchesDirectFormCascade) {
  const auto c = design_bandpass(heart_spec());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> x(2000);
  for (auto& v : x) v = g(rng);
  auto ref = x;
  for (auto& v : ref) v *= c.gain;
  for (const auto& s : c.sections) ref = oracle::df1_filter({s.b0, s.b1, s.b2}, {1.0, s.a1, s.a2}, ref);
  const auto y = filter_single_pass(c, x);
  for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(y[i], ref[i], 1e-9);
}

TEST(ZeroPhase, PassbandToneKeepsPhaseAndSquaredGain) {
  const auto c = design_bandpass(heart_spec());
  const double f0 = 1.2;
  std::vector<double> x(3000);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * oracle::kPi * f0 * n / 50.0 + 0.3);
  const double g2 = std::pow(std::abs(c.response(f0)), 2);
  for (auto ext : {EdgeExtension::odd_reflection, EdgeExtension::linear_prediction}) {
    const auto y = filter_zero_phase(c, x, ext);
    for (std::size_t n = 1000; n < 2000; ++n) ASSERT_NEAR(y[n], g2 * x[n], 2e-3) << n;
  }
}

TEST(ZeroPhase, ConstantInputIsRejected) {
  const auto c = design_bandpass(resp_spec());
  const std::vector<double> x(500, 3.0);
  for (double v : filter_zero_phase(c, x)) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(ZeroPhase, ShortInputIsAnError) {
  const auto c = design_bandpass(resp_spec());
  EXPECT_EQ(min_zero_phase_length(c), 33u);
  EXPECT_THROW(filter_zero_phase(c, std::vector<double>(33, 1.0)), ValidationError);
  EXPECT_NO_THROW(filter_zero_phase(c, std::vector<double>(34, 1.0)));
}

TEST(ZeroPhase, LinearInScale) {
  const auto c = design_bandpass(resp_spec());
  std::vector<double> x(250);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(0.04 * n) + 0.1 * std::cos(0.5 * n);
  auto x7 = x;
  for (auto& v : x7) v *= 7.0;
  const auto y = filter_zero_phase(c, x, EdgeExtension::linear_prediction);
  const auto y7 = filter_zero_phase(c, x7, EdgeExtension::linear_prediction);
  double peak = 0.0;
  for (double v : y7) peak = std::max(peak, std::abs(v));
  for (std::size_t n = 0; n < y.size(); ++n) ASSERT_NEAR(y7[n], 7.0 * y[n], 1e-6 * peak);
}

TEST(LinearPrediction, RecoversAnAr2Process) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<double> x(50000, 0.0);
  for (std::size_t n = 2; n < x.size(); ++n) x[n] = 1.6 * x[n - 1] - 0.8 * x[n - 2] + g(rng);
  const auto a = burg_predictor(x, 2);
  EXPECT_NEAR(a[0], 1.6, 0.01);
  EXPECT_NEAR(a[1], -0.8, 0.01);
}

TEST(LinearPrediction, ContinuesASinusoid) {
  std::vector<double> x(300);
  auto tone = [](double n) { return std::sin(2 * oracle::kPi * 0.35 * n / 50.0 + 0.4); };
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = tone(static_cast<double>(n));
  const auto pred = burg_predictor(x, 8);
  const auto ext = extrapolate(x, pred, 100);
  for (std::size_t j = 0; j < ext.size(); ++j) EXPECT_NEAR(ext[j], tone(300.0 + j), 1e-3);
}

TEST(LinearPrediction, ZeroInputGivesZeroPredictor) {
  const auto a = burg_predictor(std::vector<double>(64, 0.0), 4);
  for (double v : a) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(burg_predictor(std::vector<double>(4, 1.0), 4), ValidationError);
}

}  // namespace
}  // namespace vitalchirp::dsp
