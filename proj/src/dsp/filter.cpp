#include "vitalchirp/dsp/filter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/dsp/elliptic.hpp"
#include "vitalchirp/dsp/linear_prediction.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::dsp {
namespace {

using cplx = std::complex<double>;

constexpr int kMaxPrototypeOrder = 12;

double prewarp(double f_hz, double fs) { return 2.0 * fs * std::tan(kPi * f_hz / fs); }

// Lowpass-prototype frequency seen by an analog bandpass frequency w.
double bandpass_to_prototype(double w, double w0, double bw) {
  return std::abs(w * w - w0 * w0) / (w * bw);
}

// Roots of s^2 - r*bw*s + w0^2: the two bandpass images of prototype root r.
std::pair<cplx, cplx> bandpass_images(cplx r, double w0, double bw) {
  const cplx half = 0.5 * r * bw;
  const cplx disc = std::sqrt(half * half - w0 * w0);
  return {half + disc, half - disc};
}

cplx bilinear(cplx s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

struct ConjPair {
  cplx root;  // member with Im >= 0
};

std::vector<ConjPair> upper_half(const std::vector<cplx>& roots) {
  std::vector<ConjPair> out;
  for (const auto& r : roots) {
    if (r.imag() > 1e-12) out.push_back({r});
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void odd_extend(std::span<const double> x, std::size_t pad, std::vector<double>& ext) {
  const std::size_t n = x.size();
  ext.resize(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
}

// Steady-state transposed-DF-II states of every section for a unit step.
std::vector<std::array<double, 2>> step_states(const FilterCoeffs& c) {
  std::vector<std::array<double, 2>> zi(c.sections.size());
  double level = c.gain;
  for (std::size_t i = 0; i < c.sections.size(); ++i) {
    const auto& s = c.sections[i];
    const double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    zi[i] = {level * (g - s.b0), level * (s.b2 - s.a2 * g)};
    level *= g;
  }
  return zi;
}

void run_cascade(const FilterCoeffs& c, std::vector<double>& y,
                 std::vector<std::array<double, 2>> state) {
  for (auto& v : y) v *= c.gain;
  for (std::size_t i = 0; i < c.sections.size(); ++i) {
    const auto& s = c.sections[i];
    double z1 = state[i][0];
    double z2 = state[i][1];
    for (auto& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace

void validate(const BandpassSpec& spec) {
  const double nyq = 0.5 * spec.sample_rate_hz;
  if (!(spec.sample_rate_hz > 0.0)) throw DesignError("bandpass: sample rate must be > 0");
  if (!(spec.low_edge_hz > 0.0)) throw DesignError("bandpass: low edge must be > 0 Hz");
  if (!(spec.low_edge_hz < spec.high_edge_hz)) {
    throw DesignError("bandpass: low edge must be below high edge");
  }
  if (!(spec.high_edge_hz < nyq)) throw DesignError("bandpass: high edge must be below Nyquist");
  if (!(spec.passband_ripple_db > 0.0)) throw DesignError("bandpass: passband ripple must be > 0");
  if (!(spec.stopband_atten_db > spec.passband_ripple_db)) {
    throw DesignError("bandpass: stopband attenuation must exceed passband ripple");
  }
  if (spec.order < 1) throw DesignError("bandpass: order must be >= 1");
  if (!(spec.transition_ratio > 0.0 && spec.transition_ratio < 1.0)) {
    throw DesignError("bandpass: transition ratio must be in (0, 1)");
  }
  if (!(spec.upper_stop_edge_hz() < nyq)) {
    throw DesignError("bandpass: upper stopband edge " + fmt(spec.upper_stop_edge_hz()) +
                      " Hz reaches Nyquist " + fmt(nyq) + " Hz");
  }
}

cplx Biquad::response(cplx z_inv) const {
  return (b0 + z_inv * (b1 + z_inv * b2)) / (1.0 + z_inv * (a1 + z_inv * a2));
}

double Biquad::max_pole_radius() const {
  // Roots of z^2 + a1 z + a2.
  const cplx disc = std::sqrt(cplx(a1 * a1 - 4.0 * a2, 0.0));
  return std::max(std::abs((-a1 + disc) / 2.0), std::abs((-a1 - disc) / 2.0));
}

cplx FilterCoeffs::response(double freq_hz) const {
  const cplx z_inv = std::polar(1.0, -kTwoPi * freq_hz / spec.sample_rate_hz);
  cplx h = gain;
  for (const auto& s : sections) h *= s.response(z_inv);
  return h;
}

double FilterCoeffs::magnitude_db(double freq_hz) const {
  return 20.0 * std::log10(std::max(std::abs(response(freq_hz)), 1e-300));
}

double FilterCoeffs::max_pole_radius() const {
  double r = 0.0;
  for (const auto& s : sections) r = std::max(r, s.max_pole_radius());
  return r;
}

FilterCoeffs design_bandpass(const BandpassSpec& spec) {
  validate(spec);
  const double fs = spec.sample_rate_hz;
  const double wp1 = prewarp(spec.low_edge_hz, fs);
  const double wp2 = prewarp(spec.high_edge_hz, fs);
  const double w0 = std::sqrt(wp1 * wp2);
  const double bw = wp2 - wp1;

  const double omega_stop =
      std::min(bandpass_to_prototype(prewarp(spec.lower_stop_edge_hz(), fs), w0, bw),
               bandpass_to_prototype(prewarp(spec.upper_stop_edge_hz(), fs), w0, bw));
  if (!(omega_stop > 1.0)) {
    throw DesignError("bandpass: transition edges leave no room for a stopband");
  }
  const int needed =
      elliptic_min_order(spec.passband_ripple_db, spec.stopband_atten_db, 1.0 / omega_stop);
  const int order = std::max(spec.order, needed);
  if (order > kMaxPrototypeOrder) {
    throw DesignError("bandpass: transition width requires prototype order " +
                      std::to_string(order) + " (limit " + std::to_string(kMaxPrototypeOrder) +
                      "); widen the transition or the band");
  }

  const AnalogZpk proto =
      elliptic_lowpass_prototype(order, spec.passband_ripple_db, spec.stopband_atten_db);

  std::vector<cplx> poles;
  std::vector<cplx> zeros;
  for (const auto& p : proto.poles) {
    const auto [a, b] = bandpass_images(p, w0, bw);
    poles.push_back(bilinear(a, fs));
    poles.push_back(bilinear(b, fs));
  }
  for (const auto& z : proto.zeros) {
    const auto [a, b] = bandpass_images(z, w0, bw);
    zeros.push_back(bilinear(a, fs));
    zeros.push_back(bilinear(b, fs));
  }
  // Prototype zeros at infinity map to s = 0 and s = inf, i.e. z = 1 and z = -1.
  const std::size_t real_zero_pairs = proto.poles.size() - proto.zeros.size();

  FilterCoeffs out;
  out.spec = spec;
  out.prototype_order = order;

  auto pole_pairs = upper_half(poles);
  auto zero_pairs = upper_half(zeros);
  std::sort(pole_pairs.begin(), pole_pairs.end(),
            [](const ConjPair& a, const ConjPair& b) { return std::abs(a.root) > std::abs(b.root); });

  std::size_t real_pairs_left = real_zero_pairs;
  for (const auto& pp : pole_pairs) {
    Biquad s;
    s.a1 = -2.0 * pp.root.real();
    s.a2 = std::norm(pp.root);
    if (!zero_pairs.empty()) {
      auto nearest = std::min_element(
          zero_pairs.begin(), zero_pairs.end(), [&](const ConjPair& a, const ConjPair& b) {
            return std::abs(a.root - pp.root) < std::abs(b.root - pp.root);
          });
      s.b0 = 1.0;
      s.b1 = -2.0 * nearest->root.real();
      s.b2 = std::norm(nearest->root);
      zero_pairs.erase(nearest);
    } else if (real_pairs_left > 0) {
      s.b0 = 1.0;
      s.b1 = 0.0;
      s.b2 = -1.0;
      --real_pairs_left;
    }
    out.sections.push_back(s);
  }
  if (!zero_pairs.empty() || real_pairs_left != 0) {
    throw DesignError("bandpass: internal pairing left unmatched zeros");
  }

  // Passband reference: prototype DC maps to the band centre.
  const double f_center = fs / kPi * std::atan(w0 / (2.0 * fs));
  out.gain = 1.0;
  out.gain = std::abs(proto.response(0.0)) / std::abs(out.response(f_center));

  if (!(out.max_pole_radius() < 1.0)) throw DesignError("bandpass: design produced unstable poles");
  return out;
}

Conformance check_conformance(const FilterCoeffs& c, std::size_t points) {
  Conformance r;
  r.passband_min_db = 1e300;
  r.passband_max_db = -1e300;
  r.stopband_max_db = -1e300;
  const auto& spec = c.spec;
  const double nyq = 0.5 * spec.sample_rate_hz;
  auto visit = [&](double f) {
    const double db = c.magnitude_db(f);
    if (f >= spec.low_edge_hz && f <= spec.high_edge_hz) {
      r.passband_min_db = std::min(r.passband_min_db, db);
      r.passband_max_db = std::max(r.passband_max_db, db);
    } else if (f <= spec.lower_stop_edge_hz() || f >= spec.upper_stop_edge_hz()) {
      r.stopband_max_db = std::max(r.stopband_max_db, db);
    }
  };
  for (std::size_t i = 0; i < points; ++i) visit(nyq * static_cast<double>(i) / (points - 1));
  for (double f : {spec.low_edge_hz, spec.high_edge_hz, spec.lower_stop_edge_hz(),
                   spec.upper_stop_edge_hz()}) {
    visit(f);
  }
  constexpr double kTol = 1e-6;
  r.stable = c.max_pole_radius() < 1.0;
  r.meets_spec = r.stable && r.passband_min_db >= -spec.passband_ripple_db - kTol &&
                 r.passband_max_db <= kTol && r.stopband_max_db <= -spec.stopband_atten_db + kTol;
  return r;
}

namespace {
constexpr std::size_t kPredictorOrder = 16;
}  // namespace

std::size_t min_zero_phase_length(const FilterCoeffs& coeffs) {
  return 3 * (2 * coeffs.sections.size() + 1);
}

std::vector<double> filter_zero_phase(const FilterCoeffs& c, std::span<const double> x,
                                      EdgeExtension ext) {
  const std::size_t n = x.size();
  if (n <= min_zero_phase_length(c)) {
    throw ValidationError("filter_zero_phase: series of " + std::to_string(n) +
                          " samples is too short (need > " +
                          std::to_string(min_zero_phase_length(c)) + ")");
  }
  // Pad as far as the slowest pole needs to decay by 60 dB.
  const double r = c.max_pole_radius();
  const auto decay = static_cast<std::size_t>(std::ceil(std::log(1e-3) / std::log(r)));

  if (ext == EdgeExtension::linear_prediction) {
    const std::size_t order = std::min(kPredictorOrder, n / 4);
    const auto pred = burg_predictor(x, order);
    std::vector<double> rev(x.rbegin(), x.rend());
    const auto back = extrapolate(rev, pred, decay);
    const auto fwd = extrapolate(x, pred, decay);
    std::vector<double> z(back.rbegin(), back.rend());
    z.insert(z.end(), x.begin(), x.end());
    z.insert(z.end(), fwd.begin(), fwd.end());
    const auto y = filter_zero_phase(c, z, EdgeExtension::odd_reflection);
    return {y.begin() + static_cast<std::ptrdiff_t>(decay),
            y.begin() + static_cast<std::ptrdiff_t>(decay + n)};
  }

  const std::size_t pad = std::min(n - 1, std::max(decay, min_zero_phase_length(c)));

  std::vector<double> y;
  odd_extend(x, pad, y);
  const auto zi = step_states(c);

  auto scaled = [&](double level) {
    auto s = zi;
    for (auto& st : s) {
      st[0] *= level;
      st[1] *= level;
    }
    return s;
  };
  run_cascade(c, y, scaled(y.front()));
  std::reverse(y.begin(), y.end());
  run_cascade(c, y, scaled(y.front()));
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad),
          y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> filter_single_pass(const FilterCoeffs& c, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  run_cascade(c, y, std::vector<std::array<double, 2>>(c.sections.size(), {0.0, 0.0}));
  return y;
}

}  // namespace vitalchirp::dsp
