#include "vitalchirp/dsp/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/dsp/fft.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::dsp {

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::hann && n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  return out;
}

MagnitudeSpectrum spectrum(std::span<const double> x, double fs, Window window,
                           std::size_t fft_length) {
  if (x.size() < 2) throw ValidationError("spectrum: need at least 2 samples");
  if (!(fs > 0.0)) throw ValidationError("spectrum: sample rate must be > 0");
  const std::size_t nfft = fft_length == 0 ? x.size() : fft_length;
  if (nfft < x.size()) throw ValidationError("spectrum: fft_length shorter than the series");

  const auto w = make_window(window, x.size());
  std::vector<double> xw(x.size());
  double wsum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xw[i] = x[i] * w[i];
    wsum += w[i];
  }

  RealFft fft(nfft);
  const auto bins = fft.forward(xw);

  MagnitudeSpectrum out;
  out.window = window;
  out.source_length = x.size();
  out.fft_length = nfft;
  out.sample_rate_hz = fs;
  out.frequencies_hz.resize(bins.size());
  out.magnitudes.resize(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const bool edge = k == 0 || (nfft % 2 == 0 && k == nfft / 2);
    out.frequencies_hz[k] = fs * static_cast<double>(k) / static_cast<double>(nfft);
    out.magnitudes[k] = std::abs(bins[k]) * (edge ? 1.0 : 2.0) / wsum;
  }
  return out;
}

PeakResult peak_search(const MagnitudeSpectrum& spec, double low_hz, double high_hz) {
  if (!(low_hz < high_hz)) throw ValidationError("peak_search: empty band");
  const auto& f = spec.frequencies_hz;
  const auto first = static_cast<std::size_t>(
      std::lower_bound(f.begin(), f.end(), low_hz) - f.begin());
  const auto last = static_cast<std::size_t>(
      std::upper_bound(f.begin(), f.end(), high_hz) - f.begin());  // one past
  if (last < first + 3) throw ValidationError("peak_search: band covers fewer than 3 bins");

  PeakResult r;
  std::size_t best = first;
  for (std::size_t k = first; k < last; ++k) {
    if (spec.magnitudes[k] > spec.magnitudes[best]) best = k;
  }
  if (!(spec.magnitudes[best] > 0.0)) return r;

  r.found = true;
  r.bin = best;
  r.peak_freq_hz = f[best];
  r.peak_magnitude = spec.magnitudes[best];
  r.refined_freq_hz = f[best];
  if (best == first || best == last - 1) {
    r.edge_peak = true;
    return r;
  }
  const double lo = spec.magnitudes[best - 1];
  const double hi = spec.magnitudes[best + 1];
  if (lo > 0.0 && hi > 0.0) {
    const double a = std::log(lo);
    const double b = std::log(r.peak_magnitude);
    const double c = std::log(hi);
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) {
      const double delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
      r.refined_freq_hz = f[best] + delta * spec.bin_spacing();
    }
  }
  return r;
}

Bandwidth3db bandwidth_3db(const MagnitudeSpectrum& spec, double peak_freq_hz) {
  const auto& f = spec.frequencies_hz;
  const auto& m = spec.magnitudes;
  if (f.empty()) throw ValidationError("bandwidth_3db: empty spectrum");
  const double pos = peak_freq_hz / spec.bin_spacing();
  auto peak = static_cast<std::size_t>(
      std::clamp(std::llround(pos), 0LL, static_cast<long long>(f.size() - 1)));
  // A refined frequency may round to a shoulder bin; climb to the local max.
  for (;;) {
    if (peak > 0 && m[peak - 1] > m[peak]) {
      --peak;
    } else if (peak + 1 < f.size() && m[peak + 1] > m[peak]) {
      ++peak;
    } else {
      break;
    }
  }
  const double half = m[peak] / std::sqrt(2.0);

  Bandwidth3db r;
  std::size_t k = peak;
  while (k > 0 && m[k - 1] > half) --k;
  if (k == 0) {
    r.open_lower = true;
    r.lower_hz = f.front();
  } else {
    const double t = (m[k] - half) / (m[k] - m[k - 1]);
    r.lower_hz = f[k] - t * (f[k] - f[k - 1]);
  }
  k = peak;
  while (k + 1 < f.size() && m[k + 1] > half) ++k;
  if (k + 1 == f.size()) {
    r.open_upper = true;
    r.upper_hz = f.back();
  } else {
    const double t = (m[k] - half) / (m[k] - m[k + 1]);
    r.upper_hz = f[k] + t * (f[k + 1] - f[k]);
  }
  r.width_hz = r.upper_hz - r.lower_hz;
  return r;
}

}  // namespace vitalchirp::dsp
