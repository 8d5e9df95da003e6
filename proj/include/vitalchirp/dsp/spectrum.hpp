#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vitalchirp::dsp {

enum class Window { rectangular, hann };

std::vector<double> make_window(Window w, std::size_t n);

// Single-sided amplitude spectrum: a sinusoid of amplitude A centred on a bin
// reads A (interior bins are scaled by 2 / sum(window)). With zero padding
// (fft_length > source_length) the bin spacing is sample_rate / fft_length.
struct MagnitudeSpectrum {
  std::vector<double> frequencies_hz;
  std::vector<double> magnitudes;
  Window window = Window::rectangular;
  std::size_t source_length = 0;
  std::size_t fft_length = 0;
  double sample_rate_hz = 0.0;

  double bin_spacing() const { return sample_rate_hz / static_cast<double>(fft_length); }
};

// fft_length == 0 means no padding.
MagnitudeSpectrum spectrum(std::span<const double> x, double sample_rate_hz,
                           Window window = Window::rectangular, std::size_t fft_length = 0);

struct PeakResult {
  bool found = false;        // false when the band holds no energy
  bool edge_peak = false;    // argmax sits on a band edge; not refined
  std::size_t bin = 0;
  double peak_freq_hz = 0.0;
  double peak_magnitude = 0.0;
  double refined_freq_hz = 0.0;
};

// Argmax inside [low_hz, high_hz] refined by a 3-point parabola on log
// magnitude. Throws ValidationError if the band covers fewer than 3 bins.
PeakResult peak_search(const MagnitudeSpectrum& spec, double low_hz, double high_hz);

struct Bandwidth3db {
  double width_hz = 0.0;
  double lower_hz = 0.0;
  double upper_hz = 0.0;
  bool open_lower = false;  // no half-power crossing below the peak
  bool open_upper = false;
};

// Half-power width around the bin nearest peak_freq_hz, crossings linearly
// interpolated in magnitude.
Bandwidth3db bandwidth_3db(const MagnitudeSpectrum& spec, double peak_freq_hz);

}  // namespace vitalchirp::dsp
