#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vitalchirp::dsp {

// Elliptic bandpass requirements. `order` is the minimum lowpass-prototype
// order (the bandpass has twice as many poles); the designer raises it when
// needed to reach stopband_atten_db at the transition edges
// low_edge*(1 - transition_ratio) and high_edge*(1 + transition_ratio).
struct BandpassSpec {
  double low_edge_hz = 0.13;
  double high_edge_hz = 0.5;
  double sample_rate_hz = 50.0;
  double passband_ripple_db = 1.0;
  double stopband_atten_db = 40.0;
  int order = 4;
  double transition_ratio = 0.3;

  double lower_stop_edge_hz() const { return low_edge_hz * (1.0 - transition_ratio); }
  double upper_stop_edge_hz() const { return high_edge_hz * (1.0 + transition_ratio); }
};

// Throws DesignError naming the violated constraint.
void validate(const BandpassSpec& spec);

// Direct-form biquad, a0 = 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  std::complex<double> response(std::complex<double> z_inv) const;
  double max_pole_radius() const;
};

struct FilterCoeffs {
  std::vector<Biquad> sections;
  double gain = 1.0;
  int prototype_order = 0;
  BandpassSpec spec;

  std::complex<double> response(double freq_hz) const;
  double magnitude_db(double freq_hz) const;
  double max_pole_radius() const;
};

FilterCoeffs design_bandpass(const BandpassSpec& spec);

// Dense-grid summary of a designed filter.
struct Conformance {
  double passband_min_db = 0.0;
  double passband_max_db = 0.0;
  double stopband_max_db = 0.0;
  bool stable = false;
  bool meets_spec = false;
};

Conformance check_conformance(const FilterCoeffs& coeffs, std::size_t grid_points = 8192);

// Shortest input accepted by filter_zero_phase: three times the cascade's
// tap span (2 * sections + 1).
std::size_t min_zero_phase_length(const FilterCoeffs& coeffs);

enum class EdgeExtension {
  odd_reflection,     // pad by point reflection about the end samples
  linear_prediction,  // first extend by Burg-predicted continuation
};

// Forward-backward filtering with steady-state initial conditions. Throws
// ValidationError for inputs that are too short.
std::vector<double> filter_zero_phase(const FilterCoeffs& coeffs, std::span<const double> x,
                                      EdgeExtension ext = EdgeExtension::odd_reflection);

// Plain causal cascade, zero initial state.
std::vector<double> filter_single_pass(const FilterCoeffs& coeffs, std::span<const double> x);

}  // namespace vitalchirp::dsp
