#pragma once

#include <complex>
#include <vector>

namespace vitalchirp::dsp {

// Analog filter in zero/pole/gain form, H(s) = gain * prod(s - z) / prod(s - p).
struct AnalogZpk {
  std::vector<std::complex<double>> zeros;
  std::vector<std::complex<double>> poles;
  double gain = 1.0;

  std::complex<double> response(std::complex<double> s) const;
};

// Complete elliptic integral of the first kind, modulus k in [0, 1).
double ellipk(double k);

// Smallest elliptic order meeting ripple/attenuation with selectivity
// k = passband edge / stopband edge (0 < k < 1).
int elliptic_min_order(double ripple_db, double atten_db, double selectivity);

// Selectivity achieved by an order-N design (solves the degree equation).
double elliptic_selectivity(int order, double ripple_db, double atten_db);

// Normalized lowpass Cauer prototype: passband edge at 1 rad/s with
// ripple_db equiripple, stopband from 1/k rad/s with atten_db equiripple.
// DC gain is 1 for odd orders and 10^(-ripple/20) for even orders.
AnalogZpk elliptic_lowpass_prototype(int order, double ripple_db, double atten_db);

}  // namespace vitalchirp::dsp
