#include "vitalchirp/dsp/phase.hpp"

#include <cmath>

#include "vitalchirp/constants.hpp"

namespace vitalchirp::dsp {

double wrap_phase(double phi) {
  double w = std::remainder(phi, kTwoPi);  // [-pi, pi]
  if (w <= -kPi) w += kTwoPi;
  return w;
}

std::vector<double> unwrap_phase(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  double turns = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double d = phases[i] - phases[i - 1];
    if (std::abs(d) > kPi) turns -= std::round(d / kTwoPi);
    out[i] = phases[i] + turns * kTwoPi;
  }
  return out;
}

}  // namespace vitalchirp::dsp
