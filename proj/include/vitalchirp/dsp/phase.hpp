#pragma once

#include <span>
#include <vector>

namespace vitalchirp::dsp {

// Maps an angle into (-pi, pi].
double wrap_phase(double phi);

// Adds multiples of 2 pi so consecutive differences are within [-pi, pi].
// The first element is kept as is.
std::vector<double> unwrap_phase(std::span<const double> phases);

}  // namespace vitalchirp::dsp
