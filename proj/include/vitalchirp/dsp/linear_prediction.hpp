#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vitalchirp::dsp {

// Burg estimate of an order-p forward predictor,
// x[n] ~ sum_{k=1..p} a[k-1] * x[n-k]. The implied all-pole model is
// minimum phase. An all-zero input yields an all-zero predictor.
std::vector<double> burg_predictor(std::span<const double> x, std::size_t order);

// Continues x forward by count samples with the predictor.
std::vector<double> extrapolate(std::span<const double> x, std::span<const double> predictor,
                                std::size_t count);

}  // namespace vitalchirp::dsp
