#include "vitalchirp/dsp/linear_prediction.hpp"

#include <algorithm>

#include "vitalchirp/error.hpp"

namespace vitalchirp::dsp {

namespace {
// Relative prediction-error energy below which further stages only fit round-off.
constexpr double kResidualFloor = 1e-12;
}  // namespace

std::vector<double> burg_predictor(std::span<const double> x, std::size_t order) {
  const std::size_t n = x.size();
  if (order == 0 || n <= order) {
    throw ValidationError("burg_predictor: need more samples than the model order");
  }
  std::vector<double> f(x.begin(), x.end());
  std::vector<double> b(x.begin(), x.end());
  std::vector<double> a{1.0};
  double first_den = 0.0;

  for (std::size_t m = 0; m < order; ++m) {
    // Forward errors f[m+1..n-1] pair with backward errors b[m..n-2].
    double num = 0.0, den = 0.0;
    for (std::size_t i = m + 1; i < n; ++i) {
      num += f[i] * b[i - 1];
      den += f[i] * f[i] + b[i - 1] * b[i - 1];
    }
    if (m == 0) first_den = den;
    if (den <= kResidualFloor * first_den) break;
    const double k = -2.0 * num / den;

    a.push_back(0.0);
    std::vector<double> next(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) next[i] = a[i] + k * a[a.size() - 1 - i];
    a = std::move(next);

    for (std::size_t i = n - 1; i > m; --i) {
      const double fi = f[i];
      const double bi = b[i - 1];
      f[i] = fi + k * bi;
      b[i] = bi + k * fi;
    }
  }
  std::vector<double> pred(order, 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) pred[i - 1] = -a[i];
  return pred;
}

std::vector<double> extrapolate(std::span<const double> x, std::span<const double> predictor,
                                std::size_t count) {
  const std::size_t p = predictor.size();
  if (x.size() < p) throw ValidationError("extrapolate: history shorter than the predictor");
  std::vector<double> hist(x.end() - static_cast<std::ptrdiff_t>(p), x.end());
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    double v = 0.0;
    for (std::size_t k = 0; k < p; ++k) v += predictor[k] * hist[hist.size() - 1 - k];
    out.push_back(v);
    hist.push_back(v);
  }
  return out;
}

}  // namespace vitalchirp::dsp
