#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace vitalchirp::dsp {

// Real-input forward DFT of fixed length (FFTW r2c). Produces n/2 + 1 bins,
// X[k] = sum_n x[n] exp(-2 pi i k n / N). One instance must not be used from
// two threads at once; separate instances are independent.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // Input shorter than size() is zero-padded; longer input is an error.
  std::span<const std::complex<double>> forward(std::span<const double> x);

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vitalchirp::dsp
