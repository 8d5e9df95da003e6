#include "vitalchirp/dsp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "vitalchirp/error.hpp"

namespace vitalchirp::dsp {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;
  std::vector<std::complex<double>> result;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 1) throw ValidationError("RealFft: length must be >= 1");
  std::lock_guard lock(planner_mutex());
  impl_->in = fftw_alloc_real(n);
  impl_->out = fftw_alloc_complex(n / 2 + 1);
  impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out, FFTW_ESTIMATE);
  impl_->result.resize(n / 2 + 1);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::span<const std::complex<double>> RealFft::forward(std::span<const double> x) {
  if (x.size() > n_) throw ValidationError("RealFft: input longer than transform");
  std::copy(x.begin(), x.end(), impl_->in);
  std::fill(impl_->in + x.size(), impl_->in + n_, 0.0);
  fftw_execute(impl_->plan);
  for (std::size_t k = 0; k < bins(); ++k) {
    impl_->result[k] = {impl_->out[k][0], impl_->out[k][1]};
  }
  return impl_->result;
}

}  // namespace vitalchirp::dsp
