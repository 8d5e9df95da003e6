#include "vitalchirp/dsp/elliptic.hpp"

#include <cmath>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/error.hpp"

// Jacobi-function formulation via descending Landen transformations
// (S. J. Orfanidis, "Lecture Notes on Elliptic Filter Design").

namespace vitalchirp::dsp {
namespace {

using cplx = std::complex<double>;

std::vector<double> landen(double k) {
  std::vector<double> v;
  double kk = k;
  for (int i = 0; i < 16 && kk > 1e-16; ++i) {
    const double kp = std::sqrt((1.0 - kk) * (1.0 + kk));
    kk = kk / (1.0 + kp);
    kk *= kk;
    v.push_back(kk);
  }
  return v;
}

// cd(uK, k) and sn(uK, k) for complex u.
cplx cde(cplx u, double k) {
  const auto v = landen(k);
  cplx w = std::cos(u * (kPi / 2.0));
  for (auto it = v.rbegin(); it != v.rend(); ++it) {
    w = (1.0 + *it) * w / (1.0 + *it * w * w);
  }
  return w;
}

cplx sne(cplx u, double k) {
  const auto v = landen(k);
  cplx w = std::sin(u * (kPi / 2.0));
  for (auto it = v.rbegin(); it != v.rend(); ++it) {
    w = (1.0 + *it) * w / (1.0 + *it * w * w);
  }
  return w;
}

// Inverse of sne: returns u such that sn(uK, k) = w.
cplx asne(cplx w, double k) {
  const auto v = landen(k);
  double prev = k;
  for (double vn : v) {
    w = w / (1.0 + std::sqrt(1.0 - w * w * prev * prev)) * (2.0 / (1.0 + vn));
    prev = vn;
  }
  return std::asin(w) * (2.0 / kPi);
}

double complement(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

// K(k') computed from k directly to stay accurate for tiny k.
double ellipk_complement(double k) { return kPi / (2.0 * agm(1.0, k)); }

struct Epsilons {
  double passband;
  double stopband;
};

Epsilons epsilons(double ripple_db, double atten_db) {
  if (!(ripple_db > 0.0)) throw DesignError("elliptic: passband ripple must be > 0 dB");
  if (!(atten_db > ripple_db)) {
    throw DesignError("elliptic: stopband attenuation must exceed passband ripple");
  }
  return {std::sqrt(std::pow(10.0, ripple_db / 10.0) - 1.0),
          std::sqrt(std::pow(10.0, atten_db / 10.0) - 1.0)};
}

}  // namespace

std::complex<double> AnalogZpk::response(std::complex<double> s) const {
  cplx h = gain;
  for (const auto& z : zeros) h *= s - z;
  for (const auto& p : poles) h /= s - p;
  return h;
}

double ellipk(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DesignError("ellipk: modulus must be in [0, 1)");
  return kPi / (2.0 * agm(1.0, complement(k)));
}

int elliptic_min_order(double ripple_db, double atten_db, double selectivity) {
  if (!(selectivity > 0.0 && selectivity < 1.0)) {
    throw DesignError("elliptic: selectivity must be in (0, 1)");
  }
  const auto eps = epsilons(ripple_db, atten_db);
  const double k1 = eps.passband / eps.stopband;
  const double n = ellipk(selectivity) * ellipk_complement(k1) /
                   (ellipk_complement(selectivity) * ellipk(k1));
  return static_cast<int>(std::ceil(n - 1e-9));
}

double elliptic_selectivity(int order, double ripple_db, double atten_db) {
  if (order < 1) throw DesignError("elliptic: order must be >= 1");
  const auto eps = epsilons(ripple_db, atten_db);
  const double k1 = eps.passband / eps.stopband;
  const double k1p = complement(k1);
  double prod = 1.0;
  for (int i = 1; i <= order / 2; ++i) {
    prod *= sne(cplx((2.0 * i - 1.0) / order, 0.0), k1p).real();
  }
  const double kp = std::pow(k1p, order) * std::pow(prod, 4);
  return complement(kp);
}

AnalogZpk elliptic_lowpass_prototype(int order, double ripple_db, double atten_db) {
  const auto eps = epsilons(ripple_db, atten_db);
  const double k1 = eps.passband / eps.stopband;
  const double k = elliptic_selectivity(order, ripple_db, atten_db);
  const cplx j(0.0, 1.0);

  AnalogZpk out;
  // v0 such that sn(j v0 K, k) relates to 1/eps_p through the degree equation.
  const double v0 = (-j * asne(j / eps.passband, k1) / static_cast<double>(order)).real();
  for (int i = 1; i <= order / 2; ++i) {
    const double u = (2.0 * i - 1.0) / order;
    const cplx zeta = cde(u, k);
    const cplx z = j / (k * zeta);
    cplx p = j * cde(cplx(u, -v0), k);
    if (p.real() > 0.0) p = -std::conj(p);
    out.zeros.push_back(z);
    out.zeros.push_back(std::conj(z));
    out.poles.push_back(p);
    out.poles.push_back(std::conj(p));
  }
  if (order % 2 == 1) {
    const cplx p0 = j * sne(cplx(0.0, v0), k);
    out.poles.emplace_back(-std::abs(p0.real()), 0.0);
  }

  out.gain = 1.0;
  const double dc = std::abs(out.response(0.0));
  const double target = order % 2 == 1 ? 1.0 : 1.0 / std::sqrt(1.0 + eps.passband * eps.passband);
  out.gain = target / dc;
  return out;
}

}  // namespace vitalchirp::dsp
