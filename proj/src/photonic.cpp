#include "vitalchirp/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::photonic {

void validate(const IfLfmParams& p) {
  if (!(p.center_freq_hz > 0.0)) throw ValidationError("IF-LFM: center frequency must be > 0");
  if (!(p.bandwidth_hz > 0.0)) throw ValidationError("IF-LFM: bandwidth must be > 0");
  if (!(p.pulse_width_s > 0.0 && p.pulse_width_s <= p.pulse_period_s)) {
    throw ValidationError("IF-LFM: pulse width must be in (0, pulse_period]");
  }
  if (!(2.0 * p.center_freq_hz > p.bandwidth_hz)) {
    throw ValidationError("IF-LFM: start frequency 4fC - 2fB must be positive");
  }
}

ChirpParams derive_chirp(const IfLfmParams& p) {
  validate(p);
  ChirpParams c;
  c.start_freq_hz = 4.0 * p.center_freq_hz - 2.0 * p.bandwidth_hz;
  c.sweep_bandwidth_hz = 4.0 * p.bandwidth_hz;
  c.chirp_rate_hz_per_s = 4.0 * (p.bandwidth_hz / p.pulse_width_s);
  c.pulse_period_s = p.pulse_period_s;
  c.pulse_width_s = p.pulse_width_s;
  c.carrier_wavelength_m = kSpeedOfLight / c.start_freq_hz;
  return c;
}

double FbgProfile::sigma_hz() const {
  return fwhm_3db_hz / (2.0 * std::sqrt(2.0 * std::log(notch_depth_db / 3.0)));
}

void validate(const FbgProfile& fbg) {
  if (!(fbg.notch_depth_db > 3.0)) {
    throw ValidationError("FBG profile: notch depth must exceed 3 dB for a defined 3-dB width");
  }
  if (!(fbg.fwhm_3db_hz > 0.0)) throw ValidationError("FBG profile: 3-dB width must be > 0");
  if (!std::isfinite(fbg.displacement_to_shift_hz_per_mm)) {
    throw ValidationError("FBG profile: displacement-to-shift must be finite");
  }
}

double fbg_transmission_db(const FbgProfile& fbg, double df) {
  validate(fbg);
  const double sigma = fbg.sigma_hz();
  return -fbg.notch_depth_db * std::exp(-(df * df) / (2.0 * sigma * sigma));
}

double fbg_transmission(const FbgProfile& fbg, double df) {
  return std::pow(10.0, fbg_transmission_db(fbg, df) / 10.0);
}

double max_slope_offset(const FbgProfile& fbg) {
  validate(fbg);
  // T = exp(-a g(u)), g = exp(-u^2/2), u = df/sigma. |dT/du| peaks where
  // 1 - u^2 + a u^2 g(u) = 0, with a single root above u = 1.
  const double a = fbg.notch_depth_db * std::log(10.0) / 10.0;
  auto f = [a](double u) { return 1.0 - u * u + a * u * u * std::exp(-0.5 * u * u); };
  double lo = 1.0;
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 1.5;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) * fbg.sigma_hz();
}

FbgProfile make_fbg_profile(double depth_db, double fwhm_hz, double kappa) {
  FbgProfile fbg;
  fbg.notch_depth_db = depth_db;
  fbg.fwhm_3db_hz = fwhm_hz;
  fbg.displacement_to_shift_hz_per_mm = kappa;
  fbg.carrier_operating_offset_hz = -max_slope_offset(fbg);
  return fbg;
}

ContactSignal contact_intensity(std::span<const double> x_mm, const FbgProfile& fbg,
                                double carrier_power_mw, double sideband_power_mw,
                                double noise_rms, const physio::TimeGrid& grid,
                                std::uint64_t noise_seed) {
  validate(fbg);
  if (x_mm.size() != grid.count) {
    throw ValidationError("contact_intensity: displacement length does not match time grid");
  }
  if (!(carrier_power_mw >= 0.0) || !(sideband_power_mw >= 0.0) || !(noise_rms >= 0.0)) {
    throw ValidationError("contact_intensity: powers and noise must be >= 0");
  }
  const double sigma = fbg.sigma_hz();
  if (std::abs(fbg.carrier_operating_offset_hz) > 3.0 * sigma) {
    throw ValidationError("contact_intensity: operating point lies outside the notch");
  }

  ContactSignal out;
  out.grid = grid;
  out.intensity_mw.resize(x_mm.size());

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double kappa = fbg.displacement_to_shift_hz_per_mm;
  for (std::size_t n = 0; n < x_mm.size(); ++n) {
    const double offset = fbg.carrier_operating_offset_hz - kappa * x_mm[n];
    out.max_excursion_hz = std::max(out.max_excursion_hz, std::abs(offset));
    double p = carrier_power_mw * fbg_transmission(fbg, offset) + 2.0 * sideband_power_mw;
    if (noise_rms > 0.0) p *= 1.0 + noise_rms * noise(rng);
    out.intensity_mw[n] = p;
  }
  out.edge_warning = out.max_excursion_hz > 3.0 * sigma;
  return out;
}

SidebandWeights sideband_weights(const ModulatorModel& mod) {
  if (mod.bias != Bias::matp) {
    throw ValidationError("sideband_weights: only MATP bias is supported");
  }
  if (!(mod.modulation_index > 0.0)) {
    throw ValidationError("sideband_weights: modulation index must be > 0");
  }
  // MATP: E ~ cos(m sin wt) = J0(m) + 2 sum J_2n(m) cos(2n wt), so every
  // even sideband carries J_2n(m) and J0^2 + 2 J2^2 <= 1.
  return SidebandWeights{std::cyl_bessel_j(0.0, mod.modulation_index),
                         std::cyl_bessel_j(2.0, mod.modulation_index)};
}

}  // namespace vitalchirp::photonic
