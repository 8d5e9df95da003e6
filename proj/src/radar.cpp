#include "vitalchirp/radar.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/error.hpp"
#include "vitalchirp/seed.hpp"

namespace vitalchirp::radar {

std::size_t AcquisitionParams::slow_count() const {
  // Tolerate representation error in duration / period (60 / 0.02).
  return static_cast<std::size_t>(std::floor(duration_s / slow_period_s + 1e-9));
}

std::size_t AcquisitionParams::fast_count() const {
  return static_cast<std::size_t>(std::llround(frame_width_s * fast_rate_hz));
}

void validate(const AcquisitionParams& acq, const photonic::ChirpParams& chirp) {
  if (!(acq.fast_rate_hz > 0.0) || !(acq.slow_period_s > 0.0) || !(acq.frame_width_s > 0.0) ||
      !(acq.duration_s > 0.0)) {
    throw ValidationError("acquisition: rates, periods and duration must be > 0");
  }
  if (acq.frame_width_s > chirp.pulse_width_s * (1.0 + 1e-12)) {
    throw ValidationError("acquisition: frame width exceeds the chirp pulse width");
  }
  if (acq.fast_count() < 2) {
    throw ValidationError("acquisition: frame must hold at least 2 fast-time samples");
  }
  if (acq.slow_period_s < chirp.pulse_period_s * (1.0 - 1e-12)) {
    throw ValidationError("acquisition: slow period shorter than the chirp pulse period");
  }
  if (acq.slow_count() < 1) throw ValidationError("acquisition: duration shorter than one frame");
  if (!(acq.noise_rms >= 0.0)) throw ValidationError("acquisition: noise_rms must be >= 0");
  if (!std::isfinite(acq.amplitude_exponent)) {
    throw ValidationError("acquisition: amplitude_exponent must be finite");
  }
}

double unambiguous_range(const photonic::ChirpParams& chirp, double fast_rate_hz) {
  // f_beat = chirp_rate * 2R / c  ->  R_max = c (fs/2) / (2 chirp_rate).
  return kSpeedOfLight * (0.5 * fast_rate_hz) / (2.0 * chirp.chirp_rate_hz_per_s);
}

double beat_frequency(const photonic::ChirpParams& chirp, double range_m) {
  return chirp.chirp_rate_hz_per_s * 2.0 * range_m / kSpeedOfLight;
}

DechirpFrameSet truncate(const DechirpFrameSet& frames, double duration_s) {
  if (!(duration_s > 0.0)) throw ValidationError("truncate: duration must be > 0");
  const auto rows = static_cast<std::size_t>(std::floor(duration_s * frames.slow_rate_hz + 1e-9));
  if (rows > frames.slow_count) {
    throw ValidationError("truncate: requested duration exceeds the record");
  }
  if (rows < 1) throw ValidationError("truncate: duration shorter than one frame");
  DechirpFrameSet out = frames;
  out.slow_count = rows;
  out.samples.resize(rows * frames.fast_count);
  out.samples.shrink_to_fit();
  out.acquisition.duration_s = static_cast<double>(rows) / frames.slow_rate_hz;
  return out;
}

namespace {

void check_range(const std::string& label, double range_m, double r_max) {
  if (!(range_m > 0.0)) {
    throw ValidationError("target '" + label + "': nominal range must be > 0");
  }
  if (range_m >= r_max) {
    std::ostringstream msg;
    msg << "target '" << label << "' at " << range_m
        << " m is beyond the unambiguous range R_max = " << r_max << " m";
    throw ValidationError(msg.str());
  }
}

}  // namespace

DechirpFrameSet synth_dechirp_frames(std::span<const MotionTrack> tracks,
                                     const photonic::ChirpParams& chirp,
                                     const AcquisitionParams& acq, std::uint64_t seed) {
  validate(acq, chirp);
  const double r_max = unambiguous_range(chirp, acq.fast_rate_hz);
  const std::size_t rows = acq.slow_count();
  const std::size_t cols = acq.fast_count();
  for (const auto& t : tracks) {
    check_range(t.label, t.nominal_range_m, r_max);
    if (t.displacement_mm.size() != rows) {
      throw ValidationError("target '" + t.label + "': motion length does not match slow time");
    }
    if (!(t.reflectivity >= 0.0)) {
      throw ValidationError("target '" + t.label + "': reflectivity must be >= 0");
    }
  }

  DechirpFrameSet out;
  out.slow_count = rows;
  out.fast_count = cols;
  out.slow_rate_hz = acq.slow_rate_hz();
  out.fast_rate_hz = acq.fast_rate_hz;
  out.chirp = chirp;
  out.acquisition = acq;
  out.samples.assign(rows * cols, 0.0);

  const double k4 = chirp.chirp_rate_hz_per_s;
  const double phase_per_m = 4.0 * kPi / chirp.carrier_wavelength_m;
  const double dt = 1.0 / acq.fast_rate_hz;

  for (std::size_t m = 0; m < rows; ++m) {
    auto row = out.row(m);
    for (const auto& t : tracks) {
      // Stop-and-hop: range held for the whole frame.
      const double range = t.nominal_range_m + t.displacement_mm[m] * 1e-3;
      const double delay = 2.0 * range / kSpeedOfLight;
      const double amp = t.reflectivity / std::pow(t.nominal_range_m, acq.amplitude_exponent);
      const double w = kTwoPi * k4 * delay * dt;
      const double phi = phase_per_m * range;
      for (std::size_t n = 0; n < cols; ++n) {
        row[n] += amp * std::cos(w * static_cast<double>(n) + phi);
      }
    }
    if (acq.noise_rms > 0.0) {
      std::mt19937_64 rng(mix_seed(seed, m));
      std::normal_distribution<double> noise(0.0, acq.noise_rms);
      for (auto& v : row) v += noise(rng);
    }
  }
  return out;
}

DechirpFrameSet synth_dechirp_frames(std::span<const RadarTarget> targets,
                                     const photonic::ChirpParams& chirp,
                                     const AcquisitionParams& acq, std::uint64_t seed) {
  validate(acq, chirp);
  const auto grid = physio::TimeGrid{0.0, acq.slow_rate_hz(), acq.slow_count()};
  const double r_max = unambiguous_range(chirp, acq.fast_rate_hz);

  std::vector<MotionTrack> tracks;
  tracks.reserve(targets.size());
  for (const auto& t : targets) {
    check_range(t.subject.id, t.nominal_range_m, r_max);
    tracks.push_back({t.subject.id, t.nominal_range_m, t.reflectivity,
                      physio::synth_motion(t.subject, grid)});
  }
  auto out = synth_dechirp_frames(std::span<const MotionTrack>(tracks), chirp, acq, seed);
  out.truth = std::vector<RadarTarget>(targets.begin(), targets.end());
  return out;
}

}  // namespace vitalchirp::radar
