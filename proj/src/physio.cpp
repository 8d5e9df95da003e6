#include "vitalchirp/physio.hpp"

#include <cmath>
#include <random>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::physio {

void validate(const SubjectVitals& s) {
  const std::string who = s.id.empty() ? std::string("subject") : "subject '" + s.id + "'";
  if (!(s.respiration_rate_rpm > 0.0 && s.respiration_rate_rpm <= 60.0)) {
    throw ValidationError(who + ": respiration_rate must be in (0, 60] rpm");
  }
  if (!(s.heartbeat_rate_bpm > 0.0 && s.heartbeat_rate_bpm <= 200.0)) {
    throw ValidationError(who + ": heartbeat_rate must be in (0, 200] bpm");
  }
  if (!(s.resp_amplitude_mm >= 0.0) || !(s.heart_amplitude_mm >= 0.0)) {
    throw ValidationError(who + ": amplitudes must be >= 0");
  }
  if (!(s.motion_noise_rms_mm >= 0.0)) {
    throw ValidationError(who + ": motion_noise_rms must be >= 0");
  }
  for (const auto& h : s.resp_harmonics) {
    if (h.order < 2) throw ValidationError(who + ": harmonic order must be >= 2");
    if (!(h.relative_amplitude >= 0.0 && h.relative_amplitude <= 1.0)) {
      throw ValidationError(who + ": harmonic relative amplitude must be in [0, 1]");
    }
  }
}

TimeGrid make_time_grid(double duration_s, double sample_rate_hz, double start_s) {
  if (!(duration_s > 0.0)) throw ValidationError("time grid: duration must be > 0");
  if (!(sample_rate_hz > 0.0)) throw ValidationError("time grid: sample_rate must be > 0");
  const auto count = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  if (count < 1) throw ValidationError("time grid: duration * sample_rate rounds to zero samples");
  return TimeGrid{start_s, sample_rate_hz, count};
}

std::vector<double> synth_motion(const SubjectVitals& s, const TimeGrid& grid) {
  validate(s);
  if (!(grid.sample_rate_hz > 0.0) || grid.count < 1) {
    throw ValidationError("synth_motion: invalid time grid");
  }
  const double fr = s.respiration_hz();
  const double fh = s.heartbeat_hz();

  std::vector<double> x(grid.count);
  for (std::size_t n = 0; n < grid.count; ++n) {
    const double t = grid.at(n);
    double v = s.resp_amplitude_mm * std::sin(kTwoPi * fr * t + s.resp_phase_rad);
    for (const auto& h : s.resp_harmonics) {
      v += h.relative_amplitude * s.resp_amplitude_mm * std::sin(kTwoPi * h.order * fr * t);
    }
    v += s.heart_amplitude_mm * std::sin(kTwoPi * fh * t + s.heart_phase_rad);
    x[n] = v;
  }

  if (s.motion_noise_rms_mm > 0.0) {
    std::mt19937_64 rng(s.rng_seed);
    std::normal_distribution<double> noise(0.0, s.motion_noise_rms_mm);
    for (auto& v : x) v += noise(rng);
  }
  return x;
}

namespace presets {
namespace {

SubjectVitals checked(SubjectVitals s) {
  validate(s);
  const double fr = s.respiration_hz();
  const double fh = s.heartbeat_hz();
  if (fr < kRespBandLowHz || fr > kRespBandHighHz) {
    throw ValidationError("preset '" + s.id + "': respiration outside the respiration band");
  }
  if (fh < kHeartBandLowHz || fh > kHeartBandHighHz) {
    throw ValidationError("preset '" + s.id + "': heartbeat outside the heartbeat band");
  }
  if (!(s.resp_amplitude_mm > s.heart_amplitude_mm)) {
    throw ValidationError("preset '" + s.id + "': respiration must dominate chest motion");
  }
  return s;
}

}  // namespace

SubjectVitals volunteer_a() {
  SubjectVitals s;
  s.id = "volunteer-a";
  s.respiration_rate_rpm = 21.0;
  s.heartbeat_rate_bpm = 87.0;
  s.resp_phase_rad = 0.4;
  s.heart_phase_rad = 1.1;
  s.rng_seed = 0xA;
  return checked(s);
}

SubjectVitals volunteer_b() {
  SubjectVitals s;
  s.id = "volunteer-b";
  s.respiration_rate_rpm = 12.0;
  s.heartbeat_rate_bpm = 74.0;
  s.resp_harmonics = {{2, 0.3}};
  s.resp_phase_rad = 2.0;
  s.heart_phase_rad = 0.3;
  s.rng_seed = 0xB;
  return checked(s);
}

SubjectVitals volunteer_c() {
  SubjectVitals s;
  s.id = "volunteer-c";
  s.respiration_rate_rpm = 18.0;
  s.heartbeat_rate_bpm = 68.0;
  s.resp_phase_rad = -0.7;
  s.heart_phase_rad = 2.5;
  s.rng_seed = 0xC;
  return checked(s);
}

SubjectVitals single_channel_contact() {
  SubjectVitals s;
  s.id = "single-channel-contact";
  s.respiration_rate_rpm = 24.0;
  s.heartbeat_rate_bpm = 73.0;
  s.resp_phase_rad = 0.9;
  s.heart_phase_rad = -0.4;
  s.rng_seed = 0x5A;
  return checked(s);
}

SubjectVitals single_channel_radar() {
  SubjectVitals s;
  s.id = "single-channel-radar";
  s.respiration_rate_rpm = 15.0;
  s.heartbeat_rate_bpm = 81.0;
  s.resp_phase_rad = 1.7;
  s.heart_phase_rad = 0.8;
  s.rng_seed = 0x5B;
  return checked(s);
}

SubjectVitals by_name(const std::string& name) {
  if (name == "volunteer-a") return volunteer_a();
  if (name == "volunteer-b") return volunteer_b();
  if (name == "volunteer-c") return volunteer_c();
  if (name == "single-channel-contact") return single_channel_contact();
  if (name == "single-channel-radar") return single_channel_radar();
  throw ValidationError("unknown subject preset '" + name + "'");
}

}  // namespace presets
}  // namespace vitalchirp::physio
