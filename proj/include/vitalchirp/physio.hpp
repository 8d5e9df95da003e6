#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vitalchirp::physio {

struct Harmonic {
  int order = 2;                    // >= 2
  double relative_amplitude = 0.0;  // fraction of resp_amplitude, 0..1
};

// Ground-truth vital parameters and chest-wall motion model of one person.
// Amplitudes are peak displacements in millimetres.
struct SubjectVitals {
  std::string id;
  double respiration_rate_rpm = 15.0;
  double heartbeat_rate_bpm = 72.0;
  double resp_amplitude_mm = 4.0;
  double heart_amplitude_mm = 0.3;
  std::vector<Harmonic> resp_harmonics;
  double resp_phase_rad = 0.0;
  double heart_phase_rad = 0.0;
  double motion_noise_rms_mm = 0.0;
  std::uint64_t rng_seed = 0;

  double respiration_hz() const { return respiration_rate_rpm / 60.0; }
  double heartbeat_hz() const { return heartbeat_rate_bpm / 60.0; }
};

// Throws ValidationError when rates or amplitudes are out of range.
void validate(const SubjectVitals& subject);

struct TimeGrid {
  double start_s = 0.0;
  double sample_rate_hz = 1.0;
  std::size_t count = 1;

  double at(std::size_t n) const { return start_s + static_cast<double>(n) / sample_rate_hz; }
  double step() const { return 1.0 / sample_rate_hz; }
  double duration() const { return static_cast<double>(count) / sample_rate_hz; }
};

TimeGrid make_time_grid(double duration_s, double sample_rate_hz, double start_s = 0.0);

// Chest-wall displacement x(t) in mm: respiration fundamental plus its
// harmonics, heartbeat, and optional white Gaussian motion noise seeded by
// subject.rng_seed.
std::vector<double> synth_motion(const SubjectVitals& subject, const TimeGrid& grid);

// Respiration fundamental band and heartbeat band that presets must fall in.
inline constexpr double kRespBandLowHz = 0.13;
inline constexpr double kRespBandHighHz = 0.5;
inline constexpr double kHeartBandLowHz = 0.8;
inline constexpr double kHeartBandHighHz = 1.9;

// Named subjects used by the bundled scenarios. Each preset checks that its
// respiration and heartbeat fundamentals sit inside the processing bands and
// that respiration dominates the chest motion.
namespace presets {

SubjectVitals volunteer_a();           // 21 rpm / 87 bpm, contact
SubjectVitals volunteer_b();           // 12 rpm / 74 bpm, second breathing harmonic
SubjectVitals volunteer_c();           // 18 rpm / 68 bpm
SubjectVitals single_channel_contact();    // 24 rpm / 73 bpm
SubjectVitals single_channel_radar();      // 15 rpm / 81 bpm
SubjectVitals by_name(const std::string& name);

}  // namespace presets

}  // namespace vitalchirp::physio
