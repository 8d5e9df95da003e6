#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vitalchirp/photonic.hpp"
#include "vitalchirp/physio.hpp"

namespace vitalchirp::radar {

struct RadarTarget {
  physio::SubjectVitals subject;
  double nominal_range_m = 1.0;
  double reflectivity = 1.0;
};

// Intermittent acquisition of the de-chirped output: one frame of
// frame_width_s at fast_rate_hz every slow_period_s.
struct AcquisitionParams {
  double fast_rate_hz = 10e6;
  double slow_period_s = 20e-3;
  double frame_width_s = 60e-6;
  double duration_s = 60.0;
  double noise_rms = 1.5;
  double amplitude_exponent = 2.0;

  std::size_t slow_count() const;
  std::size_t fast_count() const;
  double slow_rate_hz() const { return 1.0 / slow_period_s; }
};

void validate(const AcquisitionParams& acq, const photonic::ChirpParams& chirp);

// Slow-time x fast-time matrix of real de-chirped samples, row-major.
struct DechirpFrameSet {
  std::vector<double> samples;
  std::size_t slow_count = 0;
  std::size_t fast_count = 0;
  double slow_rate_hz = 0.0;
  double fast_rate_hz = 0.0;
  photonic::ChirpParams chirp;
  AcquisitionParams acquisition;
  std::optional<std::vector<RadarTarget>> truth;

  std::span<const double> row(std::size_t m) const {
    return {samples.data() + m * fast_count, fast_count};
  }
  std::span<double> row(std::size_t m) { return {samples.data() + m * fast_count, fast_count}; }
  double at(std::size_t m, std::size_t n) const { return samples[m * fast_count + n]; }
};

// Keep only the first duration_s of slow time.
DechirpFrameSet truncate(const DechirpFrameSet& frames, double duration_s);

// Largest range whose beat tone stays below fast_rate/2.
double unambiguous_range(const photonic::ChirpParams& chirp, double fast_rate_hz);

// Beat frequency of a point scatterer at range_m.
double beat_frequency(const photonic::ChirpParams& chirp, double range_m);

// A scatterer whose displacement is given directly, one value per slow-time
// frame. Used for step/impulse motion that SubjectVitals cannot express.
struct MotionTrack {
  std::string label;
  double nominal_range_m = 1.0;
  double reflectivity = 1.0;
  std::vector<double> displacement_mm;
};

// Receiver noise for frame m is drawn from a generator keyed by (seed, m), so
// each row is reproducible independently of evaluation order.
DechirpFrameSet synth_dechirp_frames(std::span<const RadarTarget> targets,
                                     const photonic::ChirpParams& chirp,
                                     const AcquisitionParams& acq, std::uint64_t seed);

DechirpFrameSet synth_dechirp_frames(std::span<const MotionTrack> tracks,
                                     const photonic::ChirpParams& chirp,
                                     const AcquisitionParams& acq, std::uint64_t seed);

}  // namespace vitalchirp::radar
