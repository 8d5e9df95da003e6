#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vitalchirp/dsp/filter.hpp"
#include "vitalchirp/dsp/spectrum.hpp"
#include "vitalchirp/physio.hpp"
#include "vitalchirp/radar.hpp"

namespace vitalchirp::pipelines {

enum class Modality { contact, contactless };

const char* to_string(Modality m);

// Where the slow-time phase of a range bin is referenced. The DFT of a frame
// measures phase at the frame centre, which tracks range at the instantaneous
// sweep frequency there; sweep_start rescales it to the start frequency so
// that phase = 4 pi x / lambda_c.
enum class PhaseReference { sweep_start, frame_center };

struct ProcessingOptions {
  dsp::BandpassSpec respiration{physio::kRespBandLowHz, physio::kRespBandHighHz, 50.0};
  dsp::BandpassSpec heartbeat{physio::kHeartBandLowHz, physio::kHeartBandHighHz, 50.0};
  dsp::Window window = dsp::Window::rectangular;
  std::size_t zero_pad_factor = 8;
  bool zero_phase = true;
  dsp::EdgeExtension edge_extension = dsp::EdgeExtension::linear_prediction;
  bool dc_compensation = false;
  dsp::Window range_window = dsp::Window::hann;
  PhaseReference phase_reference = PhaseReference::sweep_start;
  // Band peaks below this fraction of the input's largest magnitude count as
  // "not detected".
  double detection_floor = 1e-9;
};

struct VitalEstimate {
  bool detected = false;
  bool edge_peak = false;
  double frequency_hz = 0.0;   // refined
  double rate_per_min = 0.0;   // 60 * frequency_hz
  double peak_magnitude = 0.0;
  double width_3db_hz = 0.0;
  bool width_open = false;
  std::optional<double> truth_per_min;
  std::optional<double> error_per_min;
};

struct VitalsReport {
  std::string label;
  Modality modality = Modality::contact;
  VitalEstimate respiration;
  VitalEstimate heartbeat;
  std::optional<double> range_estimate_m;
  std::optional<double> nominal_range_m;
  double duration_s = 0.0;
  double sample_rate_hz = 0.0;
  int resp_filter_order = 0;   // prototype order actually used
  int heart_filter_order = 0;
  std::optional<std::string> error;  // set when the chain could not run
};

// Intermediate series for plotting.
struct VitalTraces {
  std::vector<double> input;  // detrended
  std::vector<double> respiration;
  std::vector<double> heartbeat;
  dsp::MagnitudeSpectrum respiration_spectrum;
  dsp::MagnitudeSpectrum heartbeat_spectrum;
};

// Shared two-band chain: detrend, bandpass, spectrum, peak, 3-dB width.
VitalsReport vitals_from_series(std::span<const double> series, double sample_rate_hz,
                                const std::optional<physio::SubjectVitals>& truth,
                                const ProcessingOptions& options, VitalTraces* traces = nullptr);

VitalsReport contact_rates(std::span<const double> intensity, double sample_rate_hz,
                           const std::optional<physio::SubjectVitals>& truth,
                           const ProcessingOptions& options = {}, VitalTraces* traces = nullptr);

struct RangeProfile {
  std::vector<double> ranges_m;
  std::vector<double> magnitudes;  // mean over slow time
  double bin_width_m = 0.0;
};

RangeProfile range_profile(const radar::DechirpFrameSet& frames,
                           dsp::Window window = dsp::Window::hann);

struct RangePeak {
  std::size_t bin = 0;
  double range_m = 0.0;          // bin centre
  double refined_range_m = 0.0;  // parabolic refinement
  double magnitude = 0.0;
};

// Local maxima standing clear of the profile's median level.
std::vector<RangePeak> find_range_peaks(const RangeProfile& profile);

// Strongest qualifying peak within +-2 bins of target_range_m; throws
// ProcessingError naming the nearest peak otherwise.
RangePeak select_range_peak(const RangeProfile& profile, double target_range_m);

struct TargetPhase {
  std::vector<double> phase_rad;  // unwrapped, one value per frame
  RangePeak peak;
};

// Arctangent demodulation of the complex range-bin series.
TargetPhase extract_target_phase(const radar::DechirpFrameSet& frames, double target_range_m,
                                 bool dc_compensation, const ProcessingOptions& options = {});
TargetPhase extract_target_phase(const radar::DechirpFrameSet& frames, const RangeProfile& profile,
                                 double target_range_m, bool dc_compensation,
                                 const ProcessingOptions& options = {});

// One report per requested range. truths may be empty or match ranges in
// length. A failing target carries an error string; others still run.
std::vector<VitalsReport> contactless_rates(
    const radar::DechirpFrameSet& frames, std::span<const double> target_ranges_m,
    std::span<const std::optional<physio::SubjectVitals>> truths = {},
    const ProcessingOptions& options = {}, std::vector<TargetPhase>* phases = nullptr);

struct SweepRow {
  double duration_s = 0.0;
  bool valid = true;
  std::string note;
  VitalsReport report;
};

struct SweepReport {
  std::string label;
  Modality modality = Modality::contact;
  std::vector<SweepRow> rows;
};

inline const std::vector<double> kDefaultSweepDurations{5, 10, 20, 30, 40, 50, 60};

// Start-anchored truncations; durations beyond the record or under 5 s are
// flagged and skipped.
SweepReport resolution_sweep(std::span<const double> intensity, double sample_rate_hz,
                             std::span<const double> durations_s,
                             const std::optional<physio::SubjectVitals>& truth,
                             const ProcessingOptions& options = {}, std::string label = "contact");

std::vector<SweepReport> resolution_sweep(
    const radar::DechirpFrameSet& frames, std::span<const double> target_ranges_m,
    std::span<const double> durations_s,
    std::span<const std::optional<physio::SubjectVitals>> truths = {},
    const ProcessingOptions& options = {});

}  // namespace vitalchirp::pipelines
