#include "vitalchirp/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/dsp/fft.hpp"
#include "vitalchirp/dsp/phase.hpp"
#include "vitalchirp/error.hpp"

namespace vitalchirp::pipelines {
namespace {

constexpr double kMinDurationS = 5.0;

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

VitalEstimate estimate_band(std::span<const double> detrended, double fs,
                            dsp::BandpassSpec band, const ProcessingOptions& opt, double floor,
                            int& order_used, std::vector<double>* filtered_out,
                            dsp::MagnitudeSpectrum* spectrum_out) {
  band.sample_rate_hz = fs;
  const auto coeffs = dsp::design_bandpass(band);
  order_used = coeffs.prototype_order;
  auto filtered = opt.zero_phase ? dsp::filter_zero_phase(coeffs, detrended, opt.edge_extension)
                                 : dsp::filter_single_pass(coeffs, detrended);
  const std::size_t nfft = detrended.size() * std::max<std::size_t>(1, opt.zero_pad_factor);
  auto spec = dsp::spectrum(filtered, fs, opt.window, nfft);
  const auto peak = dsp::peak_search(spec, band.low_edge_hz, band.high_edge_hz);

  VitalEstimate est;
  if (peak.found && peak.peak_magnitude > floor) {
    est.detected = true;
    est.edge_peak = peak.edge_peak;
    est.frequency_hz = peak.refined_freq_hz;
    est.rate_per_min = 60.0 * peak.refined_freq_hz;
    est.peak_magnitude = peak.peak_magnitude;
    const auto bw = dsp::bandwidth_3db(spec, peak.refined_freq_hz);
    est.width_3db_hz = bw.width_hz;
    est.width_open = bw.open_lower || bw.open_upper;
  }
  if (filtered_out) *filtered_out = std::move(filtered);
  if (spectrum_out) *spectrum_out = std::move(spec);
  return est;
}

void attach_truth(VitalEstimate& est, double truth) {
  est.truth_per_min = truth;
  if (est.detected) est.error_per_min = est.rate_per_min - truth;
}

std::vector<double> durations_or_default(std::span<const double> d) {
  if (d.empty()) return kDefaultSweepDurations;
  return {d.begin(), d.end()};
}

}  // namespace

const char* to_string(Modality m) { return m == Modality::contact ? "contact" : "contactless"; }

VitalsReport vitals_from_series(std::span<const double> series, double fs,
                                const std::optional<physio::SubjectVitals>& truth,
                                const ProcessingOptions& opt, VitalTraces* traces) {
  if (!(fs > 0.0)) throw ValidationError("vitals: sample rate must be > 0");
  const double duration = static_cast<double>(series.size()) / fs;
  if (duration < kMinDurationS - 1e-9) {
    throw ValidationError("vitals: record shorter than 5 s");
  }

  VitalsReport rep;
  rep.duration_s = duration;
  rep.sample_rate_hz = fs;
  if (truth) rep.label = truth->id;

  const double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                      static_cast<double>(series.size());
  std::vector<double> detrended(series.size());
  std::transform(series.begin(), series.end(), detrended.begin(),
                 [mean](double v) { return v - mean; });
  const double floor = opt.detection_floor * max_abs(series);

  VitalTraces local;
  VitalTraces* tr = traces ? traces : nullptr;
  rep.respiration = estimate_band(detrended, fs, opt.respiration, opt, floor,
                                  rep.resp_filter_order, tr ? &tr->respiration : nullptr,
                                  tr ? &tr->respiration_spectrum : nullptr);
  rep.heartbeat = estimate_band(detrended, fs, opt.heartbeat, opt, floor, rep.heart_filter_order,
                                tr ? &tr->heartbeat : nullptr,
                                tr ? &tr->heartbeat_spectrum : nullptr);
  if (tr) tr->input = std::move(detrended);

  if (truth) {
    attach_truth(rep.respiration, truth->respiration_rate_rpm);
    attach_truth(rep.heartbeat, truth->heartbeat_rate_bpm);
  }
  return rep;
}

VitalsReport contact_rates(std::span<const double> intensity, double fs,
                           const std::optional<physio::SubjectVitals>& truth,
                           const ProcessingOptions& opt, VitalTraces* traces) {
  auto rep = vitals_from_series(intensity, fs, truth, opt, traces);
  rep.modality = Modality::contact;
  if (rep.label.empty()) rep.label = "contact";
  return rep;
}

RangeProfile range_profile(const radar::DechirpFrameSet& frames, dsp::Window window) {
  const std::size_t n = frames.fast_count;
  if (n < 2 || frames.slow_count < 1 || frames.samples.size() != n * frames.slow_count) {
    throw ValidationError("range_profile: malformed frame set");
  }
  const auto w = dsp::make_window(window, n);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  dsp::RealFft fft(n);

  RangeProfile p;
  p.magnitudes.assign(fft.bins(), 0.0);
  std::vector<double> buf(n);
  for (std::size_t m = 0; m < frames.slow_count; ++m) {
    const auto row = frames.row(m);
    for (std::size_t i = 0; i < n; ++i) buf[i] = row[i] * w[i];
    const auto bins = fft.forward(buf);
    for (std::size_t k = 0; k < bins.size(); ++k) p.magnitudes[k] += std::abs(bins[k]);
  }
  const double scale = 2.0 / (wsum * static_cast<double>(frames.slow_count));
  for (auto& v : p.magnitudes) v *= scale;

  const double df = frames.fast_rate_hz / static_cast<double>(n);
  p.bin_width_m = kSpeedOfLight * df / (2.0 * frames.chirp.chirp_rate_hz_per_s);
  p.ranges_m.resize(p.magnitudes.size());
  for (std::size_t k = 0; k < p.ranges_m.size(); ++k) {
    p.ranges_m[k] = p.bin_width_m * static_cast<double>(k);
  }
  return p;
}

std::vector<RangePeak> find_range_peaks(const RangeProfile& p) {
  std::vector<RangePeak> peaks;
  const auto& m = p.magnitudes;
  if (m.size() < 3) return peaks;
  std::vector<double> sorted = m;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double median = *mid;
  for (auto& v : sorted) v = std::abs(v - median);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double spread = 1.4826 * *mid;
  const double top = *std::max_element(m.begin(), m.end());
  const double threshold = std::max(median + 8.0 * spread, 0.05 * top);
  // Bin 0 is excluded: no target sits at zero range.
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    if (m[k] > 0.0 && m[k] > threshold && m[k] >= m[k - 1] && m[k] > m[k + 1]) {
      RangePeak pk;
      pk.bin = k;
      pk.range_m = p.ranges_m[k];
      pk.magnitude = m[k];
      pk.refined_range_m = pk.range_m;
      const double a = m[k - 1], b = m[k], c = m[k + 1];
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) {
        pk.refined_range_m += std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) * p.bin_width_m;
      }
      peaks.push_back(pk);
    }
  }
  return peaks;
}

RangePeak select_range_peak(const RangeProfile& p, double target_range_m) {
  const auto peaks = find_range_peaks(p);
  const double pos = target_range_m / p.bin_width_m;
  const RangePeak* best = nullptr;
  for (const auto& pk : peaks) {
    if (std::abs(static_cast<double>(pk.bin) - pos) <= 2.0 + 1e-9 &&
        (!best || pk.magnitude > best->magnitude)) {
      best = &pk;
    }
  }
  if (best) return *best;

  std::ostringstream msg;
  msg << "no range peak within 2 bins of " << target_range_m << " m";
  if (peaks.empty()) {
    msg << "; profile has no peaks";
  } else {
    const auto nearest = std::min_element(peaks.begin(), peaks.end(), [&](auto& a, auto& b) {
      return std::abs(a.range_m - target_range_m) < std::abs(b.range_m - target_range_m);
    });
    msg << "; nearest peak at " << nearest->range_m << " m";
  }
  throw ProcessingError(msg.str());
}

TargetPhase extract_target_phase(const radar::DechirpFrameSet& frames, const RangeProfile& profile,
                                 double target_range_m, bool dc_compensation,
                                 const ProcessingOptions& opt) {
  TargetPhase out;
  out.peak = select_range_peak(profile, target_range_m);
  const std::size_t n = frames.fast_count;
  const auto w = dsp::make_window(opt.range_window, n);

  // Windowed single-bin DFT kernel.
  std::vector<std::complex<double>> kernel(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double arg = -kTwoPi * static_cast<double>(out.peak.bin * i % n) / static_cast<double>(n);
    kernel[i] = w[i] * std::polar(1.0, arg);
  }
  std::vector<std::complex<double>> iq(frames.slow_count);
  for (std::size_t m = 0; m < frames.slow_count; ++m) {
    const auto row = frames.row(m);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += row[i] * kernel[i];
    iq[m] = acc;
  }
  if (dc_compensation) {
    const auto mean = std::accumulate(iq.begin(), iq.end(), std::complex<double>(0.0)) /
                      static_cast<double>(iq.size());
    for (auto& v : iq) v -= mean;
  }
  std::vector<double> wrapped(iq.size());
  std::transform(iq.begin(), iq.end(), wrapped.begin(),
                 [](std::complex<double> v) { return std::atan2(v.imag(), v.real()); });
  out.phase_rad = dsp::unwrap_phase(wrapped);

  if (opt.phase_reference == PhaseReference::sweep_start) {
    const double t_ref = 0.5 * static_cast<double>(n - 1) / frames.fast_rate_hz;
    const double f0 = frames.chirp.start_freq_hz;
    const double scale = f0 / (f0 + frames.chirp.chirp_rate_hz_per_s * t_ref);
    for (auto& v : out.phase_rad) v *= scale;
  }
  return out;
}

TargetPhase extract_target_phase(const radar::DechirpFrameSet& frames, double target_range_m,
                                 bool dc_compensation, const ProcessingOptions& opt) {
  return extract_target_phase(frames, range_profile(frames, opt.range_window), target_range_m,
                              dc_compensation, opt);
}

std::vector<VitalsReport> contactless_rates(
    const radar::DechirpFrameSet& frames, std::span<const double> ranges,
    std::span<const std::optional<physio::SubjectVitals>> truths, const ProcessingOptions& opt,
    std::vector<TargetPhase>* phases) {
  if (ranges.empty()) throw ValidationError("contactless_rates: no target ranges given");
  if (!truths.empty() && truths.size() != ranges.size()) {
    throw ValidationError("contactless_rates: truth list does not match target list");
  }
  const auto profile = range_profile(frames, opt.range_window);
  std::vector<VitalsReport> reports;
  if (phases) phases->clear();
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const std::optional<physio::SubjectVitals> truth =
        truths.empty() ? std::nullopt : truths[i];
    VitalsReport rep;
    try {
      auto phase = extract_target_phase(frames, profile, ranges[i], opt.dc_compensation, opt);
      rep = vitals_from_series(phase.phase_rad, frames.slow_rate_hz, truth, opt);
      rep.range_estimate_m = phase.peak.refined_range_m;
      if (phases) phases->push_back(std::move(phase));
    } catch (const std::exception& e) {
      rep.error = e.what();
      rep.duration_s = static_cast<double>(frames.slow_count) / frames.slow_rate_hz;
      rep.sample_rate_hz = frames.slow_rate_hz;
      if (phases) phases->push_back({});
    }
    rep.modality = Modality::contactless;
    rep.nominal_range_m = ranges[i];
    if (truth) rep.label = truth->id;
    if (rep.label.empty()) {
      std::ostringstream s;
      s << "target@" << ranges[i] << "m";
      rep.label = s.str();
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

SweepReport resolution_sweep(std::span<const double> intensity, double fs,
                             std::span<const double> durations,
                             const std::optional<physio::SubjectVitals>& truth,
                             const ProcessingOptions& opt, std::string label) {
  SweepReport out;
  out.label = truth ? truth->id : std::move(label);
  out.modality = Modality::contact;
  const double available = static_cast<double>(intensity.size()) / fs;
  for (double d : durations_or_default(durations)) {
    SweepRow row;
    row.duration_s = d;
    if (d < kMinDurationS) {
      row.valid = false;
      row.note = "duration shorter than 5 s";
    } else if (d > available + 1e-9) {
      row.valid = false;
      row.note = "duration exceeds the record";
    } else {
      const auto n = static_cast<std::size_t>(std::llround(d * fs));
      row.report = contact_rates(intensity.first(n), fs, truth, opt);
      row.report.label = out.label;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<SweepReport> resolution_sweep(
    const radar::DechirpFrameSet& frames, std::span<const double> ranges,
    std::span<const double> durations,
    std::span<const std::optional<physio::SubjectVitals>> truths, const ProcessingOptions& opt) {
  const double available = static_cast<double>(frames.slow_count) / frames.slow_rate_hz;
  std::vector<SweepReport> out(ranges.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) out[i].modality = Modality::contactless;

  for (double d : durations_or_default(durations)) {
    std::vector<VitalsReport> reports;
    std::string note;
    if (d < kMinDurationS) {
      note = "duration shorter than 5 s";
    } else if (d > available + 1e-9) {
      note = "duration exceeds the record";
    } else {
      reports = contactless_rates(radar::truncate(frames, d), ranges, truths, opt);
    }
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      SweepRow row;
      row.duration_s = d;
      if (reports.empty()) {
        row.valid = false;
        row.note = note;
      } else {
        row.report = reports[i];
        row.valid = !row.report.error.has_value();
        if (row.report.error) row.note = *row.report.error;
        out[i].label = row.report.label;
      }
      out[i].rows.push_back(std::move(row));
    }
  }
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (out[i].label.empty()) {
      out[i].label = (!truths.empty() && truths[i]) ? truths[i]->id : "target";
    }
  }
  return out;
}

}  // namespace vitalchirp::pipelines
