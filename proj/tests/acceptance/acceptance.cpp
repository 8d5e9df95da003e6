// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "vitalchirp/dsp/filter.hpp"
#include "vitalchirp/dsp/phase.hpp"
#include "vitalchirp/io/bundle.hpp"
#include "vitalchirp/io/json_codec.hpp"
#include "vitalchirp/pipelines.hpp"
#include "vitalchirp/scenario.hpp"

namespace {

using namespace vitalchirp;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [fail: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Check&)>;

photonic::ChirpParams reference_chirp() { return photonic::derive_chirp({6.6e9, 1e9, 100e-6, 60e-6}); }

scenario::Scenario three_subject(double duration, bool noise) {
  auto s = scenario::presets::three_subject();
  s.duration_s = duration;
  s.acquisition->duration_s = duration;
  if (!noise) {
    s.acquisition->noise_rms = 0.0;
    for (auto& ch : s.channels) ch.contact_noise_rms = 0.0;
    for (auto& [nm, subj] : s.contact_subjects) subj.motion_noise_rms_mm = 0.0;
    for (auto& [nm, targets] : s.radar_scenes) {
      for (auto& t : targets) t.subject.motion_noise_rms_mm = 0.0;
    }
  }
  return s;
}

std::vector<pipelines::VitalsReport> reports_of(const scenario::Scenario& s,
                                                pipelines::Modality m) {
  std::vector<pipelines::VitalsReport> out;
  for (const auto& c : scenario::process_bundle(scenario::run_scenario(s), {})) {
    for (const auto& r : c.reports) {
      if (r.modality == m) out.push_back(r);
    }
  }
  return out;
}

void check_errors(Check& c, const std::vector<pipelines::VitalsReport>& reports, double resp_tol,
                  double heart_tol, const char* tag) {
  c.require(!reports.empty(), std::string(tag) + " no reports");
  for (const auto& r : reports) {
    if (r.error) {
      c.require(false, r.label + " " + *r.error);
      continue;
    }
    const double er = std::abs(r.respiration.error_per_min.value_or(1e9));
    const double eh = std::abs(r.heartbeat.error_per_min.value_or(1e9));
    char buf[160];
    std::snprintf(buf, sizeof buf, " %s %s: %.2f rpm / %.2f bpm", tag, r.label.c_str(), er, eh);
    c.detail << buf;
    c.require(er <= resp_tol && eh <= heart_tol, std::string(tag) + " " + r.label);
  }
}

void ac1(Check& c) {
  const auto t0 = Clock::now();
  const auto ch = reference_chirp();
  const double dt = seconds_since(t0);
  c.require(ch.start_freq_hz == 24.4e9, "start");
  c.require(ch.center_freq_hz() == 26.4e9, "center");
  c.require(ch.sweep_bandwidth_hz == 4e9, "sweep");
  c.require(std::abs(ch.carrier_wavelength_m * 1e3 - 12.29) <= 0.01, "wavelength");
  c.require(dt < 1e-3, "time");
  c.detail << " lambda_c " << ch.carrier_wavelength_m * 1e3 << " mm in " << dt * 1e6 << " us";
}

void ac2(Check& c) {
  const auto t0 = Clock::now();
  const auto bundle = scenario::run_scenario(three_subject(60.0, true));
  const double dt = seconds_since(t0);
  const auto profile = pipelines::range_profile(*bundle.channels[0].frames);
  for (double r : {1.00, 1.65}) {
    try {
      const auto p = pipelines::select_range_peak(profile, r);
      c.detail << " " << r << " m -> " << p.range_m << " m";
      c.require(std::abs(p.range_m - r) <= 0.0375, "range " + std::to_string(r));
    } catch (const std::exception& e) {
      c.require(false, e.what());
    }
  }
  c.require(dt < 10.0, "runtime");
  c.detail << "; 60 s scene " << dt << " s";
}

void ac3(Check& c) {
  check_errors(c, reports_of(three_subject(60.0, true), pipelines::Modality::contactless), 0.6, 1.2, "default");
  check_errors(c, reports_of(three_subject(60.0, false), pipelines::Modality::contactless), 0.2, 0.2, "noise-off");
}

void ac4(Check& c) {
  check_errors(c, reports_of(three_subject(60.0, true), pipelines::Modality::contact), 1.6, 0.5, "default");
  check_errors(c, reports_of(three_subject(60.0, false), pipelines::Modality::contact), 0.2, 0.2, "noise-off");
}

void ac5(Check& c) {
  const auto chirp = reference_chirp();
  radar::AcquisitionParams acq;
  acq.duration_s = 30.0;
  acq.noise_rms = 0.0;
  radar::RadarTarget target{physio::presets::volunteer_c(), 1.0, 1.0};
  target.subject.motion_noise_rms_mm = 0.0;
  const auto frames = radar::synth_dechirp_frames(std::span(&target, 1), chirp, acq, 7);
  const auto p = pipelines::extract_target_phase(frames, 1.0, false);
  const auto x = physio::synth_motion(target.subject, physio::make_time_grid(30.0, 50.0));
  const double scale = 4 * oracle::kPi / (chirp.carrier_wavelength_m * 1e3);
  double mp = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mp += p.phase_rad[i] / scale;
    mx += x[i];
  }
  mp /= x.size();
  mx /= x.size();
  double se = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    se += std::pow((p.phase_rad[i] / scale - mp) - (x[i] - mx), 2);
    peak = std::max(peak, std::abs(x[i] - mx));
  }
  const double rel = std::sqrt(se / x.size()) / peak;
  c.require(rel < 0.02, "rms");
  c.detail << " rms " << rel * 100 << "% of peak";

  radar::MotionTrack step;
  step.label = "step";
  step.displacement_mm.assign(200, 0.0);
  std::fill(step.displacement_mm.begin() + 100, step.displacement_mm.end(), 1.0);
  acq.duration_s = 4.0;
  const auto sf = radar::synth_dechirp_frames(std::span(&step, 1), chirp, acq, 7);
  const auto sp = pipelines::extract_target_phase(sf, 1.0, false);
  const double jump = std::abs(sp.phase_rad[150] - sp.phase_rad[50]);
  c.require(std::abs(jump - 1.023) <= 0.001, "step");
  c.detail << "; 1 mm step " << jump << " rad";
}

void ac6(Check& c) {
  const auto t0 = Clock::now();
  const auto bundle = scenario::run_scenario(three_subject(60.0, true));
  const std::vector<double> durations{5, 10, 20, 30, 40, 50, 60};
  const auto sweeps = scenario::sweep_bundle(bundle, durations, {});
  const double dt = seconds_since(t0);
  double worst_ratio = 1.0;
  for (const auto& ch : sweeps) {
    for (const auto& sw : ch.sweeps) {
      c.require(sw.rows.size() == durations.size(), sw.label + " rows");
      for (int band = 0; band < 2; ++band) {
        const auto est = [&](const pipelines::SweepRow& r) -> const pipelines::VitalEstimate& {
          return band == 0 ? r.report.respiration : r.report.heartbeat;
        };
        double prev = 1e9;
        for (const auto& row : sw.rows) {
          c.require(row.valid && !row.report.error, sw.label + " row invalid");
          const double w = est(row).width_3db_hz;
          const double expect = 0.886 / row.duration_s;
          worst_ratio = std::abs(w / expect - 1.0) > std::abs(worst_ratio - 1.0) ? w / expect : worst_ratio;
          c.require(std::abs(w - expect) <= 0.2 * expect, sw.label + " width at " + std::to_string(row.duration_s));
          c.require(w <= prev * 1.05, sw.label + " widths increase");
          prev = w;
        }
        const double bin_per_min = 60.0 / sw.rows.front().duration_s;
        const double dev = std::abs(est(sw.rows.front()).rate_per_min - est(sw.rows.back()).rate_per_min);
        c.require(dev <= bin_per_min, sw.label + " 5 s rate");
      }
    }
  }
  c.require(dt < 30.0, "runtime");
  c.detail << " worst width/0.886T " << worst_ratio << "; " << dt << " s";
}

void ac7(Check& c) {
  for (const auto& spec : {dsp::BandpassSpec{0.13, 0.5, 50.0}, dsp::BandpassSpec{0.8, 1.9, 50.0}}) {
    const auto coeffs = dsp::design_bandpass(spec);
    const auto k = dsp::check_conformance(coeffs, 8192);
    c.require(k.meets_spec && k.stable, "band " + std::to_string(spec.low_edge_hz));
    c.detail << " [" << spec.low_edge_hz << "-" << spec.high_edge_hz << " Hz order "
             << coeffs.prototype_order << ": ripple " << -k.passband_min_db << " dB, stop "
             << -k.stopband_max_db << " dB, |p|max " << coeffs.max_pole_radius() << "]";
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void ac8(Check& c) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> step(-3.0, 3.0);
  bool unwrap_ok = true;
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> x(200);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = x[i - 1] + step(rng);
    const auto u = dsp::unwrap_phase(x);
    const auto uu = dsp::unwrap_phase(u);
    for (std::size_t i = 0; i < x.size(); ++i) {
      unwrap_ok = unwrap_ok && std::abs(uu[i] - u[i]) < 1e-12 &&
                  std::abs(std::remainder(u[i] - x[i], 2 * oracle::kPi)) < 1e-9;
    }
  }
  c.require(unwrap_ok, "unwrap");

  const auto base = scenario::run_scenario(three_subject(20.0, true));
  auto scaled = base;
  for (auto& v : scaled.channels[0].contact->intensity_mw) v *= 37.5;
  for (auto& v : scaled.channels[0].frames->samples) v *= 37.5;
  const auto ra = scenario::process_bundle(base, {});
  const auto rb = scenario::process_bundle(scaled, {});
  bool scale_ok = true;
  for (std::size_t i = 0; i < ra[0].reports.size(); ++i) {
    scale_ok = scale_ok &&
               std::abs(ra[0].reports[i].respiration.frequency_hz - rb[0].reports[i].respiration.frequency_hz) < 1e-9 &&
               std::abs(ra[0].reports[i].heartbeat.frequency_hz - rb[0].reports[i].heartbeat.frequency_hz) < 1e-9;
  }
  c.require(scale_ok, "scale invariance");

  const auto four = scenario::run_scenario(scenario::presets::multi_channel(4, 5.0));
  auto s5 = scenario::presets::multi_channel(5, 5.0);
  const auto five = scenario::run_scenario(s5);
  bool iso_ok = true;
  for (const auto& ch : four.channels) {
    const auto it = std::find_if(five.channels.begin(), five.channels.end(), [&](const auto& o) {
      return o.channel.wavelength_nm == ch.channel.wavelength_nm;
    });
    iso_ok = iso_ok && it != five.channels.end() &&
             it->contact->intensity_mw == ch.contact->intensity_mw &&
             it->frames->samples == ch.frames->samples;
  }
  c.require(iso_ok, "channel isolation");

  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  testing_support::TempDir a, b;
  const auto s = three_subject(5.0, true);
  const auto files = io::write_bundle(a.path(), scenario::run_scenario(s), io::Json::object());
  io::write_bundle(b.path(), scenario::run_scenario(s), io::Json::object());
  bool bytes_ok = true;
  for (const auto& f : files) bytes_ok = bytes_ok && slurp(a / f) == slurp(b / f);
  ::unsetenv("SOURCE_DATE_EPOCH");
  c.require(bytes_ok, "byte-identical bundles");

  radar::AcquisitionParams acq;
  acq.duration_s = 2.0;
  acq.noise_rms = 0.0;
  std::vector<radar::RadarTarget> targets{{physio::presets::volunteer_b(), 1.0, 1.0},
                                          {physio::presets::volunteer_c(), 1.65, 0.7}};
  const auto chirp = reference_chirp();
  const auto joint = radar::synth_dechirp_frames(targets, chirp, acq, 5);
  const auto f1 = radar::synth_dechirp_frames(std::span(&targets[0], 1), chirp, acq, 5);
  const auto f2 = radar::synth_dechirp_frames(std::span(&targets[1], 1), chirp, acq, 5);
  double worst = 0.0;
  for (std::size_t i = 0; i < joint.samples.size(); ++i) {
    worst = std::max(worst, std::abs(joint.samples[i] - f1.samples[i] - f2.samples[i]));
  }
  c.require(worst < 1e-9, "superposition");
  c.detail << " superposition residual " << worst;
}

void ac9(Check& c) {
  const double duration = 20.0;
  auto run = [&](std::size_t n, std::size_t& valid) {
    const auto t0 = Clock::now();
    const auto reports = scenario::process_bundle(
        scenario::run_scenario(scenario::presets::multi_channel(n, duration)), {});
    const double dt = seconds_since(t0);
    valid = 0;
    for (const auto& ch : reports) {
      const bool ok = std::all_of(ch.reports.begin(), ch.reports.end(), [](const auto& r) {
        return !r.error && r.respiration.detected && r.heartbeat.detected;
      });
      valid += ok && !ch.reports.empty();
    }
    return dt;
  };
  std::size_t v4 = 0, v16 = 0;
  const double t4 = run(4, v4);
  const double t16 = run(16, v16);
  c.require(v16 == 16, "valid reports");
  const double growth = t16 / t4;
  c.require(growth < 4.0 * 1.5, "runtime growth");
  c.detail << " 16 valid channel reports: " << v16 << "; t16/t4 = " << growth << " (" << t4 << " s, "
           << t16 << " s)";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Criterion>> criteria{
      {"AC1 chirp derivation", ac1},     {"AC2 range accuracy", ac2},
      {"AC3 contactless rates", ac3},    {"AC4 contact rates", ac4},
      {"AC5 phase inversion", ac5},      {"AC6 resolution sweep", ac6},
      {"AC7 filter conformance", ac7},   {"AC8 property suites", ac8},
      {"AC9 multi-channel scaling", ac9}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s:%s\n", c.ok ? "PASS" : "FAIL", name, c.detail.str().c_str());
    std::fflush(stdout);
    failures += !c.ok;
  }
  return failures == 0 ? 0 : 1;
}
