#include "vitalchirp/cli/commands.hpp"

#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "vitalchirp/dsp/filter.hpp"
#include "vitalchirp/error.hpp"
#include "vitalchirp/io/bundle.hpp"
#include "vitalchirp/io/csv.hpp"
#include "vitalchirp/io/json_codec.hpp"
#include "vitalchirp/scenario.hpp"

namespace vitalchirp::cli {
namespace fs = std::filesystem;
using io::Json;

namespace {

struct SimulateArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string format = "csv";
};

struct ProcessArgs {
  std::string bundle;
  std::string out;
  double duration = 0.0;
  bool dc_comp = false;
  bool traces = false;
  std::string format = "csv";
};

struct SweepArgs {
  std::string bundle;
  std::string out;
  std::vector<double> durations;
  bool dc_comp = false;
  std::string format = "csv";
};

struct FilterArgs {
  std::string band = "respiration";
  double fs = 50.0;
  double ripple = 1.0;
  double atten = 40.0;
  int order = 4;
  double transition = 0.3;
  std::size_t points = 8192;
  std::string out;
  std::string format = "csv";
};

fs::path out_dir(const std::string& given, const std::string& fallback) {
  return given.empty() ? default_output_root() / fallback : fs::path(given);
}

std::string opt_display(const std::optional<double>& v) { return v ? io::display(*v) : ""; }

std::vector<std::vector<std::string>> report_rows(const std::vector<scenario::ChannelReport>& rs) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : rs) {
    for (const auto& r : c.reports) {
      auto add = [&](const char* vital, const pipelines::VitalEstimate& e) {
        rows.push_back({io::format_number(c.wavelength_nm), r.label,
                        pipelines::to_string(r.modality), vital,
                        e.detected ? io::display(e.rate_per_min) : "not detected",
                        opt_display(e.truth_per_min), opt_display(e.error_per_min),
                        e.detected ? io::format_number(e.width_3db_hz) : "",
                        r.range_estimate_m ? io::format_number(*r.range_estimate_m) : "",
                        r.error.value_or("")});
      };
      add("respiration_rpm", r.respiration);
      add("heartbeat_bpm", r.heartbeat);
    }
  }
  return rows;
}

const std::vector<std::string> kReportHeader{"wavelength_nm", "label", "modality", "vital",
                                             "monitored", "actual", "error", "width_3db_hz",
                                             "range_estimate_m", "note"};

void write_traces(const fs::path& dir, const std::vector<scenario::ChannelTraces>& traces) {
  for (const auto& c : traces) {
    const auto sub = dir / "traces" / io::channel_dir_name(c.wavelength_nm);
    fs::create_directories(sub);
    if (c.range_profile) {
      io::write_csv(sub / "range_profile.csv",
                    {{"range_m", c.range_profile->ranges_m},
                     {"magnitude", c.range_profile->magnitudes}});
    }
    for (const auto& s : c.subjects) {
      const auto& v = s.vitals;
      if (!s.phase_rad.empty()) io::write_csv(sub / (s.label + "_phase.csv"), {{"phase_rad", s.phase_rad}});
      io::write_csv(sub / (s.label + "_waveforms.csv"),
                    {{"input", v.input}, {"respiration", v.respiration}, {"heartbeat", v.heartbeat}});
      io::write_csv(sub / (s.label + "_respiration_spectrum.csv"),
                    {{"freq_hz", v.respiration_spectrum.frequencies_hz},
                     {"magnitude", v.respiration_spectrum.magnitudes}});
      io::write_csv(sub / (s.label + "_heartbeat_spectrum.csv"),
                    {{"freq_hz", v.heartbeat_spectrum.frequencies_hz},
                     {"magnitude", v.heartbeat_spectrum.magnitudes}});
    }
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  auto s = a.config.empty() ? scenario::presets::by_name(a.preset) : io::load_scenario(a.config);
  if (a.seed) s.seed = *a.seed;
  if (a.duration) s.duration_s = *a.duration;

  const auto report = scenario::validate_scenario(s);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (!report.ok()) {
    for (const auto& v : report.violations) err << v << '\n';
    return kValidation;
  }
  const auto dir = out_dir(a.out, s.name);
  const auto bundle = scenario::run_scenario(s);
  const Json params = {{"config", a.config},
                       {"preset", a.preset},
                       {"seed", s.seed},
                       {"duration_s", s.duration_s}};
  const auto files = io::write_bundle(dir, bundle, params);

  if (a.format == "json") {
    out << Json{{"bundle", dir.string()}, {"files", files}, {"warnings", report.warnings}}.dump(2)
        << '\n';
  } else {
    out << "bundle," << dir.string() << '\n';
    for (const auto& f : files) out << "file," << f << '\n';
  }
  return kOk;
}

pipelines::ProcessingOptions options_with(bool dc_comp) {
  pipelines::ProcessingOptions opt;
  opt.dc_compensation = dc_comp;
  return opt;
}

int cmd_process(const ProcessArgs& a, std::ostream& out) {
  const auto bundle = io::read_bundle(a.bundle);
  const auto opt = options_with(a.dc_comp);
  std::vector<scenario::ChannelTraces> traces;
  const auto reports =
      scenario::process_bundle(bundle, opt, a.duration, a.traces ? &traces : nullptr);

  const auto dir = out_dir(a.out, fs::path(a.bundle).filename().string() + "-report");
  fs::create_directories(dir);
  Json channels = Json::array();
  bool failed = false;
  for (const auto& c : reports) {
    Json rs = Json::array();
    for (const auto& r : c.reports) {
      rs.push_back(io::to_json(r));
      failed = failed || r.error.has_value();
    }
    channels.push_back({{"wavelength_nm", c.wavelength_nm}, {"reports", rs}});
  }
  const Json doc = {{"processing", io::to_json(opt)},
                    {"assumed_defaults", io::assumed_defaults(opt)},
                    {"requested_duration_s", a.duration > 0.0 ? Json(a.duration) : Json(nullptr)},
                    {"truncation", "start-anchored"},
                    {"channels", channels}};
  io::write_text(dir / "report.json", doc.dump(2) + "\n");
  const auto rows = report_rows(reports);
  io::write_table(dir / "report.csv", kReportHeader, rows);
  std::vector<std::string> files{"report.json", "report.csv"};
  if (a.traces) {
    write_traces(dir, traces);
    files.push_back("traces/");
  }
  files.push_back("manifest.json");
  const Json params = {{"bundle", a.bundle},
                       {"duration_s", a.duration},
                       {"dc_compensation", a.dc_comp},
                       {"traces", a.traces}};
  io::write_text(dir / "manifest.json",
                 io::make_manifest("process", io::scenario_hash(bundle.scenario),
                                   bundle.scenario.seed, params, files)
                         .dump(2) +
                     "\n");

  if (a.format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << io::format_table(kReportHeader, rows);
  }
  return failed ? kProcessing : kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto bundle = io::read_bundle(a.bundle);
  const auto opt = options_with(a.dc_comp);
  const auto sweeps = scenario::sweep_bundle(bundle, a.durations, opt);

  const auto dir = out_dir(a.out, fs::path(a.bundle).filename().string() + "-sweep");
  fs::create_directories(dir);
  const std::vector<std::string> header{"wavelength_nm", "label",          "modality",
                                        "duration_s",    "valid",          "resp_rate_rpm",
                                        "heart_rate_bpm", "resp_3db_hz",   "heart_3db_hz",
                                        "note"};
  std::vector<std::vector<std::string>> rows;
  Json channels = Json::array();
  for (const auto& c : sweeps) {
    Json js = Json::array();
    for (const auto& s : c.sweeps) {
      js.push_back(io::to_json(s));
      for (const auto& r : s.rows) {
        const auto& rr = r.report;
        auto rate = [&](const pipelines::VitalEstimate& e) {
          return r.valid && e.detected ? io::format_number(e.rate_per_min) : "";
        };
        auto width = [&](const pipelines::VitalEstimate& e) {
          return r.valid && e.detected ? io::format_number(e.width_3db_hz) : "";
        };
        rows.push_back({io::format_number(c.wavelength_nm), s.label, pipelines::to_string(s.modality),
                        io::format_number(r.duration_s), r.valid ? "1" : "0", rate(rr.respiration),
                        rate(rr.heartbeat), width(rr.respiration), width(rr.heartbeat), r.note});
      }
    }
    channels.push_back({{"wavelength_nm", c.wavelength_nm}, {"sweeps", js}});
  }
  const Json doc = {{"processing", io::to_json(opt)},
                    {"assumed_defaults", io::assumed_defaults(opt)},
                    {"truncation", "start-anchored"},
                    {"channels", channels}};
  io::write_text(dir / "sweep.json", doc.dump(2) + "\n");
  io::write_table(dir / "sweep.csv", header, rows);
  const Json params = {{"bundle", a.bundle}, {"durations_s", a.durations}, {"dc_compensation", a.dc_comp}};
  io::write_text(dir / "manifest.json",
                 io::make_manifest("sweep", io::scenario_hash(bundle.scenario), bundle.scenario.seed,
                                   params, {"sweep.json", "sweep.csv", "manifest.json"})
                         .dump(2) +
                     "\n");
  if (a.format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << io::format_table(header, rows);
  }
  return kOk;
}

dsp::BandpassSpec parse_band(const FilterArgs& a) {
  dsp::BandpassSpec s;
  if (a.band == "respiration") {
    s.low_edge_hz = physio::kRespBandLowHz;
    s.high_edge_hz = physio::kRespBandHighHz;
  } else if (a.band == "heartbeat") {
    s.low_edge_hz = physio::kHeartBandLowHz;
    s.high_edge_hz = physio::kHeartBandHighHz;
  } else {
    const auto colon = a.band.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("--band must be respiration, heartbeat or LOW:HIGH in Hz");
    }
    try {
      s.low_edge_hz = std::stod(a.band.substr(0, colon));
      s.high_edge_hz = std::stod(a.band.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError("--band edges are not numbers: '" + a.band + "'");
    }
  }
  s.sample_rate_hz = a.fs;
  s.passband_ripple_db = a.ripple;
  s.stopband_atten_db = a.atten;
  s.order = a.order;
  s.transition_ratio = a.transition;
  return s;
}

int cmd_filter_design(const FilterArgs& a, std::ostream& out, std::ostream& err) {
  const auto spec = parse_band(a);
  const auto coeffs = dsp::design_bandpass(spec);
  const auto conf = dsp::check_conformance(coeffs, a.points);

  std::string name = a.band;
  for (auto& ch : name) {
    if (ch == ':') ch = '-';
  }
  const auto dir = out_dir(a.out, "filter-" + name);
  fs::create_directories(dir);

  std::vector<double> f(a.points), mag(a.points);
  const double nyq = 0.5 * spec.sample_rate_hz;
  for (std::size_t i = 0; i < a.points; ++i) {
    f[i] = nyq * static_cast<double>(i) / static_cast<double>(a.points - 1);
    mag[i] = coeffs.magnitude_db(f[i]);
  }
  io::write_csv(dir / "response.csv", {{"freq_hz", f}, {"magnitude_db", mag}});

  const std::vector<std::string> header{"section", "b0", "b1", "b2", "a0", "a1", "a2"};
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < coeffs.sections.size(); ++i) {
    const auto& q = coeffs.sections[i];
    const double g = i == 0 ? coeffs.gain : 1.0;
    rows.push_back({std::to_string(i), io::format_number(g * q.b0), io::format_number(g * q.b1),
                    io::format_number(g * q.b2), "1", io::format_number(q.a1),
                    io::format_number(q.a2)});
  }
  io::write_table(dir / "sos.csv", header, rows);
  const Json doc = {{"filter", io::to_json(coeffs)}, {"conformance", io::to_json(conf)},
                    {"grid_points", a.points}};
  io::write_text(dir / "filter.json", doc.dump(2) + "\n");
  const Json params = {{"band", a.band}, {"spec", io::to_json(spec)}, {"grid_points", a.points}};
  io::write_text(dir / "manifest.json",
                 io::make_manifest("filter-design", io::content_hash(params.dump()), 0, params,
                                   {"response.csv", "sos.csv", "filter.json", "manifest.json"})
                         .dump(2) +
                     "\n");

  if (a.format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << "# first section carries the overall gain\n" << io::format_table(header, rows);
  }
  if (!conf.meets_spec) {
    err << "design does not meet the spec: passband " << conf.passband_min_db << ".."
        << conf.passband_max_db << " dB, stopband max " << conf.stopband_max_db << " dB\n";
    return kProcessing;
  }
  return kOk;
}

}  // namespace

fs::path default_output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return (env && *env) ? fs::path(env) : fs::path("vitalchirp-out");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vitalchirp: contact and contactless vital-sign simulator and processor"};
  app.set_version_flag("--version", VITALCHIRP_VERSION);
  app.require_subcommand(1);
  const std::vector<std::string> formats{"csv", "json"};

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Synthesize a dataset bundle from a scenario");
  auto* cfg = s->add_option("--config", sim.config, "Scenario JSON file")->check(CLI::ExistingFile);
  auto* pre = s->add_option("--preset", sim.preset, "Built-in scenario: single-link, three-subject or dual-fbg");
  cfg->excludes(pre);
  s->add_option("--out", sim.out, "Output bundle directory");
  s->add_option("--seed", sim.seed, "Override the scenario seed");
  s->add_option("--duration", sim.duration, "Override the record duration in seconds");
  s->add_option("--format", sim.format, "Summary format")->check(CLI::IsMember(formats));

  ProcessArgs proc;
  auto* p = app.add_subcommand("process", "Extract vital-sign rates from a bundle");
  p->add_option("bundle", proc.bundle, "Bundle directory")->required();
  p->add_option("--out", proc.out, "Report directory");
  p->add_option("--duration", proc.duration, "Process only the first N seconds");
  p->add_flag("--dc-comp", proc.dc_comp, "Subtract the complex mean before demodulation");
  p->add_flag("--traces", proc.traces, "Write intermediate waveforms and spectra as CSV");
  p->add_option("--format", proc.format, "Summary format")->check(CLI::IsMember(formats));

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Rates and 3-dB widths over record durations");
  w->add_option("bundle", sw.bundle, "Bundle directory")->required();
  w->add_option("--out", sw.out, "Sweep output directory");
  w->add_option("--durations", sw.durations, "Comma-separated durations in seconds")
      ->delimiter(',');
  w->add_flag("--dc-comp", sw.dc_comp, "Subtract the complex mean before demodulation");
  w->add_option("--format", sw.format, "Summary format")->check(CLI::IsMember(formats));

  FilterArgs fa;
  auto* f = app.add_subcommand("filter-design", "Design an elliptic bandpass filter");
  f->add_option("--band", fa.band, "respiration, heartbeat or LOW:HIGH in Hz");
  f->add_option("--fs", fa.fs, "Sample rate in Sa/s");
  f->add_option("--ripple", fa.ripple, "Passband ripple in dB");
  f->add_option("--atten", fa.atten, "Stopband attenuation in dB");
  f->add_option("--order", fa.order, "Minimum prototype order");
  f->add_option("--transition", fa.transition, "Transition width as a fraction of the edge");
  f->add_option("--points", fa.points, "Response grid points")->check(CLI::Range(2, 1 << 22));
  f->add_option("--out", fa.out, "Output directory");
  f->add_option("--format", fa.format, "Summary format")->check(CLI::IsMember(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*s) {
      if (sim.config.empty() && sim.preset.empty()) {
        throw ValidationError("simulate needs --config or --preset");
      }
      return cmd_simulate(sim, out, err);
    }
    if (*p) return cmd_process(proc, out);
    if (*w) return cmd_sweep(sw, out);
    if (*f) return cmd_filter_design(fa, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DesignError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kProcessing;
  }
  return kValidation;
}

}  // namespace vitalchirp::cli
