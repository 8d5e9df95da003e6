#include "vitalchirp/io/json_codec.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "vitalchirp/error.hpp"

namespace vitalchirp::io {
namespace {

// Checked field access for one JSON object.
class Fields {
 public:
  Fields(const Json& j, std::string what, std::initializer_list<const char*> allowed)
      : j_(j), what_(std::move(what)) {
    if (!j.is_object()) throw ValidationError(what_ + ": expected an object");
    for (const auto& [key, _] : j.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ValidationError(what_ + ": unknown key '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <typename T>
  void read(const char* key, T& out) const {
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(what_ + ": key '" + key + "' has the wrong type");
    }
  }

  const Json& at(const char* key) const { return j_.at(key); }
  const std::string& what() const { return what_; }

 private:
  const Json& j_;
  std::string what_;
};

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json estimate_json(const pipelines::VitalEstimate& e, const char* unit) {
  Json j;
  j["unit"] = unit;
  j["detected"] = e.detected;
  j["edge_peak"] = e.edge_peak;
  if (e.detected) {
    j["monitored"] = e.rate_per_min;
    j["monitored_display"] = display(e.rate_per_min);
    j["frequency_hz"] = e.frequency_hz;
    j["peak_magnitude"] = e.peak_magnitude;
    j["width_3db_hz"] = e.width_3db_hz;
    j["width_open"] = e.width_open;
  }
  if (e.truth_per_min) {
    j["actual"] = *e.truth_per_min;
    j["actual_display"] = display(*e.truth_per_min);
  }
  if (e.error_per_min) {
    j["error"] = *e.error_per_min;
    j["error_display"] = display(*e.error_per_min);
  }
  return j;
}

const char* window_name(dsp::Window w) { return w == dsp::Window::hann ? "hann" : "rectangular"; }

Json band_json(const dsp::BandpassSpec& s) {
  return {{"low_edge_hz", s.low_edge_hz},
          {"high_edge_hz", s.high_edge_hz},
          {"passband_ripple_db", s.passband_ripple_db},
          {"stopband_atten_db", s.stopband_atten_db},
          {"transition_ratio", s.transition_ratio}};
}

}  // namespace

std::string display(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  std::string s = buf;
  if (s == "-0.0") s = "0.0";
  return s;
}

Json to_json(const physio::SubjectVitals& s) {
  Json h = Json::array();
  for (const auto& x : s.resp_harmonics) {
    h.push_back({{"order", x.order}, {"relative_amplitude", x.relative_amplitude}});
  }
  return {{"id", s.id},
          {"respiration_rate_rpm", s.respiration_rate_rpm},
          {"heartbeat_rate_bpm", s.heartbeat_rate_bpm},
          {"resp_amplitude_mm", s.resp_amplitude_mm},
          {"heart_amplitude_mm", s.heart_amplitude_mm},
          {"resp_harmonics", h},
          {"resp_phase_rad", s.resp_phase_rad},
          {"heart_phase_rad", s.heart_phase_rad},
          {"motion_noise_rms_mm", s.motion_noise_rms_mm},
          {"rng_seed", s.rng_seed}};
}

physio::SubjectVitals subject_from_json(const Json& j) {
  if (j.is_string()) return physio::presets::by_name(j.get<std::string>());
  Fields f(j, "subject",
           {"preset", "id", "respiration_rate_rpm", "heartbeat_rate_bpm", "resp_amplitude_mm",
            "heart_amplitude_mm", "resp_harmonics", "resp_phase_rad", "heart_phase_rad",
            "motion_noise_rms_mm", "rng_seed"});
  physio::SubjectVitals s;
  if (f.has("preset")) {
    std::string name;
    f.read("preset", name);
    s = physio::presets::by_name(name);
  }
  f.read("id", s.id);
  f.read("respiration_rate_rpm", s.respiration_rate_rpm);
  f.read("heartbeat_rate_bpm", s.heartbeat_rate_bpm);
  f.read("resp_amplitude_mm", s.resp_amplitude_mm);
  f.read("heart_amplitude_mm", s.heart_amplitude_mm);
  f.read("resp_phase_rad", s.resp_phase_rad);
  f.read("heart_phase_rad", s.heart_phase_rad);
  f.read("motion_noise_rms_mm", s.motion_noise_rms_mm);
  f.read("rng_seed", s.rng_seed);
  if (f.has("resp_harmonics")) {
    const auto& arr = f.at("resp_harmonics");
    if (!arr.is_array()) throw ValidationError("subject: resp_harmonics must be an array");
    s.resp_harmonics.clear();
    for (const auto& h : arr) {
      Fields hf(h, "harmonic", {"order", "relative_amplitude"});
      physio::Harmonic x{};
      hf.read("order", x.order);
      hf.read("relative_amplitude", x.relative_amplitude);
      s.resp_harmonics.push_back(x);
    }
  }
  return s;
}

Json to_json(const photonic::FbgProfile& f) {
  return {{"notch_depth_db", f.notch_depth_db},
          {"fwhm_3db_hz", f.fwhm_3db_hz},
          {"shape", "gaussian"},
          {"displacement_to_shift_hz_per_mm", f.displacement_to_shift_hz_per_mm},
          {"carrier_operating_offset_hz", f.carrier_operating_offset_hz}};
}

photonic::FbgProfile fbg_from_json(const Json& j) {
  Fields f(j, "fbg",
           {"notch_depth_db", "fwhm_3db_hz", "shape", "displacement_to_shift_hz_per_mm",
            "carrier_operating_offset_hz"});
  photonic::FbgProfile p;
  f.read("notch_depth_db", p.notch_depth_db);
  f.read("fwhm_3db_hz", p.fwhm_3db_hz);
  f.read("displacement_to_shift_hz_per_mm", p.displacement_to_shift_hz_per_mm);
  std::string shape = "gaussian";
  f.read("shape", shape);
  if (shape != "gaussian") throw ValidationError("fbg: unsupported notch shape '" + shape + "'");
  if (f.has("carrier_operating_offset_hz")) {
    f.read("carrier_operating_offset_hz", p.carrier_operating_offset_hz);
  } else {
    p = photonic::make_fbg_profile(p.notch_depth_db, p.fwhm_3db_hz,
                                   p.displacement_to_shift_hz_per_mm);
  }
  return p;
}

Json to_json(const photonic::IfLfmParams& p) {
  return {{"center_freq_hz", p.center_freq_hz},
          {"bandwidth_hz", p.bandwidth_hz},
          {"pulse_period_s", p.pulse_period_s},
          {"pulse_width_s", p.pulse_width_s}};
}

photonic::IfLfmParams if_lfm_from_json(const Json& j) {
  Fields f(j, "if_lfm", {"center_freq_hz", "bandwidth_hz", "pulse_period_s", "pulse_width_s"});
  photonic::IfLfmParams p;
  f.read("center_freq_hz", p.center_freq_hz);
  f.read("bandwidth_hz", p.bandwidth_hz);
  f.read("pulse_period_s", p.pulse_period_s);
  f.read("pulse_width_s", p.pulse_width_s);
  return p;
}

Json to_json(const photonic::ChirpParams& c) {
  return {{"start_freq_hz", c.start_freq_hz},
          {"sweep_bandwidth_hz", c.sweep_bandwidth_hz},
          {"chirp_rate_hz_per_s", c.chirp_rate_hz_per_s},
          {"pulse_period_s", c.pulse_period_s},
          {"pulse_width_s", c.pulse_width_s},
          {"carrier_wavelength_m", c.carrier_wavelength_m}};
}

photonic::ChirpParams chirp_from_json(const Json& j) {
  Fields f(j, "chirp",
           {"start_freq_hz", "sweep_bandwidth_hz", "chirp_rate_hz_per_s", "pulse_period_s",
            "pulse_width_s", "carrier_wavelength_m"});
  photonic::ChirpParams c;
  f.read("start_freq_hz", c.start_freq_hz);
  f.read("sweep_bandwidth_hz", c.sweep_bandwidth_hz);
  f.read("chirp_rate_hz_per_s", c.chirp_rate_hz_per_s);
  f.read("pulse_period_s", c.pulse_period_s);
  f.read("pulse_width_s", c.pulse_width_s);
  f.read("carrier_wavelength_m", c.carrier_wavelength_m);
  return c;
}

Json to_json(const radar::AcquisitionParams& a) {
  return {{"fast_rate_hz", a.fast_rate_hz},       {"slow_period_s", a.slow_period_s},
          {"frame_width_s", a.frame_width_s},     {"duration_s", a.duration_s},
          {"noise_rms", a.noise_rms},             {"amplitude_exponent", a.amplitude_exponent}};
}

radar::AcquisitionParams acquisition_from_json(const Json& j) {
  Fields f(j, "acquisition",
           {"fast_rate_hz", "slow_period_s", "frame_width_s", "duration_s", "noise_rms",
            "amplitude_exponent"});
  radar::AcquisitionParams a;
  f.read("fast_rate_hz", a.fast_rate_hz);
  f.read("slow_period_s", a.slow_period_s);
  f.read("frame_width_s", a.frame_width_s);
  f.read("duration_s", a.duration_s);
  f.read("noise_rms", a.noise_rms);
  f.read("amplitude_exponent", a.amplitude_exponent);
  return a;
}

Json to_json(const radar::RadarTarget& t) {
  return {{"subject", to_json(t.subject)},
          {"range_m", t.nominal_range_m},
          {"reflectivity", t.reflectivity}};
}

radar::RadarTarget target_from_json(const Json& j) {
  Fields f(j, "target", {"subject", "range_m", "reflectivity"});
  radar::RadarTarget t;
  if (!f.has("subject")) throw ValidationError("target: missing 'subject'");
  t.subject = subject_from_json(f.at("subject"));
  f.read("range_m", t.nominal_range_m);
  f.read("reflectivity", t.reflectivity);
  return t;
}

Json to_json(const scenario::WdmChannel& c) {
  Json roles = Json::array();
  for (auto r : c.roles) roles.push_back(scenario::to_string(r));
  Json j = {{"wavelength_nm", c.wavelength_nm},
            {"roles", roles},
            {"if_lfm", to_json(c.if_lfm)},
            {"modulator",
             {{"modulation_index", c.modulator.modulation_index},
              {"bias", c.modulator.bias == photonic::Bias::matp ? "matp" : "qtp"}}},
            {"laser_power_mw", c.laser_power_mw},
            {"fiber_length_km", c.fiber_length_km},
            {"fiber_loss_db_per_km", c.fiber_loss_db_per_km},
            {"contact_sample_rate_hz", c.contact_sample_rate_hz},
            {"contact_noise_rms", c.contact_noise_rms}};
  if (c.fbg) j["fbg"] = to_json(*c.fbg);
  return j;
}

scenario::WdmChannel channel_from_json(const Json& j) {
  Fields f(j, "channel",
           {"wavelength_nm", "roles", "fbg", "if_lfm", "modulator", "laser_power_mw",
            "fiber_length_km", "fiber_loss_db_per_km", "contact_sample_rate_hz",
            "contact_noise_rms"});
  scenario::WdmChannel c;
  if (!f.has("wavelength_nm")) throw ValidationError("channel: missing 'wavelength_nm'");
  f.read("wavelength_nm", c.wavelength_nm);
  std::vector<std::string> roles;
  f.read("roles", roles);
  for (const auto& r : roles) c.roles.insert(scenario::role_from_string(r));
  if (f.has("fbg")) c.fbg = fbg_from_json(f.at("fbg"));
  if (f.has("if_lfm")) c.if_lfm = if_lfm_from_json(f.at("if_lfm"));
  if (f.has("modulator")) {
    Fields m(f.at("modulator"), "modulator", {"modulation_index", "bias"});
    m.read("modulation_index", c.modulator.modulation_index);
    std::string bias = "matp";
    m.read("bias", bias);
    if (bias == "matp") {
      c.modulator.bias = photonic::Bias::matp;
    } else if (bias == "qtp") {
      c.modulator.bias = photonic::Bias::qtp;
    } else {
      throw ValidationError("modulator: unknown bias '" + bias + "'");
    }
  }
  f.read("laser_power_mw", c.laser_power_mw);
  f.read("fiber_length_km", c.fiber_length_km);
  f.read("fiber_loss_db_per_km", c.fiber_loss_db_per_km);
  f.read("contact_sample_rate_hz", c.contact_sample_rate_hz);
  f.read("contact_noise_rms", c.contact_noise_rms);
  return c;
}

Json to_json(const scenario::Scenario& s) {
  Json channels = Json::array();
  for (const auto& c : s.channels) channels.push_back(to_json(c));
  Json subjects = Json::array();
  for (const auto& [nm, subj] : s.contact_subjects) {
    subjects.push_back({{"channel_nm", nm}, {"subject", to_json(subj)}});
  }
  Json j = {{"name", s.name},
            {"seed", s.seed},
            {"duration_s", s.duration_s},
            {"channels", channels},
            {"contact_subjects", subjects}};
  if (s.acquisition || !s.radar_scenes.empty()) {
    Json scenes = Json::array();
    for (const auto& [nm, targets] : s.radar_scenes) {
      Json t = Json::array();
      for (const auto& x : targets) t.push_back(to_json(x));
      scenes.push_back({{"channel_nm", nm}, {"targets", t}});
    }
    j["radar"] = {{"scenes", scenes}};
    if (s.acquisition) j["radar"]["acquisition"] = to_json(*s.acquisition);
  }
  return j;
}

scenario::Scenario scenario_from_json(const Json& j) {
  Fields f(j, "scenario",
           {"name", "seed", "duration_s", "channels", "contact_subjects", "radar"});
  scenario::Scenario s;
  f.read("name", s.name);
  f.read("seed", s.seed);
  f.read("duration_s", s.duration_s);
  if (f.has("channels")) {
    if (!f.at("channels").is_array()) throw ValidationError("scenario: channels must be an array");
    for (const auto& c : f.at("channels")) s.channels.push_back(channel_from_json(c));
  }
  if (f.has("contact_subjects")) {
    for (const auto& e : f.at("contact_subjects")) {
      Fields cf(e, "contact_subjects entry", {"channel_nm", "subject"});
      double nm = 0.0;
      cf.read("channel_nm", nm);
      if (!cf.has("subject")) throw ValidationError("contact_subjects entry: missing 'subject'");
      if (s.contact_subjects.count(nm)) {
        throw ValidationError("contact_subjects: channel " + display(nm) +
                              " nm has more than one subject");
      }
      s.contact_subjects[nm] = subject_from_json(cf.at("subject"));
    }
  }
  if (f.has("radar")) {
    Fields rf(f.at("radar"), "radar", {"acquisition", "scenes"});
    s.acquisition = rf.has("acquisition") ? acquisition_from_json(rf.at("acquisition"))
                                          : radar::AcquisitionParams{};
    if (rf.has("scenes")) {
      for (const auto& e : rf.at("scenes")) {
        Fields sf(e, "radar scene", {"channel_nm", "targets"});
        double nm = 0.0;
        sf.read("channel_nm", nm);
        auto& list = s.radar_scenes[nm];
        if (sf.has("targets")) {
          for (const auto& t : sf.at("targets")) list.push_back(target_from_json(t));
        }
      }
    }
  }
  return s;
}

scenario::Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string scenario_hash(const scenario::Scenario& s) { return content_hash(to_json(s).dump()); }

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const dsp::BandpassSpec& s) {
  return {{"low_edge_hz", s.low_edge_hz},
          {"high_edge_hz", s.high_edge_hz},
          {"sample_rate_hz", s.sample_rate_hz},
          {"passband_ripple_db", s.passband_ripple_db},
          {"stopband_atten_db", s.stopband_atten_db},
          {"order", s.order},
          {"transition_ratio", s.transition_ratio},
          {"lower_stop_edge_hz", s.lower_stop_edge_hz()},
          {"upper_stop_edge_hz", s.upper_stop_edge_hz()}};
}

Json to_json(const dsp::FilterCoeffs& c) {
  Json sections = Json::array();
  for (const auto& q : c.sections) {
    sections.push_back({{"b", {q.b0, q.b1, q.b2}}, {"a", {1.0, q.a1, q.a2}}});
  }
  return {{"spec", to_json(c.spec)},
          {"prototype_order", c.prototype_order},
          {"gain", c.gain},
          {"sections", sections},
          {"max_pole_radius", c.max_pole_radius()}};
}

Json to_json(const dsp::Conformance& c) {
  return {{"passband_min_db", c.passband_min_db},
          {"passband_max_db", c.passband_max_db},
          {"stopband_max_db", c.stopband_max_db},
          {"stable", c.stable},
          {"meets_spec", c.meets_spec}};
}

Json to_json(const pipelines::ProcessingOptions& o) {
  return {{"respiration_band", band_json(o.respiration)},
          {"heartbeat_band", band_json(o.heartbeat)},
          {"spectrum_window", window_name(o.window)},
          {"zero_pad_factor", o.zero_pad_factor},
          {"zero_phase", o.zero_phase},
          {"edge_extension", o.edge_extension == dsp::EdgeExtension::linear_prediction
                                 ? "linear_prediction"
                                 : "odd_reflection"},
          {"dc_compensation", o.dc_compensation},
          {"range_window", window_name(o.range_window)},
          {"phase_reference",
           o.phase_reference == pipelines::PhaseReference::sweep_start ? "sweep_start"
                                                                       : "frame_center"}};
}

Json assumed_defaults(const pipelines::ProcessingOptions& o) {
  Json a = Json::array();
  a.push_back("chest displacement amplitudes are model defaults, not measured values");
  a.push_back("bandpass filters: elliptic, " + display(o.respiration.passband_ripple_db) +
              " dB ripple, " + display(o.respiration.stopband_atten_db) +
              " dB stopband, order raised until the transition width is met");
  a.push_back(o.zero_phase ? "filtering is zero-phase (forward-backward)"
                           : "filtering is single-pass (causal)");
  a.push_back("range peaks are isolated by nearest-bin complex extraction");
  a.push_back("receiver and intensity noise levels are calibrated defaults");
  a.push_back("shortened records are start-anchored");
  return a;
}

Json to_json(const pipelines::VitalsReport& r) {
  Json j;
  j["label"] = r.label;
  j["modality"] = pipelines::to_string(r.modality);
  j["duration_s"] = r.duration_s;
  j["sample_rate_hz"] = r.sample_rate_hz;
  j["respiration"] = estimate_json(r.respiration, "rpm");
  j["heartbeat"] = estimate_json(r.heartbeat, "bpm");
  j["filters"] = {{"respiration_prototype_order", r.resp_filter_order},
                  {"heartbeat_prototype_order", r.heart_filter_order}};
  if (r.modality == pipelines::Modality::contactless) {
    j["range_estimate_m"] = optional_number(r.range_estimate_m);
    j["nominal_range_m"] = optional_number(r.nominal_range_m);
  }
  if (r.error) j["error"] = *r.error;
  return j;
}

Json to_json(const pipelines::SweepReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x = {{"duration_s", row.duration_s}, {"valid", row.valid}};
    if (!row.note.empty()) x["note"] = row.note;
    if (row.valid) {
      x["respiration"] = estimate_json(row.report.respiration, "rpm");
      x["heartbeat"] = estimate_json(row.report.heartbeat, "bpm");
    }
    rows.push_back(std::move(x));
  }
  return {{"label", r.label},
          {"modality", pipelines::to_string(r.modality)},
          {"truncation", "start-anchored"},
          {"rows", rows}};
}

Json to_json(const scenario::ValidationReport& r) {
  return {{"valid", r.ok()}, {"violations", r.violations}, {"warnings", r.warnings}};
}

}  // namespace vitalchirp::io
