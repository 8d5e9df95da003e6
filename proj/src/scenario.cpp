#include "vitalchirp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vitalchirp/constants.hpp"
#include "vitalchirp/error.hpp"
#include "vitalchirp/seed.hpp"

namespace vitalchirp::scenario {
namespace {

constexpr double kItuAnchorHz = 193.1e12;
constexpr double kItuSpacingHz = 50e9;
constexpr double kOffGridToleranceGhz = 2.5;

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string channel_tag(double nm) { return "channel " + fmt(nm) + " nm"; }

template <typename Fn>
void collect(std::vector<std::string>& out, const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    out.push_back(where + ": " + e.what());
  }
}

template <typename Fn>
auto with_channel(double nm, Fn&& fn) {
  const std::string tag = channel_tag(nm) + ": ";
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(tag + e.what());
  } catch (const ProcessingError& e) {
    throw ProcessingError(tag + e.what());
  } catch (const IoError& e) {
    throw IoError(tag + e.what());
  }
}

bool in_band(double hz, double lo, double hi) { return hz >= lo && hz <= hi; }

void check_vital_bands(std::vector<std::string>& out, const std::string& where,
                       const physio::SubjectVitals& v) {
  if (!in_band(v.respiration_hz(), physio::kRespBandLowHz, physio::kRespBandHighHz)) {
    out.push_back(where + ": respiration rate " + fmt(v.respiration_rate_rpm) +
                  " rpm outside the 7.8-30 rpm band");
  }
  if (!in_band(v.heartbeat_hz(), physio::kHeartBandLowHz, physio::kHeartBandHighHz)) {
    out.push_back(where + ": heartbeat rate " + fmt(v.heartbeat_rate_bpm) +
                  " bpm outside the 48-114 bpm band");
  }
}

const WdmChannel* find_channel(const Scenario& s, double nm) {
  for (const auto& c : s.channels) {
    if (c.wavelength_nm == nm) return &c;
  }
  return nullptr;
}

radar::AcquisitionParams resolved_acquisition(const Scenario& s) {
  auto acq = s.acquisition.value_or(radar::AcquisitionParams{});
  acq.duration_s = s.duration_s;
  return acq;
}

}  // namespace

const char* to_string(Role r) { return r == Role::contact ? "contact" : "contactless"; }

Role role_from_string(const std::string& s) {
  if (s == "contact") return Role::contact;
  if (s == "contactless") return Role::contactless;
  throw ValidationError("unknown channel role '" + s + "'");
}

double WdmChannel::link_gain() const {
  return std::pow(10.0, -fiber_length_km * fiber_loss_db_per_km / 10.0);
}

double itu_grid_offset_ghz(double wavelength_nm) {
  const double f = kSpeedOfLight / (wavelength_nm * 1e-9);
  const double k = std::round((f - kItuAnchorHz) / kItuSpacingHz);
  return (f - (kItuAnchorHz + k * kItuSpacingHz)) / 1e9;
}

std::uint64_t channel_seed(std::uint64_t global_seed, double wavelength_nm) {
  return mix_seed(global_seed, static_cast<std::uint64_t>(std::llround(wavelength_nm * 1000.0)));
}

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport r;
  auto& v = r.violations;
  if (!(s.duration_s > 0.0)) v.push_back("scenario: duration must be > 0");

  std::set<double> seen;
  bool any_contactless = false;
  for (const auto& c : s.channels) {
    const std::string where = channel_tag(c.wavelength_nm);
    if (!(c.wavelength_nm > 0.0)) {
      v.push_back(where + ": wavelength must be > 0");
      continue;
    }
    if (!seen.insert(c.wavelength_nm).second) {
      v.push_back(where + ": duplicate wavelength");
      continue;
    }
    if (std::abs(itu_grid_offset_ghz(c.wavelength_nm)) > kOffGridToleranceGhz) {
      r.warnings.push_back(where + ": off the ITU 50 GHz grid by " +
                           fmt(itu_grid_offset_ghz(c.wavelength_nm)) + " GHz");
    }
    if (c.roles.empty()) r.warnings.push_back(where + ": no roles assigned");
    if (!(c.fiber_length_km >= 0.0) || !(c.fiber_loss_db_per_km >= 0.0)) {
      v.push_back(where + ": fiber length and loss must be >= 0");
    }
    if (c.has(Role::contact)) {
      if (!c.fbg) {
        v.push_back(where + ": contact role requires an FBG profile");
      } else {
        collect(v, where, [&] { photonic::validate(*c.fbg); });
      }
      collect(v, where, [&] { photonic::sideband_weights(c.modulator); });
      if (!(c.laser_power_mw > 0.0)) v.push_back(where + ": laser power must be > 0");
      if (!(c.contact_sample_rate_hz > 0.0)) v.push_back(where + ": contact sample rate must be > 0");
      if (!(c.contact_noise_rms >= 0.0)) v.push_back(where + ": contact noise must be >= 0");
      if (!s.contact_subjects.count(c.wavelength_nm)) {
        v.push_back(where + ": contact role requires exactly one contact subject");
      }
    } else if (c.fbg) {
      r.warnings.push_back(where + ": FBG profile given without the contact role");
    }
    if (c.has(Role::contactless)) {
      any_contactless = true;
      collect(v, where, [&] { photonic::validate(c.if_lfm); });
      if (!s.radar_scenes.count(c.wavelength_nm) || s.radar_scenes.at(c.wavelength_nm).empty()) {
        r.warnings.push_back(where + ": contactless channel has no targets");
      }
    }
  }
  if (any_contactless && !s.acquisition) {
    v.push_back("scenario: contactless role requires a radar section");
  }

  for (const auto& [nm, subject] : s.contact_subjects) {
    const std::string where = channel_tag(nm) + " contact subject '" + subject.id + "'";
    const auto* c = find_channel(s, nm);
    if (!c) {
      v.push_back(where + ": references a channel that does not exist");
      continue;
    }
    if (!c->has(Role::contact)) v.push_back(where + ": channel lacks the contact role");
    collect(v, where, [&] { physio::validate(subject); });
    check_vital_bands(v, where, subject);
    if (c->fbg && subject.resp_amplitude_mm >= 0.0) {
      const auto& f = *c->fbg;
      const double peak = subject.resp_amplitude_mm + subject.heart_amplitude_mm;
      const double worst = std::abs(f.carrier_operating_offset_hz) +
                           std::abs(f.displacement_to_shift_hz_per_mm) * peak;
      if (worst > 3.0 * f.sigma_hz()) {
        r.warnings.push_back(where + ": chest excursion leaves the +-3 sigma edge region");
      }
    }
  }

  for (const auto& [nm, targets] : s.radar_scenes) {
    const std::string where = channel_tag(nm);
    const auto* c = find_channel(s, nm);
    if (!c) {
      v.push_back(where + " radar scene: references a channel that does not exist");
      continue;
    }
    if (!c->has(Role::contactless)) {
      v.push_back(where + " radar scene: channel lacks the contactless role");
      continue;
    }
    if (!s.acquisition) continue;
    const auto acq = resolved_acquisition(s);
    double r_max = 0.0;
    bool chirp_ok = true;
    try {
      const auto chirp = photonic::derive_chirp(c->if_lfm);
      radar::validate(acq, chirp);
      r_max = radar::unambiguous_range(chirp, acq.fast_rate_hz);
    } catch (const std::exception& e) {
      v.push_back(where + ": " + e.what());
      chirp_ok = false;
    }
    for (const auto& t : targets) {
      const std::string tw = where + " target '" + t.subject.id + "'";
      collect(v, tw, [&] { physio::validate(t.subject); });
      check_vital_bands(v, tw, t.subject);
      if (!(t.nominal_range_m > 0.0)) v.push_back(tw + ": range must be > 0");
      if (!(t.reflectivity >= 0.0)) v.push_back(tw + ": reflectivity must be >= 0");
      if (chirp_ok && t.nominal_range_m >= r_max) {
        v.push_back(tw + ": range " + fmt(t.nominal_range_m) +
                    " m beyond the unambiguous range R_max = " + fmt(r_max) + " m");
      }
    }
  }
  return r;
}

Bundle run_scenario(const Scenario& s) {
  const auto report = validate_scenario(s);
  if (!report.ok()) {
    std::string msg = "scenario '" + s.name + "' is invalid:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }

  Bundle b;
  b.scenario = s;
  std::vector<const WdmChannel*> order;
  for (const auto& c : s.channels) order.push_back(&c);
  std::sort(order.begin(), order.end(),
            [](auto* a, auto* c) { return a->wavelength_nm < c->wavelength_nm; });

  for (const auto* cp : order) {
    const auto& c = *cp;
    ChannelData d;
    d.channel = c;
    d.seed = channel_seed(s.seed, c.wavelength_nm);
    d.link_gain = c.link_gain();

    if (c.has(Role::contact)) {
      with_channel(c.wavelength_nm, [&] {
        const auto& subject = s.contact_subjects.at(c.wavelength_nm);
        const auto grid = physio::make_time_grid(s.duration_s, c.contact_sample_rate_hz);
        const auto motion = physio::synth_motion(subject, grid);
        const auto w = photonic::sideband_weights(c.modulator);
        auto sig = photonic::contact_intensity(
            motion, *c.fbg, c.laser_power_mw * w.carrier_power(),
            c.laser_power_mw * w.sideband_power(), c.contact_noise_rms, grid, mix_seed(d.seed, 1));
        for (auto& p : sig.intensity_mw) p *= d.link_gain;
        d.contact_subject = subject;
        d.contact = std::move(sig);
        return 0;
      });
    }
    if (c.has(Role::contactless)) {
      with_channel(c.wavelength_nm, [&] {
        const auto it = s.radar_scenes.find(c.wavelength_nm);
        if (it != s.radar_scenes.end()) d.targets = it->second;
        auto frames = radar::synth_dechirp_frames(d.targets, photonic::derive_chirp(c.if_lfm),
                                                  resolved_acquisition(s), mix_seed(d.seed, 2));
        for (auto& x : frames.samples) x *= d.link_gain;
        d.frames = std::move(frames);
        return 0;
      });
    }
    b.channels.push_back(std::move(d));
  }
  return b;
}

namespace {

std::vector<double> contactless_ranges(const ChannelData& d, const radar::DechirpFrameSet& f,
                                       const pipelines::ProcessingOptions& opt,
                                       std::vector<std::optional<physio::SubjectVitals>>& truths) {
  std::vector<double> ranges;
  truths.clear();
  if (!d.targets.empty()) {
    for (const auto& t : d.targets) {
      ranges.push_back(t.nominal_range_m);
      truths.emplace_back(t.subject);
    }
  } else {
    for (const auto& pk : pipelines::find_range_peaks(pipelines::range_profile(f, opt.range_window))) {
      ranges.push_back(pk.range_m);
    }
  }
  return ranges;
}

std::span<const double> head(const std::vector<double>& x, double fs, double duration_s) {
  if (duration_s <= 0.0) return x;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
  if (n > x.size()) throw ValidationError("requested duration exceeds the contact record");
  return std::span<const double>(x).first(n);
}

}  // namespace

std::vector<ChannelReport> process_bundle(const Bundle& b, const pipelines::ProcessingOptions& opt,
                                          double duration_s, std::vector<ChannelTraces>* traces) {
  std::vector<ChannelReport> out;
  if (traces) traces->clear();
  for (const auto& d : b.channels) {
    ChannelReport cr;
    ChannelTraces ct;
    cr.wavelength_nm = ct.wavelength_nm = d.channel.wavelength_nm;
    with_channel(cr.wavelength_nm, [&] {
      if (d.contact) {
        const double fs = d.contact->grid.sample_rate_hz;
        SubjectTraces st;
        cr.reports.push_back(pipelines::contact_rates(head(d.contact->intensity_mw, fs, duration_s),
                                                      fs, d.contact_subject, opt,
                                                      traces ? &st.vitals : nullptr));
        st.label = cr.reports.back().label;
        if (traces) ct.subjects.push_back(std::move(st));
      }
      if (d.frames) {
        const auto frames = duration_s > 0.0 ? radar::truncate(*d.frames, duration_s) : *d.frames;
        std::vector<std::optional<physio::SubjectVitals>> truths;
        const auto ranges = contactless_ranges(d, frames, opt, truths);
        if (traces) ct.range_profile = pipelines::range_profile(frames, opt.range_window);
        if (!ranges.empty()) {
          std::vector<pipelines::TargetPhase> phases;
          auto reports = pipelines::contactless_rates(frames, ranges, truths, opt,
                                                      traces ? &phases : nullptr);
          for (std::size_t i = 0; i < reports.size(); ++i) {
            if (traces && !reports[i].error) {
              SubjectTraces st;
              st.label = reports[i].label;
              pipelines::vitals_from_series(phases[i].phase_rad, frames.slow_rate_hz, std::nullopt,
                                            opt, &st.vitals);
              st.phase_rad = std::move(phases[i].phase_rad);
              ct.subjects.push_back(std::move(st));
            }
            cr.reports.push_back(std::move(reports[i]));
          }
        }
      }
      return 0;
    });
    out.push_back(std::move(cr));
    if (traces) traces->push_back(std::move(ct));
  }
  return out;
}

std::vector<ChannelSweep> sweep_bundle(const Bundle& b, std::span<const double> durations_s,
                                       const pipelines::ProcessingOptions& opt) {
  std::vector<ChannelSweep> out;
  for (const auto& d : b.channels) {
    ChannelSweep cs;
    cs.wavelength_nm = d.channel.wavelength_nm;
    with_channel(cs.wavelength_nm, [&] {
      if (d.contact) {
        const std::string label = d.contact_subject ? d.contact_subject->id : "contact";
        cs.sweeps.push_back(pipelines::resolution_sweep(d.contact->intensity_mw,
                                                        d.contact->grid.sample_rate_hz,
                                                        durations_s, d.contact_subject, opt, label));
      }
      if (d.frames) {
        std::vector<std::optional<physio::SubjectVitals>> truths;
        const auto ranges = contactless_ranges(d, *d.frames, opt, truths);
        if (!ranges.empty()) {
          for (auto& s : pipelines::resolution_sweep(*d.frames, ranges, durations_s, truths, opt)) {
            cs.sweeps.push_back(std::move(s));
          }
        }
      }
      return 0;
    });
    out.push_back(std::move(cs));
  }
  return out;
}

namespace presets {
namespace {

WdmChannel channel(double nm, std::set<Role> roles) {
  WdmChannel c;
  c.wavelength_nm = nm;
  c.roles = std::move(roles);
  c.fiber_length_km = 4.1;
  return c;
}

}  // namespace

Scenario single_link() {
  Scenario s;
  s.name = "single-link";
  auto c = channel(1549.36, {Role::contact, Role::contactless});
  c.fbg = photonic::make_fbg_profile(17.70, 11.2e9);
  s.channels.push_back(c);
  s.contact_subjects[c.wavelength_nm] = physio::presets::single_channel_contact();
  s.radar_scenes[c.wavelength_nm] = {{physio::presets::single_channel_radar(), 0.88, 1.0}};
  s.acquisition = radar::AcquisitionParams{};
  return s;
}

Scenario three_subject() {
  Scenario s;
  s.name = "three-subject";
  auto c = channel(1549.36, {Role::contact, Role::contactless});
  c.fbg = photonic::make_fbg_profile(17.70, 11.2e9);
  s.channels.push_back(c);
  s.contact_subjects[c.wavelength_nm] = physio::presets::volunteer_a();
  s.radar_scenes[c.wavelength_nm] = {{physio::presets::volunteer_b(), 1.00, 1.0},
                                     {physio::presets::volunteer_c(), 1.65, 1.0}};
  s.acquisition = radar::AcquisitionParams{};
  return s;
}

Scenario dual_fbg() {
  Scenario s;
  s.name = "dual-fbg";
  auto c1 = channel(1549.36, {Role::contact});
  c1.fbg = photonic::make_fbg_profile(17.70, 11.2e9);
  auto c2 = channel(1549.92, {Role::contact});
  c2.fbg = photonic::make_fbg_profile(17.76, 10.0e9);
  s.channels = {c1, c2};
  s.contact_subjects[c1.wavelength_nm] = physio::presets::volunteer_a();
  s.contact_subjects[c2.wavelength_nm] = physio::presets::volunteer_b();
  return s;
}

Scenario multi_channel(std::size_t n, double duration_s) {
  Scenario s;
  s.name = "multi-" + std::to_string(n);
  s.duration_s = duration_s;
  s.acquisition = radar::AcquisitionParams{};
  for (std::size_t i = 0; i < n; ++i) {
    const double f = kItuAnchorHz + 100e9 * static_cast<double>(i);
    const double nm = std::round(kSpeedOfLight / f * 1e12) / 1e3;
    auto c = channel(nm, {Role::contact, Role::contactless});
    c.fbg = photonic::make_fbg_profile(17.70, 11.2e9);
    s.channels.push_back(c);

    physio::SubjectVitals contact;
    contact.id = "ch" + std::to_string(i) + "-contact";
    contact.respiration_rate_rpm = 12.0 + 1.5 * static_cast<double>(i % 7);
    contact.heartbeat_rate_bpm = 66.0 + 3.0 * static_cast<double>(i % 9);
    contact.resp_phase_rad = 0.3 * static_cast<double>(i);
    s.contact_subjects[nm] = contact;

    physio::SubjectVitals remote = contact;
    remote.id = "ch" + std::to_string(i) + "-radar";
    remote.respiration_rate_rpm = 10.0 + 2.0 * static_cast<double>(i % 6);
    remote.heartbeat_rate_bpm = 60.0 + 4.0 * static_cast<double>(i % 8);
    s.radar_scenes[nm] = {{remote, 1.0 + 0.15 * static_cast<double>(i % 5), 1.0}};
  }
  return s;
}

Scenario by_name(const std::string& name) {
  if (name == "single-link") return single_link();
  if (name == "three-subject") return three_subject();
  if (name == "dual-fbg") return dual_fbg();
  throw ValidationError("unknown scenario preset '" + name + "' (expected single-link, three-subject or dual-fbg)");
}

}  // namespace presets

}  // namespace vitalchirp::scenario
