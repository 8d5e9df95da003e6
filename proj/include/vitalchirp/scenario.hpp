#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vitalchirp/photonic.hpp"
#include "vitalchirp/physio.hpp"
#include "vitalchirp/pipelines.hpp"
#include "vitalchirp/radar.hpp"

namespace vitalchirp::scenario {

enum class Role { contact, contactless };

const char* to_string(Role r);
Role role_from_string(const std::string& s);

struct WdmChannel {
  double wavelength_nm = 1549.36;
  std::set<Role> roles;
  std::optional<photonic::FbgProfile> fbg;  // required iff contact
  photonic::IfLfmParams if_lfm;
  photonic::ModulatorModel modulator;
  double laser_power_mw = 1.0;
  double fiber_length_km = 0.0;
  double fiber_loss_db_per_km = 0.2;
  double contact_sample_rate_hz = 50.0;
  double contact_noise_rms = 0.02;  // relative

  bool has(Role r) const { return roles.count(r) != 0; }
  // Linear power transmission of the fiber link.
  double link_gain() const;
};

struct Scenario {
  std::string name = "scenario";
  std::vector<WdmChannel> channels;
  // Keyed by channel wavelength in nm.
  std::map<double, physio::SubjectVitals> contact_subjects;
  std::map<double, std::vector<radar::RadarTarget>> radar_scenes;
  // The radar section; contactless channels need it.
  std::optional<radar::AcquisitionParams> acquisition;
  double duration_s = 60.0;
  std::uint64_t seed = 1;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_scenario(const Scenario& s);

// Seed of one channel, derived from the global seed and the wavelength
// rounded to the picometre.
std::uint64_t channel_seed(std::uint64_t global_seed, double wavelength_nm);

struct ChannelData {
  WdmChannel channel;
  std::uint64_t seed = 0;
  double link_gain = 1.0;
  std::optional<physio::SubjectVitals> contact_subject;  // truth
  std::optional<photonic::ContactSignal> contact;
  std::optional<radar::DechirpFrameSet> frames;
  std::vector<radar::RadarTarget> targets;  // truth; may be empty
};

struct Bundle {
  Scenario scenario;
  std::vector<ChannelData> channels;  // ascending wavelength
  bool has_truth = true;
};

// Throws ValidationError listing violations when the scenario is invalid.
// Synthesis failures are rethrown with the channel wavelength prepended.
Bundle run_scenario(const Scenario& s);

struct ChannelReport {
  double wavelength_nm = 0.0;
  std::vector<pipelines::VitalsReport> reports;
};

// Plot-ready intermediates of one processed subject.
struct SubjectTraces {
  std::string label;
  pipelines::VitalTraces vitals;
  std::vector<double> phase_rad;  // contactless only
};

struct ChannelTraces {
  double wavelength_nm = 0.0;
  std::optional<pipelines::RangeProfile> range_profile;
  std::vector<SubjectTraces> subjects;
};

// Contact and contactless chains over every channel. Without truth the
// contactless targets are the detected range peaks. duration_s > 0 keeps
// only the first duration_s of each record.
std::vector<ChannelReport> process_bundle(const Bundle& b, const pipelines::ProcessingOptions& opt,
                                          double duration_s = 0.0,
                                          std::vector<ChannelTraces>* traces = nullptr);

struct ChannelSweep {
  double wavelength_nm = 0.0;
  std::vector<pipelines::SweepReport> sweeps;
};

std::vector<ChannelSweep> sweep_bundle(const Bundle& b, std::span<const double> durations_s,
                                       const pipelines::ProcessingOptions& opt);

// Frequency offset in GHz from the nearest 50 GHz ITU grid point.
double itu_grid_offset_ghz(double wavelength_nm);

namespace presets {
// Single channel, one contact subject and one radar subject at 0.88 m.
Scenario single_link();
// Volunteer A on the FBG; volunteers B and C at 1.00 m and 1.65 m.
Scenario three_subject();
// Two contact-only channels with volunteers A and B.
Scenario dual_fbg();
// n channels on the 100 GHz grid, each with one contact subject and one
// radar target.
Scenario multi_channel(std::size_t n, double duration_s = 60.0);
Scenario by_name(const std::string& name);
}  // namespace presets

}  // namespace vitalchirp::scenario
