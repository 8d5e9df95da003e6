#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "vitalchirp/dsp/filter.hpp"
#include "vitalchirp/photonic.hpp"
#include "vitalchirp/physio.hpp"
#include "vitalchirp/pipelines.hpp"
#include "vitalchirp/radar.hpp"
#include "vitalchirp/scenario.hpp"

namespace vitalchirp::io {

using Json = nlohmann::json;

// Decoders reject unknown keys and wrong types with ValidationError; missing
// keys keep their defaults.
Json to_json(const physio::SubjectVitals& s);
// Accepts a preset name or an object, optionally {"preset": name, ...overrides}.
physio::SubjectVitals subject_from_json(const Json& j);

Json to_json(const photonic::FbgProfile& f);
// Without carrier_operating_offset_hz the carrier sits at the steepest edge point.
photonic::FbgProfile fbg_from_json(const Json& j);

Json to_json(const photonic::IfLfmParams& p);
photonic::IfLfmParams if_lfm_from_json(const Json& j);

Json to_json(const photonic::ChirpParams& c);
photonic::ChirpParams chirp_from_json(const Json& j);

Json to_json(const radar::AcquisitionParams& a);
radar::AcquisitionParams acquisition_from_json(const Json& j);

Json to_json(const radar::RadarTarget& t);
radar::RadarTarget target_from_json(const Json& j);

Json to_json(const scenario::WdmChannel& c);
scenario::WdmChannel channel_from_json(const Json& j);

Json to_json(const scenario::Scenario& s);
scenario::Scenario scenario_from_json(const Json& j);

// Reads and decodes a scenario file. IoError when unreadable, ValidationError
// when malformed.
scenario::Scenario load_scenario(const std::filesystem::path& path);

// FNV-1a 64 as 16 hex digits.
std::string content_hash(const std::string& text);
// content_hash of the canonical serialization.
std::string scenario_hash(const scenario::Scenario& s);

Json to_json(const dsp::BandpassSpec& s);
Json to_json(const dsp::FilterCoeffs& c);
Json to_json(const dsp::Conformance& c);

Json to_json(const pipelines::ProcessingOptions& o);
// Modelling choices that reports list under "assumed_defaults".
Json assumed_defaults(const pipelines::ProcessingOptions& o);
Json to_json(const pipelines::VitalsReport& r);
Json to_json(const pipelines::SweepReport& r);
Json to_json(const scenario::ValidationReport& r);

// One decimal place, as reports display rates.
std::string display(double v);

}  // namespace vitalchirp::io
