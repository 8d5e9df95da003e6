#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vitalchirp/io/json_codec.hpp"
#include "vitalchirp/scenario.hpp"

namespace vitalchirp::io {

// "channel_<wavelength>" with the shortest decimal form of the wavelength.
std::string channel_dir_name(double wavelength_nm);

// Creation time as ISO-8601 UTC; SOURCE_DATE_EPOCH overrides the clock.
std::string timestamp_utc();

Json make_manifest(const std::string& command, const std::string& scenario_hash,
                   std::uint64_t seed, const Json& parameters,
                   const std::vector<std::string>& files);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Writes channel data, truth.json, scenario.json and manifest.json under dir.
// Returns the written file names relative to dir, manifest last.
std::vector<std::string> write_bundle(const std::filesystem::path& dir,
                                      const scenario::Bundle& bundle, const Json& parameters);

// Loads a bundle. A missing truth.json yields has_truth = false.
scenario::Bundle read_bundle(const std::filesystem::path& dir);

}  // namespace vitalchirp::io
