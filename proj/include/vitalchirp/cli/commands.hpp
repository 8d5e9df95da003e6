#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace vitalchirp::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kIo = 3, kProcessing = 4 };

// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "VITALCHIRP_OUT";

std::filesystem::path default_output_root();

// Entry point of the vitalchirp tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vitalchirp::cli
