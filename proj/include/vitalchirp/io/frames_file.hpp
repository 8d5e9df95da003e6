#pragma once

#include <filesystem>
#include <string_view>

#include "vitalchirp/radar.hpp"

namespace vitalchirp::io {

// Layout: 8-byte magic, uint64 little-endian header length, UTF-8 JSON
// header, then slow_count * fast_count little-endian IEEE-754 doubles in
// row-major order. See docs/FORMATS.md.
inline constexpr std::string_view kFramesMagic{"VCFRAME1", 8};

void write_frames(const std::filesystem::path& path, const radar::DechirpFrameSet& frames);

// Throws IoError naming the file and byte offset on any malformed content.
radar::DechirpFrameSet read_frames(const std::filesystem::path& path);

}  // namespace vitalchirp::io
