#include "vitalchirp/io/frames_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "vitalchirp/error.hpp"
#include "vitalchirp/io/json_codec.hpp"

namespace vitalchirp::io {
namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::uint64_t offset,
                       const std::string& what) {
  throw IoError(path.string() + ": " + what + " at byte offset " + std::to_string(offset));
}

}  // namespace

void write_frames(const std::filesystem::path& path, const radar::DechirpFrameSet& f) {
  Json header = {{"format", "vitalchirp-frames"},
                 {"version", 1},
                 {"dtype", "float64"},
                 {"byte_order", "little"},
                 {"layout", "row-major"},
                 {"slow_count", f.slow_count},
                 {"fast_count", f.fast_count},
                 {"slow_rate_hz", f.slow_rate_hz},
                 {"fast_rate_hz", f.fast_rate_hz},
                 {"chirp", to_json(f.chirp)},
                 {"acquisition", to_json(f.acquisition)}};
  const std::string text = header.dump();

  std::string buf;
  buf.reserve(16 + text.size() + 8 * f.samples.size());
  buf.append(kFramesMagic);
  put_u64(buf, text.size());
  buf.append(text);
  for (double x : f.samples) put_u64(buf, std::bit_cast<std::uint64_t>(x));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

radar::DechirpFrameSet read_frames(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
  if (buf.size() < 16) fail(path, buf.size(), "file truncated inside the preamble");
  if (std::string_view(buf.data(), 8) != kFramesMagic) fail(path, 0, "bad magic");
  const std::uint64_t header_len = get_u64(buf.data() + 8);
  if (header_len > buf.size() - 16) fail(path, 8, "header length runs past end of file");

  Json h;
  try {
    h = Json::parse(buf.begin() + 16, buf.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    fail(path, 16, std::string("malformed JSON header (") + e.what() + ")");
  }

  radar::DechirpFrameSet f;
  try {
    if (h.at("format") != "vitalchirp-frames" || h.at("dtype") != "float64" ||
        h.at("byte_order") != "little" || h.at("layout") != "row-major") {
      fail(path, 16, "unsupported header format fields");
    }
    f.slow_count = h.at("slow_count").get<std::size_t>();
    f.fast_count = h.at("fast_count").get<std::size_t>();
    f.slow_rate_hz = h.at("slow_rate_hz").get<double>();
    f.fast_rate_hz = h.at("fast_rate_hz").get<double>();
    f.chirp = chirp_from_json(h.at("chirp"));
    f.acquisition = acquisition_from_json(h.at("acquisition"));
  } catch (const nlohmann::json::exception& e) {
    fail(path, 16, std::string("incomplete header (") + e.what() + ")");
  } catch (const ValidationError& e) {
    fail(path, 16, std::string("invalid header (") + e.what() + ")");
  }

  const std::uint64_t payload_at = 16 + header_len;
  const std::uint64_t count = static_cast<std::uint64_t>(f.slow_count) * f.fast_count;
  const std::uint64_t have = buf.size() - payload_at;
  if (have < 8 * count) {
    fail(path, payload_at + (have / 8) * 8,
         "payload truncated (expected " + std::to_string(8 * count) + " bytes, found " +
             std::to_string(have) + ")");
  }
  if (have > 8 * count) fail(path, payload_at + 8 * count, "trailing bytes after payload");

  f.samples.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = std::bit_cast<double>(get_u64(buf.data() + payload_at + 8 * i));
    if (!std::isfinite(x)) fail(path, payload_at + 8 * i, "non-finite sample");
    f.samples[i] = x;
  }
  return f;
}

}  // namespace vitalchirp::io
