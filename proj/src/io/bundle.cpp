#include "vitalchirp/io/bundle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "vitalchirp/error.hpp"
#include "vitalchirp/io/csv.hpp"
#include "vitalchirp/io/frames_file.hpp"

namespace vitalchirp::io {
namespace fs = std::filesystem;

namespace {

Json truth_json(const scenario::Bundle& b) {
  Json channels = Json::array();
  for (const auto& d : b.channels) {
    Json c = {{"wavelength_nm", d.channel.wavelength_nm},
              {"seed", d.seed},
              {"link_gain", d.link_gain}};
    if (d.contact_subject) c["contact_subject"] = to_json(*d.contact_subject);
    if (d.contact) {
      c["contact_edge_warning"] = d.contact->edge_warning;
      c["contact_max_excursion_hz"] = d.contact->max_excursion_hz;
    }
    if (d.frames) {
      Json t = Json::array();
      for (const auto& x : d.targets) t.push_back(to_json(x));
      c["targets"] = t;
    }
    channels.push_back(std::move(c));
  }
  return {{"channels", channels}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string channel_dir_name(double wavelength_nm) {
  return "channel_" + format_number(wavelength_nm);
}

std::string timestamp_utc() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json make_manifest(const std::string& command, const std::string& scenario_hash,
                   std::uint64_t seed, const Json& parameters,
                   const std::vector<std::string>& files) {
  return {{"tool", "vitalchirp"},
          {"version", VITALCHIRP_VERSION},
          {"command", command},
          {"scenario_hash", scenario_hash},
          {"seed", seed},
          {"created_utc", timestamp_utc()},
          {"parameters", parameters},
          {"files", files}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> write_bundle(const fs::path& dir, const scenario::Bundle& b,
                                      const Json& parameters) {
  ensure_dir(dir);
  std::vector<std::string> files;
  for (const auto& d : b.channels) {
    const std::string sub = channel_dir_name(d.channel.wavelength_nm);
    ensure_dir(dir / sub);
    if (d.contact) {
      const auto& g = d.contact->grid;
      std::vector<double> t(g.count);
      for (std::size_t i = 0; i < g.count; ++i) t[i] = g.at(i);
      write_csv(dir / sub / "contact.csv", {{"t_s", t}, {"intensity_mw", d.contact->intensity_mw}});
      files.push_back(sub + "/contact.csv");
    }
    if (d.frames) {
      write_frames(dir / sub / "frames.bin", *d.frames);
      files.push_back(sub + "/frames.bin");
    }
  }
  if (b.has_truth) {
    write_text(dir / "truth.json", truth_json(b).dump(2) + "\n");
    files.push_back("truth.json");
  }
  write_text(dir / "scenario.json", to_json(b.scenario).dump(2) + "\n");
  files.push_back("scenario.json");
  files.push_back("manifest.json");
  const auto manifest =
      make_manifest("simulate", scenario_hash(b.scenario), b.scenario.seed, parameters, files);
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return files;
}

scenario::Bundle read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("bundle directory " + dir.string() + " not found");
  scenario::Bundle b;
  const auto scen_path = dir / "scenario.json";
  Json sj;
  try {
    sj = Json::parse(read_text(scen_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(scen_path.string() + ": " + e.what());
  }
  b.scenario = scenario_from_json(sj);

  Json truth;
  b.has_truth = fs::exists(dir / "truth.json");
  if (b.has_truth) {
    try {
      truth = Json::parse(read_text(dir / "truth.json"));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError((dir / "truth.json").string() + ": " + e.what());
    }
  }
  auto truth_for = [&](double nm) -> const Json* {
    if (!b.has_truth || !truth.contains("channels")) return nullptr;
    for (const auto& c : truth["channels"]) {
      if (c.value("wavelength_nm", -1.0) == nm) return &c;
    }
    return nullptr;
  };

  auto channels = b.scenario.channels;
  std::sort(channels.begin(), channels.end(),
            [](const auto& a, const auto& c) { return a.wavelength_nm < c.wavelength_nm; });
  for (const auto& ch : channels) {
    scenario::ChannelData d;
    d.channel = ch;
    d.seed = scenario::channel_seed(b.scenario.seed, ch.wavelength_nm);
    d.link_gain = ch.link_gain();
    const auto sub = dir / channel_dir_name(ch.wavelength_nm);
    const Json* t = truth_for(ch.wavelength_nm);

    if (fs::exists(sub / "contact.csv")) {
      const auto cols = read_csv(sub / "contact.csv");
      if (cols.size() != 2 || cols[0].name != "t_s" || cols[1].name != "intensity_mw") {
        throw IoError((sub / "contact.csv").string() + ": expected columns t_s,intensity_mw");
      }
      photonic::ContactSignal sig;
      sig.grid.sample_rate_hz = ch.contact_sample_rate_hz;
      sig.grid.count = cols[1].values.size();
      sig.grid.start_s = cols[0].values.empty() ? 0.0 : cols[0].values.front();
      sig.intensity_mw = cols[1].values;
      d.contact = std::move(sig);
      if (t && t->contains("contact_subject")) {
        d.contact_subject = subject_from_json(t->at("contact_subject"));
      }
    }
    if (fs::exists(sub / "frames.bin")) {
      d.frames = read_frames(sub / "frames.bin");
      if (t && t->contains("targets")) {
        for (const auto& x : t->at("targets")) d.targets.push_back(target_from_json(x));
        d.frames->truth = d.targets;
      }
    }
    b.channels.push_back(std::move(d));
  }
  return b;
}

}  // namespace vitalchirp::io
