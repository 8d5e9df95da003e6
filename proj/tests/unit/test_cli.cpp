#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "temp_dir.hpp"
#include "vitalchirp/cli/commands.hpp"
#include "vitalchirp/io/bundle.hpp"
#include "vitalchirp/io/csv.hpp"
#include "vitalchirp/io/json_codec.hpp"

namespace {

using testing_support::TempDir;
using vitalchirp::io::Json;

struct Result {
  int code = -1;
  std::string out;
};

Result run_tool(const std::string& args) {
  const std::string cmd = std::string("\"") + VITALCHIRP_CLI_PATH + "\" " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

TEST(Cli, UsageErrorsAreValidationFailures) {
  EXPECT_EQ(run_tool("").code, 2);
  EXPECT_EQ(run_tool("frobnicate").code, 2);
  EXPECT_EQ(run_tool("simulate --preset three-subject --format xml").code, 2);
  EXPECT_EQ(run_tool("filter-design --band 0.5:0.2").code, 2);
}

TEST(Cli, MissingInputsAreIoFailures) {
  TempDir dir;
  EXPECT_EQ(run_tool("process " + q(dir / "nowhere")).code, 3);
  vitalchirp::io::write_text(dir / "bad.json", "{\"channels\": [");
  EXPECT_EQ(run_tool("simulate --config " + q(dir / "bad.json") + " --out " + q(dir / "b")).code, 2);
}

TEST(Cli, InvalidScenarioListsViolations) {
  TempDir dir;
  auto j = vitalchirp::io::to_json(vitalchirp::scenario::presets::three_subject());
  j["radar"]["scenes"][0]["targets"][1]["range_m"] = 12.0;
  vitalchirp::io::write_text(dir / "far.json", j.dump());
  EXPECT_EQ(run_tool("simulate --config " + q(dir / "far.json") + " --out " + q(dir / "b")).code, 2);
}

TEST(Cli, SimulateProcessSweepRoundTrip) {
  TempDir dir;
  const auto bundle = dir / "three-subject";
  ASSERT_EQ(run_tool("simulate --preset three-subject --duration 20 --seed 3 --out " + q(bundle)).code, 0);
  EXPECT_TRUE(std::filesystem::exists(bundle / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(bundle / "scenario.json"));

  const auto res = run_tool("process " + q(bundle) + " --format json --out " + q(dir / "rep"));
  ASSERT_EQ(res.code, 0) << res.out;
  const auto doc = Json::parse(vitalchirp::io::read_text(dir / "rep" / "report.json"));
  EXPECT_EQ(Json::parse(res.out), doc);
  EXPECT_FALSE(doc["assumed_defaults"].empty());
  const auto& reports = doc["channels"][0]["reports"];
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) {
    EXPECT_LE(std::abs(r["respiration"]["error"].get<double>()), 1.6) << r.dump();
    EXPECT_LE(std::abs(r["heartbeat"]["error"].get<double>()), 1.6) << r.dump();
  }

  ASSERT_EQ(run_tool("process " + q(bundle) + " --duration 5 --out " + q(dir / "rep5")).code, 0);
  const auto short_doc = Json::parse(vitalchirp::io::read_text(dir / "rep5" / "report.json"));
  EXPECT_EQ(short_doc["channels"][0]["reports"][0]["duration_s"].get<double>(), 5.0);

  ASSERT_EQ(run_tool("sweep " + q(bundle) + " --durations 5,10,15,20 --out " + q(dir / "sw")).code, 0);
  const auto sweep = Json::parse(vitalchirp::io::read_text(dir / "sw" / "sweep.json"));
  EXPECT_FALSE(sweep.empty());
}

TEST(Cli, SweepDefaultDurations) {
  TempDir dir;
  ASSERT_EQ(run_tool("simulate --preset dual-fbg --out " + q(dir / "b")).code, 0);
  ASSERT_EQ(run_tool("sweep " + q(dir / "b") + " --out " + q(dir / "s")).code, 0);
  const auto text = vitalchirp::io::read_text(dir / "s" / "sweep.csv");
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 2u * 7u) << text;
}

TEST(Cli, OutputRootFromEnvironment) {
  TempDir dir;
  ::setenv(vitalchirp::cli::kOutputRootEnv, dir.path().c_str(), 1);
  EXPECT_EQ(vitalchirp::cli::default_output_root(), dir.path());
  EXPECT_EQ(run_tool("filter-design --band heartbeat").code, 0);
  ::unsetenv(vitalchirp::cli::kOutputRootEnv);
  EXPECT_TRUE(std::filesystem::exists(dir / "filter-heartbeat" / "filter.json"));
}

TEST(Cli, FilterDesignIsConformant) {
  TempDir dir;
  const auto r = run_tool("filter-design --band respiration --points 8192 --format json --out " + q(dir / "f"));
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(vitalchirp::io::read_text(dir / "f" / "filter.json"));
  EXPECT_TRUE(doc["conformance"]["meets_spec"].get<bool>()) << doc.dump();
  const auto resp = vitalchirp::io::read_csv(dir / "f" / "response.csv");
  EXPECT_EQ(resp[0].values.size(), 8192u);
}

TEST(Cli, InProcessEntryPoint) {
  std::ostringstream out, err;
  const char* argv[] = {"vitalchirp", "--version"};
  EXPECT_EQ(vitalchirp::cli::run(2, argv, out, err), 0);
  EXPECT_NE(out.str().find("0.3.0"), std::string::npos);
}

}  // namespace
