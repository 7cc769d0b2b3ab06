#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sphcsf/flow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef SPHCSF_CLI_PATH
#error "SPHCSF_CLI_PATH must point at the built CLI"
#endif

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / (std::string("sphcsf_cli_") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path write_config(const std::string& file, const json& j) const {
    const fs::path p = root_ / file;
    std::ofstream(p) << j.dump();
    return p;
  }

  /// Runs the CLI with stdout/stderr captured to files; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(SPHCSF_CLI_PATH) + " " + args + " >" + (root_ / "stdout.txt").string() + " 2>" +
                            (root_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  [[nodiscard]] std::string slurp(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  [[nodiscard]] std::string stderr_text() const { return slurp(root_ / "stderr.txt"); }
  [[nodiscard]] json read_json(const fs::path& p) const { return json::parse(slurp(p)); }

  fs::path root_;
};

TEST_F(CliTest, SimulateCircleReportsOracleRadius) {
  const auto cfg = write_config("c.json", {{"name", "circle"},
                                           {"kind", "Simulate"},
                                           {"parameters",
                                            {{"curve", {{"type", "Circle"}, {"r0", sphcsf::pi / 3.0}}},
                                             {"dt", 1e-4},
                                             {"t", 0.5},
                                             {"snapshot_interval", 0.1}}}});
  ASSERT_EQ(run("simulate --quiet --config " + cfg.string() + " --out " + (root_ / "out").string()), 0) << stderr_text();
  const fs::path dir = root_ / "out" / "circle";
  for (const char* f : {"manifest.json", "report.json", "trajectory.jsonl", "tables/final_curve.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const json manifest = read_json(dir / "manifest.json");
  const double oracle = sphcsf::circle_oracle(sphcsf::pi / 3.0, 0.5);
  EXPECT_NEAR(manifest.at("oracle").at("oracle_radius").get<double>(), oracle, 1e-12);
  EXPECT_NEAR(manifest.at("oracle").at("final_radius").get<double>(), oracle, 1e-4);
  EXPECT_TRUE(manifest.contains("wall_time_s"));
  EXPECT_EQ(manifest.at("config").at("kind"), "Simulate");

  std::ifstream traj(dir / "trajectory.jsonl");
  std::string line;
  std::size_t lines = 0;
  json last;
  while (std::getline(traj, line)) {
    last = json::parse(line);
    ++lines;
  }
  EXPECT_EQ(lines, 6u);
  EXPECT_DOUBLE_EQ(last.at("t").get<double>(), 0.5);
  EXPECT_NEAR(last.at("radius").get<double>(), oracle, 1e-4);
  for (const char* k : {"length", "total_curvature", "bending", "area"}) EXPECT_TRUE(last.contains(k)) << k;
}

TEST_F(CliTest, NegativeDtIsAConfigError) {
  const auto cfg = write_config("neg.json", {{"kind", "Simulate"}, {"parameters", {{"dt", -1e-4}}}});
  EXPECT_EQ(run("simulate --config " + cfg.string() + " --out " + (root_ / "out").string()), 2);
  EXPECT_NE(stderr_text().find("dt"), std::string::npos) << stderr_text();
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  const std::string out = " --out " + (root_ / "out").string();
  EXPECT_EQ(run("simulate --config " + write_config("k.json", {{"kind", "Spacing"}}).string() + out), 2);
  EXPECT_EQ(run("simulate --config " + write_config("u.json", {{"parameters", {{"dtt", 1}}}}).string() + out), 2);
  EXPECT_NE(stderr_text().find("dtt"), std::string::npos);
  EXPECT_EQ(run("spacing --config " + write_config("th.json", {{"parameters", {{"theta", 1.0}}}}).string() + out), 2);
  EXPECT_NE(stderr_text().find("theta"), std::string::npos);
  EXPECT_EQ(run("simulate --seed -3" + out), 2);
  EXPECT_EQ(run("simulate --format xml" + out), 2);
  std::ofstream(root_ / "broken.json") << "{\"kind\":";
  EXPECT_EQ(run("simulate --config " + (root_ / "broken.json").string() + out), 2);
}

TEST_F(CliTest, RuntimeFailureExitsOneWithSerializedError) {
  const auto cfg = write_config(
      "f.json", {{"name", "missing"}, {"parameters", {{"curve", {{"type", "File"}, {"path", (root_ / "nope.csv").string()}}}}}});
  EXPECT_EQ(run("simulate --config " + cfg.string() + " --out " + (root_ / "out").string()), 1);
  const json report = read_json(root_ / "out" / "missing" / "report.json");
  EXPECT_EQ(report.at("error").at("kind"), "ParseError");
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRuns) {
  const auto cfg = write_config("w.json", {{"name", "wiggle"}, {"seed", 7}, {"parameters", {{"t", 0.05}, {"nodes", 256}}}});
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(run("straighten --quiet --config " + cfg.string() + " --out " + (root_ / out).string()), 0) << stderr_text();
    ASSERT_EQ(run("straighten --quiet --format csv --config " + cfg.string() + " --out " + (root_ / out / "csv").string()), 0);
  }
  for (const char* f : {"wiggle/trajectory.jsonl", "wiggle/report.json", "csv/wiggle/tables/trajectory.csv"}) {
    const std::string a = slurp(root_ / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(root_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, SeedFlagOverridesConfigSeed) {
  const auto cfg = write_config("w.json", {{"name", "wiggle"}, {"seed", 7}, {"parameters", {{"t", 0.01}, {"nodes", 256}}}});
  ASSERT_EQ(run("straighten --quiet --config " + cfg.string() + " --out " + (root_ / "a").string()), 0);
  ASSERT_EQ(run("straighten --quiet --seed 8 --config " + cfg.string() + " --out " + (root_ / "b").string()), 0);
  EXPECT_EQ(read_json(root_ / "b" / "wiggle" / "manifest.json").at("config").at("seed"), 8);
  EXPECT_NE(slurp(root_ / "a" / "wiggle" / "trajectory.jsonl"), slurp(root_ / "b" / "wiggle" / "trajectory.jsonl"));
}

TEST_F(CliTest, VerifyEmptySelectionExitsZero) {
  const auto cfg = write_config("v.json", {{"kind", "Verify"}, {"parameters", {{"checks", json::array()}}}});
  EXPECT_EQ(run("verify --config " + cfg.string() + " --out " + (root_ / "out").string()), 0);
  const json report = read_json(root_ / "out" / "verify" / "report.json");
  EXPECT_EQ(report.at("passed"), 0);
  EXPECT_EQ(report.at("failed"), 0);
}

TEST_F(CliTest, VerifySelectionRunsNamedChecks) {
  EXPECT_EQ(run("verify circle-oracle --out " + (root_ / "out").string()), 0) << stderr_text();
  const json report = read_json(root_ / "out" / "verify" / "report.json");
  ASSERT_EQ(report.at("checks").size(), 1u);
  EXPECT_EQ(report.at("checks")[0].at("name"), "circle-oracle");
  EXPECT_TRUE(report.at("checks")[0].at("pass").get<bool>());
  EXPECT_FALSE(report.at("checks")[0].contains("seconds"));
  EXPECT_NE(slurp(root_ / "stdout.txt").find("[PASS] C01 circle-oracle"), std::string::npos);
  EXPECT_EQ(run("verify no-such-check --out " + (root_ / "out").string()), 2);
}

TEST_F(CliTest, MultiplicityReportShape) {
  const auto cfg = write_config(
      "m.json", {{"parameters", {{"curve", {{"type", "Circle"}, {"r0", 1.0}, {"nodes", 256}}}, {"r", 0.05}, {"pole_samples", 200},
                                 {"poles", {{0, 0, 1}, {1, 0, 0}}}}}});
  ASSERT_EQ(run("multiplicity --quiet --config " + cfg.string() + " --out " + (root_ / "out").string()), 0) << stderr_text();
  const json report = read_json(root_ / "out" / "multiplicity" / "report.json");
  ASSERT_EQ(report.at("at_poles").size(), 2u);
  const json& polar = report.at("at_poles")[0];
  for (const char* k : {"pole", "r", "count", "components"}) EXPECT_TRUE(polar.contains(k)) << k;
  EXPECT_EQ(polar.at("count"), 0);  // the latitude sits pi/2 - 1 away from the equator
  EXPECT_EQ(report.at("at_poles")[1].at("count"), 2);
  EXPECT_TRUE(fs::exists(root_ / "out" / "multiplicity" / "tables" / "multiplicity.csv"));
}

TEST_F(CliTest, GraphflowWritesProfiles) {
  const auto cfg = write_config("g.json", {{"parameters", {{"t", 0.02}, {"profile", {{"samples", 128}, {"constant", 0.1}}}}}});
  ASSERT_EQ(run("graphflow --quiet --config " + cfg.string() + " --out " + (root_ / "out").string()), 0) << stderr_text();
  const json report = read_json(root_ / "out" / "graphflow" / "report.json");
  // constant u solves u' = (1+u^2) u, i.e. sin(atan u) grows like e^t
  const double expected = std::tan(std::asin(std::sin(std::atan(0.1)) * std::exp(0.02)));
  EXPECT_NEAR(report.at("max_abs_u").get<double>(), expected, 1e-6);
}

}  // namespace
