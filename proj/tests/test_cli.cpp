#include "qswitch/cli.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qswitch::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s, char skip = '\0') {
  std::istringstream is(s);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != skip) ++n;
  return n;
}

}  // namespace

TEST(Cli, PredictDefault) {
  const Result r = run({"predict"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["terms"]["total"].get<double>(), 1.853553390593, 1e-11);
  EXPECT_EQ(j["config"]["command"], "predict");
  EXPECT_EQ(j["config"]["seed"], 1);
  EXPECT_EQ(j["table"].size(), 16u);
}

TEST(Cli, PredictNoiseAndCsv) {
  const json j = json::parse(run({"predict", "--visibility", "0"}).out);
  EXPECT_NEAR(j["terms"]["total"].get<double>(), 1.25, 1e-12);
  const Result csv = run({"predict", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(count_lines(csv.out), 257u);  // header + 256 rows
}

TEST(Cli, Bound) {
  const json full = json::parse(run({"bound"}).out);
  EXPECT_EQ(full["max"], "7/4");
  EXPECT_EQ(full["enumerated"], 2097152);
  EXPECT_EQ(full["witness"]["evaluation"], "1 + 0 + 3/4 = 7/4");
  EXPECT_TRUE(full["witness"]["is_optimal"].get<bool>());
  const json restricted = json::parse(run({"bound", "--restricted"}).out);
  EXPECT_EQ(restricted["max"], "5/4");
  EXPECT_EQ(restricted["enumerated"], 16384);
}

TEST(Cli, SimulateReportsEstimateAndSignificance) {
  const Result r = run({"simulate", "--shots", "1000000", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_GT(j["significance_sigma"].get<double>(), 40.0);
  EXPECT_EQ(j["counts"]["n_trials"], 1000000);
  EXPECT_EQ(j["config"]["shots"], 1000000);

  const json noisy = json::parse(
      run({"simulate", "--shots", "1000000", "--visibility", "0.98453", "--dephasing", "0.202"}).out);
  EXPECT_NEAR(noisy["estimate"]["total"]["value"].get<double>(), 1.809, 0.005);
}

TEST(Cli, SimulateCsvHasHeaderLine) {
  const Result r = run({"simulate", "--shots", "1000", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  ASSERT_EQ(r.out.rfind("# ", 0), 0u);
  const json header = json::parse(r.out.substr(2, r.out.find('\n') - 2));
  EXPECT_EQ(header["n_trials"], 1000);
  EXPECT_EQ(count_lines(r.out, '#'), 257u);
}

TEST(Cli, OpticsCheck) {
  const Result ok = run({"optics-check", "--visibility", "0.5", "--dump-network"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const json j = json::parse(ok.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["per_setting"].size(), 16u);
  EXPECT_EQ(j["networks"].size(), 4u);

  const Result bad = run({"optics-check", "--corrupt-angle", "0.1"});
  EXPECT_NE(bad.code, 0);
  EXPECT_FALSE(json::parse(bad.out)["pass"].get<bool>());
  EXPECT_EQ(json::parse(bad.err)["error"]["type"], "check_failed");
}

TEST(Cli, SweepCsv) {
  const Result r = run({"sweep", "--grid", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(r.out, '#'), 26u);
  EXPECT_NE(r.out.find("# threshold_visibility gamma=0 v=0.82842712"), std::string::npos);
  EXPECT_NE(r.out.find("gamma=1 v=none"), std::string::npos);

  // Totals increase with v at fixed gamma.
  const json j = json::parse(run({"sweep", "--grid", "5", "--format", "json"}).out);
  for (std::size_t i = 1; i < j["rows"].size(); ++i) {
    if (j["rows"][i]["gamma"] != j["rows"][i - 1]["gamma"]) continue;
    EXPECT_GT(j["rows"][i]["total"].get<double>(), j["rows"][i - 1]["total"].get<double>());
  }
}

TEST(Cli, SpacetimeReferenceAndFile) {
  const json j = json::parse(run({"spacetime"}).out);
  bool found = false;
  for (const auto& p : j["pairs"]) {
    if (p["a"] == "bob_measurement" && p["b"] == "charlie_measurement") {
      EXPECT_EQ(p["separation"], "spacelike");
      found = true;
    }
  }
  EXPECT_TRUE(found);

  const auto path = std::filesystem::temp_directory_path() / "qswitch_events_test.json";
  std::ofstream(path) << R"([{"name":"p","t":0,"position":[0,0,0]},{"name":"q","t":1e-6,"position":[0,0,0]}])";
  const json f = json::parse(run({"spacetime", "--events", path.string()}).out);
  EXPECT_EQ(f["pairs"][0]["separation"], "timelike");
  std::filesystem::remove(path);
}

TEST(Cli, ByteIdenticalReruns) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"simulate", "--shots", "200000", "--seed", "9", "--jitter", "0.02"},
           {"predict", "--jitter", "0.05", "--seed", "3"},
           {"sweep", "--grid", "3", "--jitter", "0.01"}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
  EXPECT_EQ(run({"simulate", "--shots", "300000", "--threads", "1"}).out.size(),
            run({"simulate", "--shots", "300000", "--threads", "4"}).out.size());
}

TEST(Cli, ErrorsAreMachineReadable) {
  const Result usage = run({"predict", "--visibility", "1.5"});
  EXPECT_EQ(usage.code, 2);
  EXPECT_EQ(json::parse(usage.err)["error"]["type"], "usage");

  const Result unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);

  const Result missing = run({"spacetime", "--events", "/nonexistent/events.json"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(json::parse(missing.err)["error"]["type"], "runtime");

  const Result grid = run({"sweep", "--grid", "1"});
  EXPECT_EQ(grid.code, 1);
  EXPECT_EQ(json::parse(grid.err)["error"]["type"], "invalid_argument");
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto dir = std::filesystem::temp_directory_path() / "qswitch_cli_out";
  std::filesystem::create_directories(dir);
  ::setenv(qswitch::cli::kOutputDirEnv, dir.c_str(), 1);
  const Result r = run({"predict", "--output", "p.json"});
  ::unsetenv(qswitch::cli::kOutputDirEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "p.json");
  const json j = json::parse(in);
  EXPECT_EQ(j["config"]["output"], "p.json");
  std::filesystem::remove_all(dir);
}
