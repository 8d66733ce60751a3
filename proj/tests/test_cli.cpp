#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cuckoo_lab/cli.hpp"
#include "json.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cuckoo_lab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const CliResult& r) { return nlohmann::json::parse(r.out); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Cli, ExactD2) {
  const CliResult r = run({"exact", "--n", "2", "--m", "2", "--model", "d2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["command"], "exact");
  EXPECT_DOUBLE_EQ(j["results"]["mu"].get<double>(), 1.875);
  EXPECT_DOUBLE_EQ(j["results"]["stash_expected"].get<double>(), 0.125);
  EXPECT_EQ(j["metadata"]["tool_version"], "1.0.0");
}

TEST(Cli, Asymptotic) {
  const CliResult r = run({"asymptotic", "--alpha", "1", "--model", "d2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json_of(r)["results"]["gamma"].get<double>(), 0.8381, 5e-5);
  const CliResult p = run({"asymptotic", "--alpha", "0.5", "--model", "partitioned", "--beta", "0.45"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_TRUE(json_of(p)["results"].contains("t1"));
}

TEST(Cli, SweepInfersAsymptotic) {
  const CliResult r = run({"sweep", "--model", "d2", "--alpha", "0.1:2.0:0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0].rfind("command,alpha,model,gamma", 0), 0u) << rows[0];
  EXPECT_EQ(rows[1].rfind("asymptotic,0.1,", 0), 0u) << rows[1];
  EXPECT_EQ(rows[20].rfind("asymptotic,2,", 0), 0u) << rows[20];
}

TEST(Cli, SweepExplicitParameter) {
  const CliResult r = run({"sweep", "exact", "--m", "50", "--sweep", "n=10:50:20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 4u);
  const CliResult j = run({"sweep", "exact", "--m", "50", "--sweep", "n=10:30:20", "--format", "json"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(json_of(j).size(), 2u);
}

TEST(Cli, StashSize) {
  const CliResult r = run({"stash-size", "--n", "0", "--m", "1", "--epsilon", "0.5", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("stash_slots"), std::string::npos);
}

TEST(Cli, SimulateCarriesSeed) {
  const CliResult r = run({"simulate", "--n", "20", "--m", "20", "--trials", "10", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["metadata"]["seed"], 5);
  EXPECT_EQ(run({"simulate", "--n", "20", "--m", "20", "--trials", "10", "--seed", "5"}).out, r.out);
}

TEST(Cli, TraceFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "cuckoo_lab_cli_keys.txt";
  std::ofstream(path) << "1\n2\n3\n3\n";
  const CliResult r = run({"trace", "--input", path.string(), "--m", "8", "--repeats", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["results"]["n"], 3);
  const CliResult bad = run({"trace", "--m", "8"});
  EXPECT_EQ(bad.code, 2);
  const CliResult missing = run({"trace", "--input", "/nonexistent/k", "--m", "8"});
  EXPECT_EQ(missing.code, 1);
}

TEST(Cli, Concentration) {
  const CliResult r = run({"concentration", "--n", "100", "--m", "100", "--lambda", "2", "--trials", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_LE(j["results"]["empirical_fraction"].get<double>(), j["results"]["bound"].get<double>());
}

TEST(Cli, RoundSnapsAndReports) {
  EXPECT_EQ(run({"exact", "--n", "3", "--m", "3", "--model", "mixed-det", "--a", "1.5"}).code, 2);
  const CliResult r =
      run({"exact", "--n", "3", "--m", "3", "--model", "mixed-det", "--a", "1.5", "--round"});
  ASSERT_EQ(r.code, 0) << r.err;
  const double eff = json_of(r)["parameters"]["a_effective"].get<double>();
  EXPECT_TRUE(std::abs(eff - 4.0 / 3.0) < 1e-12 || std::abs(eff - 5.0 / 3.0) < 1e-12) << eff;
  const CliResult b =
      run({"exact", "--n", "3", "--m", "5", "--model", "partitioned", "--beta", "0.5", "--round"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_TRUE(json_of(b)["parameters"].contains("beta_effective"));
}

TEST(Cli, ArgumentErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nope"}).code, 2);
  EXPECT_EQ(run({"exact", "--n", "2", "--m", "2", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"exact", "--n", "2", "--m", "2", "--model", "d2", "--beta", "0.5"}).code, 2);
  EXPECT_EQ(run({"exact", "--n", "2", "--m", "2", "--model", "partitioned"}).code, 2);
  EXPECT_EQ(run({"asymptotic", "--alpha", "0"}).code, 2);
  EXPECT_EQ(run({"sweep", "exact", "--n", "2", "--m", "2"}).code, 2);
  EXPECT_EQ(run({"exact", "--n", "2", "--m", "2", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
