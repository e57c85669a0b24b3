#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "command.hpp"
#include "execute.hpp"
#include "json.hpp"

using namespace flatpoly_cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string usage_message(std::vector<std::string> args) {
  try {
    parse(args);
  } catch (const UsageError& e) {
    return e.what();
  }
  ADD_FAILURE() << "parse accepted the arguments";
  return {};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("flatpoly_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// =============================================================================
// Parsing
// =============================================================================

TEST(CliParse, SingerExample) {
  const Command c = parse({"singer", "--p", "2"});
  EXPECT_EQ(c.subcommand, "singer");
  EXPECT_EQ(c.primes, (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(c.m, 1u);
}

TEST(CliParse, FlatExample) {
  const Command c = parse({"flat", "--primes", "2,3,5", "--alpha", "1"});
  EXPECT_EQ(c.primes, (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(c.alphas, (std::vector<double>{1.0}));
  EXPECT_EQ(c.grid_mult, 16u);
  EXPECT_EQ(c.format, Format::csv);
}

TEST(CliParse, PrimeRanges) {
  EXPECT_EQ(parse({"beta", "--primes", "2-13"}).primes, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13}));
  EXPECT_EQ(parse({"beta", "--primes", "2,10-12"}).primes, (std::vector<std::uint64_t>{2, 11}));
}

TEST(CliParse, UsageErrorsNameTheFlag) {
  EXPECT_NE(usage_message({"flat", "--primes", "2", "--alpha", "3"}).find("--alpha"), std::string::npos);
  EXPECT_NE(usage_message({"flat", "--primes", "2,4"}).find("--primes"), std::string::npos);
  EXPECT_NE(usage_message({"flat", "--primes", "2", "--grid-mult", "4"}).find("--grid-mult"), std::string::npos);
  EXPECT_NE(usage_message({"singer", "--p", "2", "--bogus"}).find("--bogus"), std::string::npos);
  EXPECT_NE(usage_message({"riesz", "--primes", "2,3", "--format", "csv"}).find("--format"), std::string::npos);
  usage_message({"teleport"});
  usage_message({});
}

TEST(CliParse, CanonicalRoundTrip) {
  const std::vector<std::vector<std::string>> cases{
      {"singer", "--p", "2"},
      {"flat", "--primes", "2-13", "--alpha", "0.5,1,2", "--grid-mult", "32", "--no-timestamp"},
      {"mahler", "--primes", "2,3", "--method", "jensen"},
      {"beta", "--primes", "5", "--format", "json"},
      {"realline", "--primes", "2", "--s", "0.5,1", "--alpha", "1"},
      {"riesz", "--primes", "2,3", "--scales", "1,2", "--unchecked", "--x", "1/7"},
      {"riesz", "--primes", "2,3,5", "--rule", "margin:3", "--coefficients"},
      {"rankone", "--primes", "2,3", "--stages", "2", "--lag", "4", "--sim-stage", "2", "--tau", "1/2"},
  };
  for (const auto& args : cases) {
    const Command c = parse(args);
    const Command again = parse(canonical_args(c));
    EXPECT_EQ(again, c) << canonical(c);
    EXPECT_EQ(canonical(again), canonical(c));
  }
}

TEST(CliParse, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(0.8164965809277261)), 0.8164965809277261);
}

// =============================================================================
// Execution
// =============================================================================

TEST(CliRun, SingerReport) {
  const Result r = run_args({"singer", "--p", "2", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["tool"], "flatpoly");
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_EQ(j["result"]["sets"][0]["set"]["residues"], json::array({0, 1, 3}));
  EXPECT_TRUE(j.contains("tolerances"));
  EXPECT_TRUE(j.contains("version"));
}

TEST(CliRun, FlatCsvRow) {
  const Result r = run_args({"flat", "--primes", "2", "--alpha", "2", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "p,q,alpha,grid,defect_sq,defect_abs,l1,mahler,s3_bound\r");
  EXPECT_EQ(row.rfind("2,7,2,112,0.816496580", 0), 0u) << row;
}

TEST(CliRun, RankOneHeights) {
  const Result r = run_args({"rankone", "--primes", "2,3", "--stages", "2", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["result"]["h"], json::array({4, 76}));
}

TEST(CliRun, ComputationErrorExitsOne) {
  const Result r = run_args({"riesz", "--primes", "2,3", "--scales", "1,2", "--no-timestamp"});
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"]["status"], "precondition");
}

TEST(CliRun, UsageErrorExitsTwo) {
  const Result r = run_args({"flat", "--alpha", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--alpha"), std::string::npos);
}

TEST(CliRun, HelpExitsZero) { EXPECT_EQ(run_args({"--help"}).code, 0); }

TEST(CliRun, ByteIdenticalWithoutTimestamp) {
  const std::vector<std::string> args{"riesz", "--primes", "2,3,5", "--x", "1/7", "--no-timestamp"};
  const Result a = run_args(args);
  const Result b = run_args(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CliRun, PlanFileRoundTrip) {
  const auto plan = temp_path("plan.json");
  const auto report = temp_path("report.json");
  ASSERT_EQ(run_args({"riesz", "--primes", "2,3", "--plan-out", plan.string(), "--no-timestamp"}).code, 0);
  const Result r = run_args({"rankone", "--plan", plan.string(), "-o", report.string(), "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(report));
  EXPECT_EQ(j["result"]["h"], json::array({4, 220}));
  std::filesystem::remove(plan);
  std::filesystem::remove(report);
}
