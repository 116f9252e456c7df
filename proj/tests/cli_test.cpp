#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "regen/cli.hpp"
#include "test_support.hpp"

namespace regen {
namespace {

using testing::R;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

// Rows of a CSV document as maps from header name to cell.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  const auto lines = split(text, '\n');
  std::vector<std::map<std::string, std::string>> rows;
  if (lines.empty()) return rows;
  const auto header = split(lines[0], ',');
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = split(lines[i], ',');
    std::map<std::string, std::string> row;
    for (std::size_t c = 0; c < header.size() && c < cells.size(); ++c) row[header[c]] = cells[c];
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<std::string> kScenA = {"--k", "5", "--d1", "8", "--d2", "6"};
const std::vector<std::string> kSmallA = {"--k", "2", "--d1", "2", "--d2", "1", "--kprime", "2"};
const std::vector<std::string> kSmallB = {"--k", "3", "--d1", "1", "--d2", "2", "--kprime", "2"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

TEST(CliPointTest, GmsrExample) {
  const auto r = run_cli(with({"point"}, with(kScenA, {"--kprime", "2", "--M", "1", "--c1", "1", "--c2", "2",
                                                       "--kind", "gmsr"})));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("alpha"), "1/5");
  EXPECT_EQ(rows[0].at("gamma"), "11/35");
  EXPECT_EQ(rows[0].at("alpha_dec"), "0.2");
}

TEST(CliPointTest, GmsrAtUnitRatioEqualsMsr) {
  auto gmsr = parse_csv(run_cli(with({"point", "--kind", "gmsr", "--kprime", "1"}, kScenA)).out);
  auto msr = parse_csv(run_cli(with({"point", "--kind", "msr", "--kprime", "1"}, kScenA)).out);
  ASSERT_EQ(gmsr.size(), 1u);
  gmsr[0].erase("kind");
  msr[0].erase("kind");
  EXPECT_EQ(gmsr, msr);
}

TEST(CliPointTest, GmbrLimit) {
  const auto rows = parse_csv(run_cli(with({"point", "--kind", "gmbr-limit"}, kScenA)).out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("alpha"), "4/15");
}

TEST(CliPointTest, JsonFormat) {
  const auto r = run_cli(with({"point", "--kind", "gmbr", "--format", "json"}, kSmallA));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["alpha"], "5/8");
  EXPECT_EQ(j["beta2"], "1/8");
  EXPECT_EQ(j["params"]["scenario"], "A");
}

std::vector<std::string> beta2_column(const std::string& csv) {
  std::vector<std::string> out;
  for (const auto& row : parse_csv(csv)) out.push_back(row.at("beta2"));
  return out;
}

TEST(CliCurveTest, BreakpointsOnly) {
  EXPECT_EQ(beta2_column(run_cli(with({"curve", "--breakpoints-only"}, kSmallA)).out),
            (std::vector<std::string>{"1/8", "1/6"}));
  EXPECT_EQ(beta2_column(run_cli(with({"curve", "--breakpoints-only"}, kSmallB)).out),
            (std::vector<std::string>{"1/7", "1/5", "1/3"}));
}

TEST(CliCurveTest, SampledRowsSpanTheRangeAndRoundTrip) {
  const auto r = run_cli(with({"curve", "--samples", "25"}, kSmallB));
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_GE(rows.size(), 25u);
  EXPECT_EQ(rows.front().at("beta2"), "1/7");
  EXPECT_EQ(rows.back().at("beta2"), "1/2");  // 1.5 * 1/3
  const auto p = testing::make_params(4, 3, 1, 2, 2);
  for (const auto& row : rows) {
    const Rational b2 = parse_rational(row.at("beta2"));
    const Rational alpha = parse_rational(row.at("alpha"));
    EXPECT_EQ(alpha, alpha_min(p, b2));
    EXPECT_EQ(parse_rational(row.at("beta1")), 2 * b2);
    EXPECT_EQ(parse_rational(row.at("gamma")), 4 * b2);
    EXPECT_NEAR(std::stod(row.at("alpha_dec")), to_double(alpha), 1e-11);
  }
}

TEST(CliCurveTest, UnitRatioEndpointsAreMsrAndMbr) {
  const auto rows = parse_csv(run_cli(with({"curve", "--breakpoints-only"}, kScenA)).out);
  const auto msr = msr_point(1, 5, 14);
  const auto mbr = mbr_point(1, 5, 14);
  // Smallest beta2 is the bandwidth-optimal end.
  EXPECT_EQ(parse_rational(rows.front().at("alpha")), mbr.alpha);
  EXPECT_EQ(parse_rational(rows.front().at("gamma")), mbr.gamma);
  EXPECT_EQ(parse_rational(rows.back().at("alpha")), msr.alpha);
  EXPECT_EQ(parse_rational(rows.back().at("gamma")), msr.gamma);
}

std::vector<Rational> eta_column(const std::string& csv) {
  std::vector<Rational> out;
  for (const auto& row : parse_csv(csv)) out.push_back(parse_rational(row.at("eta")));
  return out;
}

TEST(CliRatioTest, EtaIsOneAtThreshold) {
  const auto r = run_cli(with({"ratio", "--kind", "msr", "--cost-ratio", "2"}, kScenA));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto etas = eta_column(r.out);
  ASSERT_EQ(etas.size(), 20u);
  for (const auto& e : etas) EXPECT_EQ(e, R(1));
}

TEST(CliRatioTest, EtaDecreasesTowardLimitAboveThreshold) {
  const auto etas = eta_column(run_cli(with({"ratio", "--kind", "msr", "--cost-ratio", "4"}, kScenA)).out);
  ASSERT_EQ(etas.size(), 20u);
  EXPECT_EQ(etas.front(), R(1));
  for (std::size_t i = 1; i < etas.size(); ++i) {
    EXPECT_LT(etas[i], etas[i - 1]);
    EXPECT_GT(etas[i], R(5, 8));
  }
}

TEST(CliRatioTest, ScenarioBMbrBelowThresholdCostsMore) {
  const auto etas = eta_column(run_cli({"ratio", "--k", "5", "--d1", "4", "--d2", "10", "--kind", "mbr",
                                        "--cost-ratio", "3/2", "--kprime-range", "1..10"})
                                   .out);
  ASSERT_EQ(etas.size(), 10u);
  EXPECT_EQ(etas.front(), R(1));
  for (std::size_t i = 1; i < etas.size(); ++i) EXPECT_GT(etas[i], R(1));
}

TEST(CliRatioTest, RepeatedCostRatios) {
  const auto rows = parse_csv(
      run_cli(with({"ratio", "--kprime-range", "1..3", "--cost-ratio", "2", "--cost-ratio", "4"}, kScenA)).out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].at("cost_ratio"), "2");
  EXPECT_EQ(rows[3].at("cost_ratio"), "4");
  EXPECT_EQ(rows[2].at("kprime"), "3");
  EXPECT_EQ(rows[0].at("rho"), "1");
}

TEST(CliThresholdTest, Rows) {
  auto rows = parse_csv(run_cli(with({"threshold", "--c2", "4"}, kScenA)).out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].at("threshold"), "2");
  EXPECT_EQ(rows[0].at("eta_limit"), "5/8");
  EXPECT_EQ(rows[1].at("threshold"), "4/3");
  rows = parse_csv(run_cli({"threshold", "--k", "5", "--d1", "4", "--d2", "10"}).out);
  EXPECT_EQ(rows[0].at("threshold"), "NA");
  EXPECT_EQ(rows[1].at("threshold"), "2");
  EXPECT_EQ(rows[1].at("scenario"), "B");
}

TEST(CliVerifyTest, SinglePointAgrees) {
  const auto r = run_cli(with({"verify", "--beta2", "3/20"}, kSmallA));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("alpha_closed=11/20 alpha_oracle=11/20"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mismatches=0"), std::string::npos);
}

TEST(CliVerifyTest, CorruptedClosedFormExitsOne) {
  const auto p = testing::make_params(4, 2, 2, 1, 2);
  std::ostringstream out;
  const int code = cli::cmd_verify({p}, {R(3, 20)}, cli::Format::Csv, out,
                                   [](const SystemParams& q, const Rational& b) { return alpha_min(q, b) * 2; });
  EXPECT_EQ(code, cli::kExitMismatch);
  EXPECT_NE(out.str().find("mismatch:"), std::string::npos);
}

TEST(CliVerifyTest, JsonReport) {
  const auto r = run_cli(with({"verify", "--format", "json"}, kSmallB));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["configs"], 1);
  EXPECT_EQ(j["mismatches"], 0);
  EXPECT_EQ(j["points"], j["agreements"]);
}

TEST(CliExitCodeTest, UsageAndValidationErrors) {
  auto r = run_cli({"point", "--k", "5", "--d1", "2", "--d2", "1"});  // d < k
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: InvalidDegree", 0), 0u) << r.err;
  r = run_cli(with({"point", "--c1", "3", "--c2", "1"}, kScenA));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InvalidCostOrder"), std::string::npos);
  EXPECT_EQ(run_cli({"point", "--k", "2"}).code, 2);
  EXPECT_EQ(run_cli({"no-such-command"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli(with({"point", "--kind", "bogus"}, kScenA)).code, 2);
  EXPECT_EQ(run_cli(with({"point", "--kprime", "1/2"}, kScenA)).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

cli::SimulateArgs gmbr_args() {
  cli::SimulateArgs a;
  a.alpha_sym = 5;
  a.beta2_sym = 1;
  a.failures = "1..3";
  a.trials = 100;
  a.seed = 7;
  return a;
}

SystemParams sim_params() { return testing::make_params(4, 2, 2, 1, 2, 8); }

TEST(CliSimulateTest, ScaledGmbrPoint) {
  const auto j = cli::simulate_json(sim_params(), gmbr_args());
  EXPECT_GE(j["success_rate"].get<double>(), 0.95);
  EXPECT_EQ(j["trials"].size(), 100u);
  EXPECT_EQ(j["config"]["beta1_sym"], 2);
}

TEST(CliSimulateTest, AtFlagDerivesTheSamePoint) {
  cli::SimulateArgs a;
  a.at = "gmbr";
  a.trials = 3;
  const auto j = cli::simulate_json(testing::make_params(4, 2, 2, 1, 2), a);
  EXPECT_EQ(j["config"]["M"], "8");
  EXPECT_EQ(j["config"]["alpha_sym"], 5);
  EXPECT_EQ(j["config"]["beta2_sym"], 1);
}

TEST(CliSimulateTest, BelowStorageBoundFails) {
  auto a = gmbr_args();
  a.alpha_sym = 3;
  a.trials = 20;
  EXPECT_EQ(cli::simulate_json(sim_params(), a)["success_rate"].get<double>(), 0.0);
}

TEST(CliSimulateTest, SameSeedGivesIdenticalOutput) {
  const std::vector<std::string> args = {"simulate", "--k", "2", "--d1", "2", "--d2", "1", "--kprime", "2",
                                         "--M", "8", "--alpha-sym", "5", "--beta2-sym", "1",
                                         "--failures", "1..3", "--trials", "10", "--seed", "99"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run_cli(with(args, {"--seed", "100"})).out);
}

TEST(CliSimulateTest, SeedFromEnvironment) {
  const std::vector<std::string> args = {"simulate", "--k", "2", "--d1", "2", "--d2", "1", "--kprime", "2",
                                         "--M", "8", "--alpha-sym", "5", "--beta2-sym", "1", "--trials", "2"};
  ::setenv("REGEN_SEED", "1234", 1);
  const auto from_env = run_cli(args);
  ::unsetenv("REGEN_SEED");
  EXPECT_EQ(nlohmann::json::parse(from_env.out)["config"]["seed"], 1234);
  EXPECT_EQ(from_env.out, run_cli(with(args, {"--seed", "1234"})).out);
}

TEST(CliSimulateTest, FractionalFileSizeIsRejected) {
  const auto r = run_cli({"simulate", "--k", "2", "--d1", "2", "--d2", "1", "--kprime", "2", "--M", "1/2",
                          "--alpha-sym", "5", "--beta2-sym", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NonIntegerDownload"), std::string::npos);
}

TEST(CliConfigTest, FileValuesWithFlagOverrides) {
  const auto path = std::filesystem::temp_directory_path() / "regen_cli_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"n": 15, "k": 5, "d1": 8, "d2": 6, "kprime": 2, "M": "1", "C1": 1, "C2": 2})";
  }
  auto rows = parse_csv(run_cli({"point", "--kind", "gmsr", "--config", path.string()}).out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("gamma"), "11/35");
  rows = parse_csv(run_cli({"point", "--kind", "gmsr", "--kprime", "1", "--config", path.string()}).out);
  EXPECT_EQ(rows[0].at("alpha"), "1/5");
  EXPECT_EQ(rows[0].at("gamma"), to_fraction_string(msr_point(1, 5, 14).gamma));
  std::filesystem::remove(path);

  EXPECT_EQ(run_cli({"point", "--config", "/nonexistent/regen.json"}).code, 2);
}

TEST(CliFiguresTest, WritesEveryFile) {
  const auto dir = std::filesystem::temp_directory_path() / "regen_cli_test_figures";
  std::filesystem::remove_all(dir);
  const auto r = run_cli({"paper-figures", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"fig2_gmsr_ratio.csv", "fig3_gmbr_ratio.csv", "fig5_tradeoff_curves.csv",
                           "fig6_eta_vs_kprime.csv", "fig7_gmbr_ratio_scenario_b.csv", "thresholds.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  std::ifstream fig2(dir / "fig2_gmsr_ratio.csv");
  std::stringstream text;
  text << fig2.rdbuf();
  EXPECT_EQ(parse_csv(text.str()).size(), 6u * 20u);
  std::filesystem::remove_all(dir);
}

// The built executable, end to end.
TEST(CliBinaryTest, ExitCodesAndOutput) {
  const std::string exe = REGEN_CLI_PATH;
  auto shell = [&](const std::string& args, std::string* output) {
    const std::string cmd = "'" + exe + "' " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) {
      if (output) *output += buf.data();
    }
    const int status = ::pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  std::string out;
  EXPECT_EQ(shell("point --k 5 --d1 8 --d2 6 --kprime 2 --c2 2 --kind gmsr", &out), 0);
  EXPECT_NE(out.find("1/5"), std::string::npos);
  EXPECT_EQ(shell("verify --k 2 --d1 2 --d2 1 --kprime 2 --beta2 3/20", nullptr), 0);
  EXPECT_EQ(shell("point --k 9 --d1 1 --d2 1", nullptr), 2);
}

}  // namespace
}  // namespace regen
