#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qmd/cli.hpp"
#include "qmd/io.hpp"

using namespace qmd;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "qmd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(Cli, ValidateGoodFile) {
  const CliRun r = run({"validate", test::data_path("trine.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.json()["valid"].get<bool>());
  EXPECT_EQ(r.json()["outcomes"], 3);
}

TEST(Cli, ValidateReportsViolations) {
  const CliRun inc = run({"validate", test::data_path("incomplete.json")});
  EXPECT_EQ(inc.code, kExitInvalid);
  EXPECT_FALSE(inc.json()["valid"].get<bool>());
  EXPECT_NEAR(inc.json()["magnitude"].get<double>(), 0.5, 1e-12);
  const CliRun neg = run({"validate", test::data_path("non_psd.json")});
  EXPECT_EQ(neg.code, kExitInvalid);
  EXPECT_EQ(neg.json()["violation"], "NotPositive");
  EXPECT_LT(neg.json()["magnitude"].get<double>(), -kPovmTol);
}

TEST(Cli, BadFlags) {
  EXPECT_EQ(run({"discriminate", "--projective", "--F", "1.5"}).code, kExitBadFlags);
  EXPECT_EQ(run({"discriminate", "--projective", "--noisy"}).code, kExitBadFlags);
  EXPECT_EQ(run({"discriminate", "--projective", "--mode", "fixed-failure"}).code, kExitBadFlags);
  EXPECT_EQ(run({"oracle", "--target", "nothing"}).code, kExitBadFlags);
  EXPECT_EQ(run({"frobnicate"}).code, kExitBadFlags);
}

TEST(Cli, NoisyUnambiguousInfeasible) {
  EXPECT_EQ(run({"discriminate", "--noisy", "--mu", "0.8", "--nu", "0.9", "--mode", "unambiguous"}).code,
            kExitInfeasible);
  EXPECT_EQ(run({"discriminate", "--noisy", "--mu", "1", "--nu", "0.9", "--mode", "unambiguous"}).code, kExitOk);
}

TEST(Cli, ProjectiveMinError) {
  const CliRun r = run({"discriminate", "--projective", "--F", "0.6", "--eta", "0.5"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NEAR(r.json()["report"]["p_s"].get<double>(), 0.5 * (1.0 + std::sqrt(1.0 - 0.36)), 1e-12);
}

TEST(Cli, PerfectWitness) {
  const CliRun r = run({"perfect", test::data_path("witness_m.json"), test::data_path("witness_n.json")});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_FALSE(r.json()["binary_witness"].is_null());
}

TEST(Cli, TrineSweepCsv) {
  const CliRun r = run({"trine-sweep", "--steps", "5"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream is(r.out);
  const auto rows = read_trine_csv(is);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_NEAR(rows.back().pf_optimal, 0.5, 1e-11);
}
