#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qmd/io.hpp"
#include "qmd/oracle.hpp"
#include "qmd/perfect.hpp"
#include "qmd/qubit.hpp"

using namespace qmd;

namespace {

Povm two_trine_partner() { return read_povm_file(test::data_path("twotrine_n.json")); }

}  // namespace

TEST(BinaryCheck, FindsPlantedWitness) {
  const Povm m = read_povm_file(test::data_path("witness_m.json"));
  const Povm n = read_povm_file(test::data_path("witness_n.json"));
  const auto w = binary_perfect_check(m, n);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(witness_holds(*w, m, n));
  // The probe fires the certain outcome of the first device with probability one.
  EXPECT_NEAR(apply(m, w->probe)[w->certainty_outcome], 1.0, 1e-12);
  // Swapping the roles breaks the certificate.
  EXPECT_FALSE(witness_holds(*w, n, m));
}

TEST(BinaryCheck, NoWitnessForTiltedProjectiveBases) {
  const Povm m = make_projective_qubit(Ket{1.0, 0.0});
  const Povm n = make_projective_qubit(Ket{std::cos(0.4), std::sin(0.4)});
  EXPECT_FALSE(binary_perfect_check(m, n).has_value());
  // Independent confirmation: the best tester of any kind errs.
  const auto o = oracle_measurement_discrimination({m, n}, {0.5, 0.5}, Scheme::Ancilla, Mode::min_error());
  EXPECT_LT(o.value, 1.0 - 1e-3);
}

TEST(BinaryCheck, RejectsNonBinaryDevices) {
  EXPECT_THROW(binary_perfect_check(make_trine(), make_trine()), InvalidArgument);
}

TEST(SimpleCheck, TwoTrinePairIsNotSimplyDistinguishable) {
  const auto r = simple_scheme_perfect_check(make_trine(), two_trine_partner());
  EXPECT_FALSE(r.probe.has_value());
  EXPECT_NEAR(r.min_value, 1.0 / 6.0, 1e-9);
  EXPECT_TRUE(r.exhaustive);
}

TEST(SimpleCheck, AgreesWithOverlapOracle) {
  std::mt19937_64 g(1);
  for (int i = 0; i < 4; ++i) {
    const Povm m = test::random_povm(g, 2, 3);
    const Povm n = test::random_povm(g, 2, 3);
    const double a = simple_scheme_perfect_check(m, n).min_value;
    const double b = oracle_min_sum_overlap(m, n).value;
    EXPECT_NEAR(a, b, 1e-8);
  }
}

TEST(MinErrorPair, TwoTrinePairHasZeroError) {
  const auto r = minerror_pair(make_trine(), two_trine_partner());
  EXPECT_NEAR(r.p_e, 0.0, 1e-9);
  EXPECT_NEAR(r.cb_value, 2.0, 2e-9);
  const auto d = simple_scheme_distance(make_trine(), two_trine_partner());
  EXPECT_NEAR(d.value, 4.0 / 3.0, 1e-9);
}

TEST(MinErrorPair, AgreesWithSdpOracle) {
  std::mt19937_64 g(2);
  for (int i = 0; i < 5; ++i) {
    const std::size_t outcomes = 2 + static_cast<std::size_t>(i % 2);
    const Povm m = test::random_povm(g, 2, outcomes);
    const Povm n = test::random_povm(g, 2, outcomes);
    const auto r = minerror_pair(m, n);
    const auto o = oracle_measurement_discrimination({m, n}, {0.5, 0.5}, Scheme::Ancilla, Mode::min_error());
    EXPECT_NEAR(1.0 - r.p_e, o.value, 1e-7) << i;
    // The reported sigma attains the reported value.
    EXPECT_NEAR(cb_objective(m, n, r.sigma), r.cb_value, 1e-9);
  }
}

TEST(MinErrorPair, CbObjectiveAtMaximallyMixedState) {
  std::mt19937_64 g(3);
  const Povm m = test::random_povm(g, 3, 2);
  const Povm n = test::random_povm(g, 3, 2);
  const HermitianOperator mixed = HermitianOperator::identity(3) * (1.0 / 3.0);
  double expect = 0.0;
  for (std::size_t j = 0; j < 2; ++j) expect += trace_norm((m[j] - n[j]).matrix()) / 3.0;
  EXPECT_NEAR(cb_objective(m, n, mixed), expect, 1e-12);
  EXPECT_THROW(minerror_pair(m, n, 0.3), InvalidArgument);
  EXPECT_THROW(minerror_pair(m, make_trine()), DimensionError);
}

TEST(MinErrorPair, SimpleDistanceNeverExceedsCbValue) {
  std::mt19937_64 g(4);
  for (int i = 0; i < 3; ++i) {
    const Povm m = test::random_povm(g, 2, 2);
    const Povm n = test::random_povm(g, 2, 2);
    EXPECT_LE(simple_scheme_distance(m, n).value, minerror_pair(m, n).cb_value + 1e-9);
  }
}

TEST(Family, VerifiesWithDefaultAndPermutedAssignments) {
  const Ket phi = normalized(Ket{1.0, Complex(0.0, 1.0), 0.5});
  const auto fam = make_perfect_family(3, 3, phi);
  const auto v = verify_perfect_family(fam, phi);
  EXPECT_TRUE(v.all_passed);
  EXPECT_TRUE(v.injective);
  for (double p : v.p_correct) EXPECT_NEAR(p, 1.0, 1e-12);

  // A wrong reading of the outcomes fails.
  const auto bad = verify_perfect_family(fam, phi, {1, 0, 2});
  EXPECT_FALSE(bad.all_passed);
  const auto dup = verify_perfect_family(fam, phi, {0, 0, 2});
  EXPECT_FALSE(dup.injective);
  EXPECT_THROW(verify_perfect_family(fam, phi, {0, 1}), DimensionError);
}

TEST(Family, OtherProbesFail) {
  const Ket phi{1.0, 0.0, 0.0};
  const auto fam = make_perfect_family(2, 3, phi);
  const auto v = verify_perfect_family(fam, normalized(Ket{1.0, 1.0, 0.0}));
  EXPECT_FALSE(v.all_passed);
}
