#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "qmd/oracle.hpp"
#include "qmd/perfect.hpp"
#include "qmd/qubit.hpp"
#include "qmd/reduction.hpp"

using namespace qmd;

TEST(Reduction, FiltersShrinkToAQubit) {
  std::mt19937_64 g(1);
  for (std::size_t d : {3, 4, 6}) {
    const Ket phi = test::random_ket(g, d);
    const Ket psi = test::random_ket(g, d);
    const Povm m = make_filter(phi);
    const Povm n = make_filter(psi);
    const ReductionResult r = reduce_pair(m, n);
    EXPECT_EQ(r.reduced_dim, 2u);
    EXPECT_EQ(projector_rank(r.p_projector), d - 2);
    EXPECT_FALSE(r.identical_on_support);
    ASSERT_TRUE(r.reduced_pair.has_value());
    const ComplexMatrix& v = r.embedding;
    EXPECT_LT(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(2)), 1e-12);
    EXPECT_LT(max_abs_diff(v * v.adjoint() + r.p_projector.matrix(), ComplexMatrix::identity(d)), 1e-12);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_LT(max_abs_diff(r.reduced_pair->first[j], congruence(v.adjoint(), m[j])), 1e-12);
      EXPECT_LT(max_abs_diff(r.reduced_pair->second[j], congruence(v.adjoint(), n[j])), 1e-12);
      // Q_j is fixed by both effects of outcome j.
      EXPECT_LT(max_abs_diff(m[j].matrix() * r.q_projectors[j].matrix(), r.q_projectors[j]), 1e-10);
      EXPECT_LT(max_abs_diff(n[j].matrix() * r.q_projectors[j].matrix(), r.q_projectors[j]), 1e-10);
    }
  }
}

TEST(Reduction, GenericPairsDoNotReduce) {
  std::mt19937_64 g(2);
  const ReductionResult r = reduce_pair(test::random_povm(g, 3, 2), test::random_povm(g, 3, 2));
  EXPECT_TRUE(r.is_identity());
}

TEST(Reduction, IdenticalDevices) {
  const Povm m = make_filter(Ket{1.0, 0.0, 0.0});
  const ReductionResult r = reduce_pair(m, m);
  EXPECT_TRUE(r.identical_on_support);
  EXPECT_EQ(r.reduced_dim, 0u);
  EXPECT_FALSE(r.reduced_pair.has_value());
  const Tester t = simple_tester(HermitianOperator::identity(2) * 0.5, {"M", "N"}, {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_THROW(lift_tester(t, r), InvalidArgument);
  EXPECT_THROW(reduce_pair(m, make_trine()), DimensionError);
}

TEST(Reduction, LiftingPreservesConditionalProbabilities) {
  std::mt19937_64 g(3);
  for (std::size_t d : {3, 5}) {
    const Ket phi = test::random_ket(g, d);
    const Ket psi = test::random_ket(g, d);
    const FilterReduction fr = reduce_filters(phi, psi);
    // Any tester on the reduced qubit, here one from an entangled protocol.
    const Ket probe = test::random_ket(g, 4);
    const std::vector<std::string> concl{"M", "N", "fail"};
    const std::vector<ProtocolBranch> br{{test::random_povm(g, 2, 3), concl}, {test::random_povm(g, 2, 3), concl}};
    const Tester small = tester_from_protocol(probe, 2, 2, br, concl);
    const Tester big = lift_tester(small, fr.reduction);
    EXPECT_EQ(big.dim(), d);
    const auto a = conditional_distribution(small, fr.m);
    const auto b = conditional_distribution(big, make_filter(phi));
    const auto c = conditional_distribution(small, fr.n);
    const auto e = conditional_distribution(big, make_filter(psi));
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(a[k], b[k], 1e-12);
      EXPECT_NEAR(c[k], e[k], 1e-12);
    }
  }
}

TEST(Reduction, ReducedFiltersKeepOverlap) {
  std::mt19937_64 g(4);
  const Ket phi = test::random_ket(g, 4);
  const Ket psi = test::random_ket(g, 4);
  const FilterReduction fr = reduce_filters(phi, psi);
  EXPECT_NEAR(std::abs(inner(fr.phi, fr.psi)), std::abs(inner(phi, psi)), 1e-12);
  EXPECT_LT(max_abs_diff(fr.m[0], HermitianOperator::projector(fr.phi)), 1e-12);
  EXPECT_THROW(reduce_filters(phi, phi), InvalidArgument);
}

TEST(Reduction, LiftedOptimumMatchesFullSpaceSdp) {
  std::mt19937_64 g(5);
  const Ket phi = test::random_ket(g, 4);
  const Ket psi = test::random_ket(g, 4);
  const FilterReduction fr = reduce_filters(phi, psi);
  const auto hyps = pair_hypotheses(make_filter(phi), make_filter(psi), 0.5);
  for (const Mode& mode : {Mode::min_error(), Mode::unambiguous()}) {
    const PairSolution s = discriminate_projective_pair(fr.phi, fr.psi, 0.5, mode);
    const auto lifted = performance(lift_tester(s.tester, fr.reduction), hyps);
    const auto o = oracle_measurement_discrimination({make_filter(phi), make_filter(psi)}, {0.5, 0.5}, Scheme::Ancilla,
                                                     mode);
    EXPECT_NEAR(lifted.p_s, o.report.p_s, 1e-8);
    EXPECT_NEAR(lifted.p_f, o.report.p_f, 1e-8);
  }
}

TEST(Filters, Construction) {
  const Ket v = normalized(Ket{1.0, 2.0, 2.0});
  const Povm a = make_filter(v);
  const Povm b = make_filter(v, 1);
  EXPECT_LT(max_abs_diff(a[0], HermitianOperator::projector(v)), 1e-15);
  EXPECT_LT(max_abs_diff(b[1], HermitianOperator::projector(v)), 1e-15);
  EXPECT_THROW(make_filter(v, 2), InvalidArgument);
  EXPECT_THROW(make_filter(Ket{1.0, 1.0, 0.0}), InvalidArgument);
}

TEST(Filters, OppositeOutcomeWitness) {
  std::mt19937_64 g(6);
  const Ket phi = test::random_ket(g, 3);
  const Ket psi = test::random_ket(g, 3);
  const auto w = opposite_filters_witness(phi, psi);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(witness_holds(*w, make_filter(phi, 0), make_filter(psi, 1)));
  // On a qubit the two vectors span everything and no such probe exists.
  EXPECT_FALSE(opposite_filters_witness(test::random_ket(g, 2), test::random_ket(g, 2)).has_value());
}
