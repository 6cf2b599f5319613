#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "qmd/strategy.hpp"
#include "qmd/testers.hpp"

using namespace qmd;

namespace {

const std::vector<std::string> kMN{kConcludeM, kConcludeN, kFail};

// Random protocol on C^d (x) C^a with two-outcome device branches of random
// three-outcome ancilla measurements.
struct RandomProtocol {
  Ket probe;
  std::vector<ProtocolBranch> branches;
};

RandomProtocol random_protocol(std::mt19937_64& g, std::size_t d, std::size_t a, std::size_t n) {
  RandomProtocol p;
  p.probe = test::random_ket(g, d * a);
  for (std::size_t j = 0; j < n; ++j) p.branches.push_back({test::random_povm(g, a, 3), kMN});
  return p;
}

// <probe| M_j (x) E_k |probe>, summed by conclusion.
std::vector<double> simulate(const RandomProtocol& p, const Povm& m) {
  std::vector<double> out(kMN.size(), 0.0);
  for (std::size_t j = 0; j < m.outcomes(); ++j)
    for (std::size_t k = 0; k < p.branches[j].ancilla_measurement.outcomes(); ++k) {
      const ComplexMatrix op = kron(m[j].matrix(), p.branches[j].ancilla_measurement[k].matrix());
      out[k] += inner(p.probe, op * p.probe).real();
    }
  return out;
}

}  // namespace

TEST(Tester, ProtocolMatchesDirectSimulation) {
  std::mt19937_64 g(1);
  for (auto [d, a] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    const RandomProtocol p = random_protocol(g, d, a, 2);
    const Tester t = tester_from_protocol(p.probe, d, a, p.branches, kMN);
    for (int trial = 0; trial < 3; ++trial) {
      const Povm m = test::random_povm(g, d, 2);
      const auto direct = simulate(p, m);
      const auto via_blocks = conditional_distribution(t, m);
      for (std::size_t c = 0; c < kMN.size(); ++c) EXPECT_NEAR(via_blocks[c], direct[c], 1e-12);
    }
    // The normalization is the reduced probe state on the device side.
    const ComplexMatrix rho = partial_trace(outer(p.probe, p.probe), d, a, Subsystem::A);
    EXPECT_LT(max_abs_diff(t.normalization(), rho), 1e-12);
  }
}

TEST(Tester, ChoiFormAgreesWithBlocks) {
  std::mt19937_64 g(2);
  const RandomProtocol p = random_protocol(g, 2, 2, 3);
  const Tester t = tester_from_protocol(p.probe, 2, 2, p.branches, kMN);
  const Povm m = test::random_povm(g, 2, 3);
  const auto blocks = block_form(t);
  const auto dist = conditional_distribution(t, m);
  for (std::size_t c = 0; c < kMN.size(); ++c) EXPECT_NEAR(choi_form_prob(blocks[c], m), dist[c], 1e-13);
  const Tester back = symmetrize(blocks, kMN, t.normalization(), 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t c = 0; c < kMN.size(); ++c) EXPECT_LT(max_abs_diff(back.block(j, c), t.block(j, c)), 1e-15);
}

TEST(Tester, SymmetrizeDropsOffDiagonalBlocks) {
  // A coherent Choi-form operator: off-diagonal blocks do not change any
  // probability of a block-diagonal device and are discarded.
  const HermitianOperator rho = HermitianOperator::identity(2) * 0.5;
  ComplexMatrix t0 = kron(ComplexMatrix::identity(2), rho.matrix()) * Complex(0.5);
  t0(0, 2) = t0(2, 0) = 0.1;
  const HermitianOperator a(t0);
  const HermitianOperator b = HermitianOperator(kron(ComplexMatrix::identity(2), rho.matrix())) - a;
  const Tester t = symmetrize({a, b}, {kConcludeM, kConcludeN}, rho, 2);
  EXPECT_LT(max_abs_diff(t.block(0, 0), rho * 0.5), 1e-15);
  EXPECT_THROW(symmetrize({a, a}, {kConcludeM, kConcludeN}, rho, 2), InvalidArgument);
}

TEST(Tester, SimpleTesterProbabilities) {
  std::mt19937_64 g(3);
  const Ket v = test::random_ket(g, 2);
  const std::vector<std::vector<double>> q{{1.0, 0.0, 0.0}, {0.25, 0.5, 0.25}};
  const Tester t = simple_tester(HermitianOperator::projector(v), kMN, q);
  const Povm m = test::random_povm(g, 2, 2);
  const auto p = apply(m, v);
  const auto dist = conditional_distribution(t, m);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(dist[c], q[0][c] * p[0] + q[1][c] * p[1], 1e-14);
  EXPECT_THROW(simple_tester(HermitianOperator::projector(v), kMN, {{0.5, 0.6, -0.1}}), InvalidArgument);
  EXPECT_THROW(simple_tester(HermitianOperator::projector(v), kMN, {{0.5, 0.6, 0.0}}), InvalidArgument);
}

TEST(Tester, RejectsInvalidBlocks) {
  const HermitianOperator half = HermitianOperator::identity(2) * 0.25;
  EXPECT_NO_THROW(Tester({"a", "b"}, {{half, half}}));
  EXPECT_THROW(Tester({"a", "a"}, {{half, half}}), InvalidArgument);
  EXPECT_THROW(Tester({"a", "b"}, {{half, half * 2.0}}), InvalidArgument);
  EXPECT_THROW(Tester({"a", "b"}, {{half, half}, {HermitianOperator::projector(basis_ket(2, 0)), HermitianOperator::zero(2)}}),
               InvalidArgument);
  EXPECT_THROW(Tester({"a", "b"}, {{half * 3.0, half * -1.0}}), NotPositiveError);
  EXPECT_THROW(Tester({"a", "b"}, {{half}}), DimensionError);
}

TEST(Tester, PerformanceAccounting) {
  std::mt19937_64 g(4);
  const RandomProtocol p = random_protocol(g, 2, 2, 2);
  const Tester t = tester_from_protocol(p.probe, 2, 2, p.branches, kMN);
  const Povm m = test::random_povm(g, 2, 2);
  const Povm n = test::random_povm(g, 2, 2);
  const auto r = performance(t, {{m, 0.3, kConcludeM}, {n, 0.7, kConcludeN}});
  const auto pm = conditional_distribution(t, m);
  const auto pn = conditional_distribution(t, n);
  EXPECT_NEAR(r.p_s, 0.3 * pm[0] + 0.7 * pn[1], 1e-14);
  EXPECT_NEAR(r.p_f, 0.3 * pm[2] + 0.7 * pn[2], 1e-14);
  EXPECT_NEAR(r.p_s + r.p_e + r.p_f, 1.0, 1e-14);
  EXPECT_THROW(performance(t, {{m, 0.3, kConcludeM}, {n, 0.6, kConcludeN}}), InvalidArgument);
  EXPECT_THROW(performance(t, {{test::random_povm(g, 3, 2), 1.0, kConcludeM}}), DimensionError);
  EXPECT_THROW(conditional_prob(t, m, "nope"), InvalidArgument);
}

TEST(Tester, MixIsAffine) {
  std::mt19937_64 g(5);
  const RandomProtocol p1 = random_protocol(g, 2, 2, 2);
  const RandomProtocol p2 = random_protocol(g, 2, 2, 2);
  const Tester a = tester_from_protocol(p1.probe, 2, 2, p1.branches, kMN);
  const Tester b = tester_from_protocol(p2.probe, 2, 2, p2.branches, kMN);
  const Povm m = test::random_povm(g, 2, 2);
  const auto pa = conditional_distribution(a, m);
  const auto pb = conditional_distribution(b, m);
  const auto pm = conditional_distribution(mix(a, b, 0.2), m);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(pm[c], 0.2 * pa[c] + 0.8 * pb[c], 1e-14);
  EXPECT_THROW(mix(a, b, 1.5), InvalidArgument);
}

TEST(Tester, ProtocolInputChecks) {
  std::mt19937_64 g(6);
  const RandomProtocol p = random_protocol(g, 2, 2, 2);
  EXPECT_THROW(tester_from_protocol(p.probe, 2, 3, p.branches, kMN), DimensionError);
  Ket bad = p.probe;
  bad[0] += 0.5;
  EXPECT_THROW(tester_from_protocol(bad, 2, 2, p.branches, kMN), InvalidArgument);
  auto branches = p.branches;
  branches[0].conclusion_of[0] = "other";
  EXPECT_THROW(tester_from_protocol(p.probe, 2, 2, branches, kMN), InvalidArgument);
}
