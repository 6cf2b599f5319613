#pragma once

// Removal of the subspace on which two measurements agree with certainty, and
// the filter specialization.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"
#include "qmd/perfect.hpp"
#include "qmd/testers.hpp"

namespace qmd {

struct ReductionResult {
  std::vector<HermitianOperator> q_projectors;  ///< Q_j: eigenvalue-1 space shared by M_j and N_j
  HermitianOperator p_projector;                ///< P = sum_j Q_j
  std::size_t original_dim = 0;
  std::size_t reduced_dim = 0;
  ComplexMatrix embedding;  ///< isometry V (original_dim x reduced_dim) onto range(I - P)
  /// V^dagger M_j V and V^dagger N_j V; absent when reduced_dim == 0.
  std::optional<std::pair<Povm, Povm>> reduced_pair;
  bool identical_on_support = false;  ///< P = I: no test does better than chance
  bool is_identity() const { return reduced_dim == original_dim; }
};

ReductionResult reduce_pair(const Povm& m, const Povm& n);

struct FilterReduction {
  Ket phi;  ///< phi expressed in the reduced basis
  Ket psi;
  Povm m;  ///< {|phi><phi|, |phi_perp><phi_perp|} on the reduced qubit
  Povm n;
  ReductionResult reduction;
};

/// Filters M_1 = |phi><phi|, N_1 = |psi><psi| on C^d, reduced to a qubit pair.
/// Throws InvalidArgument when phi and psi are parallel.
FilterReduction reduce_filters(const Ket& phi, const Ket& psi);

/// Filter pair with outcome 1 rank one for M and outcome 2 rank one for N.
Povm make_filter(const Ket& v, std::size_t rank_one_outcome = 0);

/// Opposite-outcome filters M_1 = |phi><phi|, N_2 = |psi><psi|. When span{phi,
/// psi} is a proper subspace, a probe orthogonal to both separates them:
/// outcome 2 certifies M, outcome 1 certifies N.
std::optional<PerfectWitness> opposite_filters_witness(const Ket& phi, const Ket& psi);

/// Embeds the blocks of a tester on the reduced space: H = V H~ V^dagger.
Tester lift_tester(const Tester& reduced, const ReductionResult& r);

}  // namespace qmd
