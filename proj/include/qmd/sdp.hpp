#pragma once

// Small dense semidefinite programs over complex Hermitian blocks, solved by a
// primal-dual interior-point method (HKM direction).
//
//   maximize   sum_k tr(C_k X_k)
//   subject to sum_k tr(A_ik X_k) = b_i,  X_k >= 0.

#include <cstddef>
#include <utility>
#include <vector>

#include "qmd/linalg.hpp"

namespace qmd {

struct SdpConstraint {
  std::vector<std::pair<std::size_t, HermitianOperator>> terms;  ///< (block, A_ik); absent blocks are zero
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<std::size_t> block_dims;
  std::vector<HermitianOperator> objective;  ///< C_k, one per block
  std::vector<SdpConstraint> constraints;
  /// Optional point satisfying the constraints with X_k > 0 wherever
  /// possible; when given, the returned X is PSD to rounding.
  std::vector<HermitianOperator> interior;
};

struct SdpOptions {
  double tolerance = 1e-10;  ///< on the relative duality gap
  std::size_t max_iterations = 200;
};

struct SdpResult {
  /// Projected onto the constraints at the end, so equalities hold to
  /// rounding. Without an interior point, eigenvalues may dip below zero by
  /// about the residual tolerance (1e-8).
  std::vector<HermitianOperator> x;
  std::vector<double> y;
  double primal = 0.0;  ///< sum_k tr(C_k X_k) at the returned x
  double dual = 0.0;    ///< upper bound from y
  std::size_t iterations = 0;
};

/// Throws DimensionError for inconsistent shapes. When the method stalls
/// before the requested gap, the best iterate is returned if its relative gap
/// is below 1e-8 (primal and dual show the gap actually reached); otherwise
/// ConvergenceError, which also covers infeasible and unbounded programs.
SdpResult solve_sdp(const SdpProblem& p, const SdpOptions& opt = {});

}  // namespace qmd
