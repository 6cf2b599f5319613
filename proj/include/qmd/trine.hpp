#pragma once

// Unambiguous discrimination of the trine M from its phase-rotated copy N_theta
// at equal priors, with the probe sqrt(q)|00> + sqrt(1-q)|11>.

#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"
#include "qmd/testers.hpp"

namespace qmd {

/// Theta reduced to [0, 2 pi).
double canonical_theta(double theta);

/// 2 sqrt(eta_m eta_n) sum_j || sqrt(M_j^T) rho sqrt(N_j^T) ||_tr, eta_n = 1 - eta_m.
double ziman_bound(const Povm& m, const Povm& n, double eta_m, const HermitianOperator& rho);

/// The bound after the j = 2, 3 blocks are merged: (3/2)(||M_1^T rho N_1^T|| +
/// ||2 M_2^T diag(rho) N_2^T||). Depends on rho only through its diagonal.
double trine_relaxed_bound(const HermitianOperator& rho, double theta);

/// (2q + sqrt(q^2 + 9(1-q)^2 + 6q(1-q) cos theta)) / 3.
double trine_lower_bound(double q, double theta);

/// |<a|b>| of the normalized conditional ancilla states sqrt(rho) m_2^*,
/// sqrt(rho) n_2^*, built from the vectors.
double trine_overlap(double q, double theta);
/// |q + 3 e^{i theta} (1-q)| / (3 - 2q).
double trine_overlap_closed_form(double q, double theta);

/// (2/3) q + ((3 - 2q)/3) F: outcome 1 always fails, outcomes 2 and 3 fail
/// with the overlap.
double trine_protocol_pf(double q, double theta);

struct TrineOptimum {
  double theta = 0.0;
  double q_star = 0.0;       ///< analytic minimizer
  double p_f = 0.0;          ///< analytic minimum
  double q_numeric = 0.0;    ///< golden-section minimizer of trine_lower_bound
  double p_f_numeric = 0.0;
};

/// Throws ConvergenceError if the numeric minimum disagrees with the closed
/// form by more than 1e-9 in value, or 1e-6 in q where the bound is not flat.
TrineOptimum trine_optimal(double theta);

/// Probe sqrt(q)|00> + sqrt(1-q)|11>; after outcome 1 always "fail", after
/// outcomes 2 and 3 the optimal unambiguous measurement of the two heralded
/// ancilla states.
Tester trine_tester(double q, double theta);

struct TrineSweepRow {
  double theta = 0.0;
  double q_star = 0.0;
  double pf_optimal = 0.0;
  double pf_maxent = 0.0;  ///< trine_lower_bound(1/2, theta)
  double gap = 0.0;
  double tester_pf = 0.0;  ///< trine_tester(q_star, theta) evaluated
  double tester_pe = 0.0;
  bool verified = false;  ///< tester matches pf_optimal within 1e-9 with p_e <= 1e-12
};

/// Throws InvalidArgument on an empty grid.
std::vector<TrineSweepRow> trine_sweep(const std::vector<double>& thetas);

}  // namespace qmd
