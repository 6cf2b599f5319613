#pragma once

// Perfect distinguishability of measurements and the minimum-error value of a
// measurement pair.

#include <cstddef>
#include <optional>
#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"

namespace qmd {

inline constexpr int kCertifiesNone = -1;

struct PerfectWitness {
  Ket probe;
  std::size_t certainty_outcome = 0;  ///< outcome fired with certainty by the first device
  std::vector<int> certifies;        ///< per outcome: index of the device it identifies, or kCertifiesNone
};

/// Binary measurements are perfectly distinguishable iff some eigenvalue-1
/// space of M_j meets the kernel of N_j. Returns the witness for the first
/// such j.
std::optional<PerfectWitness> binary_perfect_check(const Povm& m, const Povm& n);

/// True when the witness certifies each device with probability one.
bool witness_holds(const PerfectWitness& w, const Povm& m, const Povm& n, double tol = 1e-9);

struct SimpleSchemeCheck {
  std::optional<Ket> probe;  ///< set iff the minimum is <= threshold
  double min_value = 0.0;    ///< min over pure probes of sum_j <M_j><N_j>
  Ket argmin;
  bool exhaustive = true;  ///< false for d > 2 (best found only)
};

SimpleSchemeCheck simple_scheme_perfect_check(const Povm& m, const Povm& n, double threshold = 1e-9);

struct FamilyVerification {
  std::vector<double> p_correct;  ///< p(l | M_l) under the simple tester
  std::vector<bool> passed;
  bool injective = true;
  bool all_passed = false;
};

/// Probes every device with `probe` and reads outcome j as device
/// assignment[j] (default j -> j). Requires m <= n.
FamilyVerification verify_perfect_family(const std::vector<Povm>& measurements, const Ket& probe,
                                         std::vector<std::size_t> assignment = {}, double tol = 1e-9);

struct MinErrorPair {
  double p_e = 0.5;
  double cb_value = 0.0;  ///< max over sigma of sum_j ||sqrt(sigma) (M_j - N_j)^T sqrt(sigma)||_tr
  HermitianOperator sigma;
  bool exhaustive = true;
};

/// Equal-prior minimum error of a measurement pair, p_e = (1 - cb/2)/2.
/// Throws InvalidArgument for unequal priors.
MinErrorPair minerror_pair(const Povm& m, const Povm& n, double eta_m = 0.5);

/// sum_j ||sqrt(sigma) (M_j - N_j)^T sqrt(sigma)||_tr for a given sigma.
double cb_objective(const Povm& m, const Povm& n, const HermitianOperator& sigma);

struct SimpleDistance {
  double value = 0.0;  ///< max over pure probes of sum_j |tr((M_j - N_j) rho)|
  Ket probe;
  bool exhaustive = true;
};

SimpleDistance simple_scheme_distance(const Povm& m, const Povm& n);

}  // namespace qmd
