#pragma once

// Brute-force searches used as independent references for the analytic
// solvers. They share no formulas with the solvers beyond probability
// evaluation; agreement with a closed form is evidence for both.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"
#include "qmd/strategy.hpp"
#include "qmd/testers.hpp"

namespace qmd {

struct SearchConfig {
  double grid_step_deg = 2.0;
  std::size_t refine_rounds = 4;
  double shrink = 0.25;
  double tolerance = 1e-10;
  std::size_t restarts = 8;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

using ParamList = std::vector<std::pair<std::string, double>>;

struct OracleStateResult {
  double value = 0.0;  ///< p_s (min-error, fixed-failure) or p_f (unambiguous)
  double p_s = 0.0;
  double p_e = 0.0;
  double p_f = 0.0;
  StatePovm povm;
  ParamList params;
};

/// Searches POVMs discriminating qubit states (<= 4 hypotheses). Labels are
/// "M", "N" for two states and "M1".."Mm" otherwise; "fail" is always present.
OracleStateResult oracle_state_povm(const std::vector<HermitianOperator>& states, const std::vector<double>& priors,
                                    const Mode& mode, const SearchConfig& cfg = {});

enum class Scheme { Simple, Ancilla };

const char* to_string(Scheme s);

struct OracleMeasurementResult {
  double value = 0.0;  ///< p_s (min-error) or p_f (unambiguous), as evaluated on the tester
  DiscriminationReport report;
  Tester tester;
  HermitianOperator normalization;  ///< probe state, clipped to an exact density operator
  ParamList params;
};

/// Optimizes testers for measurement discrimination. Simple: grid and compass
/// search over pure qubit probes with a classical decision rule (min-error
/// only). Ancilla: the semidefinite program over all tester blocks, which
/// every ancilla-assisted protocol with a d-dimensional ancilla reaches; all
/// three modes and any number of devices.
OracleMeasurementResult oracle_measurement_discrimination(const std::vector<Povm>& measurements,
                                                          const std::vector<double>& priors, Scheme scheme,
                                                          const Mode& mode, const SearchConfig& cfg = {});

/// Success probability of the ancilla scheme for a fixed probe normalization
/// sigma (pairs only, min-error or unambiguous), with the optimal ancilla
/// measurement after each device outcome.
double ancilla_success(const Povm& m, const Povm& n, const std::vector<double>& priors, const Mode& mode,
                       const HermitianOperator& sigma);

struct OracleOverlapResult {
  double value = 0.0;  ///< min over pure probes of sum_j tr(M_j rho) tr(N_j rho)
  Ket probe;
  double polar = 0.0;
  double azimuth = 0.0;
};

OracleOverlapResult oracle_min_sum_overlap(const Povm& m, const Povm& n, const SearchConfig& cfg = {});

}  // namespace qmd
