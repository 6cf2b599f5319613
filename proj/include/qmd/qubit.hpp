#pragma once

// Pure- and mixed-state discrimination on a qubit, and the entangled protocols
// that turn a state-discrimination POVM into a tester for qubit measurements.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"
#include "qmd/strategy.hpp"
#include "qmd/testers.hpp"

namespace qmd {

struct PureStateHypotheses {
  Ket phi;          ///< hypothesis M
  Ket psi;          ///< hypothesis N
  double eta = 0.5;  ///< prior of phi

  double overlap() const;  ///< F = |<psi|phi>|
};

/// Validates unit qubit vectors and 0 <= eta <= 1; canonicalizes phases.
PureStateHypotheses make_hypotheses(const Ket& phi, const Ket& psi, double eta);
/// Real qubit pair with phi = |0> and <phi|psi> = F.
PureStateHypotheses hypotheses_with_overlap(double overlap, double eta);

struct HelstromResult {
  double p_e = 0.0;
  StatePovm povm;  ///< M, N, fail (fail effect zero)
  /// Ancilla-free probe: eigenvector of Delta = (1-eta)|psi><psi| - eta|phi><phi|
  /// for its largest eigenvalue.
  Ket probe;
};

HelstromResult helstrom_pure(const PureStateHypotheses& h);

struct UnambiguousResult {
  double p_f = 0.0;
  int regime = 2;  ///< 1: N-only, 2: three outcomes, 3: M-only
  StatePovm povm;
};

UnambiguousResult unambiguous_pure(const PureStateHypotheses& h);

struct FixedFailureResult {
  double p_s = 0.0;
  double p_e = 0.0;
  double p_f = 0.0;
  StatePovm povm;
  bool clamped = false;
  std::string note;
};

/// Maximizes p_s at failure rate p_f over POVMs with a rank-one fail effect.
/// Targets above the unambiguous failure rate are clamped to it.
FixedFailureResult fixed_failure_pure(const PureStateHypotheses& h, double p_f);

struct MixedHelstromResult {
  double p_e = 0.0;
  StatePovm povm;  ///< M, N, fail (fail effect zero)
};

MixedHelstromResult helstrom_mixed(const HermitianOperator& rho0, const HermitianOperator& rho1, double eta);

/// Unnormalized (|00> + |11> + ...)/sqrt(d) on C^d (x) C^d.
Ket max_entangled_state(std::size_t d);
/// (|01> - |10>)/sqrt(2).
Ket singlet_state();

/// Maximally entangled probe; after device outcome 1 the ancilla is measured
/// with {E_c^T}, after outcome 2 with {Gamma(E_c)^T}.
Tester measurement_protocol(const StatePovm& e);
/// Singlet probe; outcome 1 -> {Gamma(E_c)}, outcome 2 -> {E_c}. Same
/// conditional probabilities as measurement_protocol.
Tester singlet_protocol(const StatePovm& e);
/// Singlet probe for a pair of qubit measurements; after each outcome j the two
/// heralded ancilla states Gamma(M_j)/2 and Gamma(N_j)/2 are separated by the
/// Helstrom measurement at prior eta.
Tester singlet_helstrom_tester(const Povm& m, const Povm& n, double eta = 0.5);

struct PairSolution {
  DiscriminationReport report;
  Tester tester;
  StatePovm povm;
  std::optional<Tester> simple;  ///< ancilla-free realization when one exists
  std::optional<DiscriminationReport> simple_report;
  std::string method;
  std::string note;
};

std::vector<Hypothesis> pair_hypotheses(const Povm& m, const Povm& n, double eta);

PairSolution discriminate_projective_pair(const Ket& phi, const Ket& psi, double eta, const Mode& mode);
/// Throws InfeasibleError in unambiguous mode when both M_1 and N_1 have full
/// rank.
PairSolution discriminate_noisy_pair(const Ket& phi, double mu, const Ket& psi, double nu, double eta,
                                     const Mode& mode);

struct MultiSolution {
  DiscriminationReport report;
  Tester tester;
  StatePovm povm;
  std::string method;  ///< "helstrom", "square-root" or "oracle"
};

MultiSolution discriminate_multi_projective(const std::vector<Ket>& phis, const std::vector<double>& priors);

/// Square-root measurement for pure states with priors; labels as given.
StatePovm square_root_measurement(const std::vector<Ket>& states, const std::vector<double>& priors,
                                  const std::vector<std::string>& labels);
/// True when some rephasing of the states makes the Gram matrix circulant.
bool gram_circulant_up_to_phases(const std::vector<Ket>& states, double tol = 1e-9);

struct SimpleSchemeResult {
  double p_s = 0.0;
  Ket probe;
  double polar = 0.0;
  double azimuth = 0.0;
  std::vector<std::size_t> assignment;  ///< device index concluded per outcome
  Tester tester;
};

SimpleSchemeResult best_simple_scheme(const std::vector<Povm>& measurements, const std::vector<double>& priors);

}  // namespace qmd
