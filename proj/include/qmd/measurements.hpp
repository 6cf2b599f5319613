#pragma once

// POVM data model, the standard measurement families used throughout the
// library, Choi representation and the qubit universal-NOT map.

#include <cstddef>
#include <string>
#include <vector>

#include "qmd/linalg.hpp"

namespace qmd {

inline constexpr double kPovmTol = 1e-9;

/// Raised by validate_povm; carries which invariant failed and by how much.
class PovmError : public Error {
 public:
  enum class Kind { Shape, NotHermitian, NotPositive, NotComplete };

  PovmError(Kind kind, const std::string& what, double magnitude, std::size_t effect = 0)
      : Error(what), kind_(kind), magnitude_(magnitude), effect_(effect) {}

  Kind kind() const noexcept { return kind_; }
  /// Hermiticity deviation, most negative eigenvalue, or ||sum M_j - I||_max.
  double magnitude() const noexcept { return magnitude_; }
  /// Offending effect index (NotHermitian / NotPositive only).
  std::size_t effect() const noexcept { return effect_; }

 private:
  Kind kind_;
  double magnitude_;
  std::size_t effect_;
};

const char* to_string(PovmError::Kind kind);

/// A validated n-outcome measurement on C^d. Construct through validate_povm
/// or the family constructors below.
class Povm {
 public:
  std::size_t dim() const noexcept { return dim_; }
  std::size_t outcomes() const noexcept { return effects_.size(); }
  const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }
  const HermitianOperator& operator[](std::size_t j) const { return effects_.at(j); }

 private:
  friend Povm validate_povm(const std::vector<ComplexMatrix>& raw, double tol);
  std::size_t dim_ = 0;
  std::vector<HermitianOperator> effects_;
};

/// Checks shape, hermiticity, positivity and completeness; the first failing
/// check (in that order) is reported. Completeness is checked in max-norm.
Povm validate_povm(const std::vector<ComplexMatrix>& raw, double tol = kPovmTol);
Povm validate_povm(const std::vector<HermitianOperator>& effects, double tol = kPovmTol);

/// Checks that rho is a density operator (PSD, unit trace) within tol.
void require_density(const HermitianOperator& rho, double tol = kPovmTol);

/// Outcome distribution tr(M_j rho). Entries in [-1e-12, 0) are clamped to 0.
std::vector<double> apply(const Povm& m, const HermitianOperator& rho);
/// Outcome distribution for a pure probe.
std::vector<double> apply(const Povm& m, const Ket& probe);

struct ChoiOperator {
  std::size_t n = 0;
  std::size_t d = 0;
  HermitianOperator matrix;  ///< sum_j |j><j| (x) M_j^T on C^n (x) C^d
  bool block_diagonal = true;

  /// The d x d diagonal block belonging to outcome j.
  ComplexMatrix block(std::size_t j) const;
};

ChoiOperator choi(const Povm& m);

/// Gamma(X) = tr(X) I - X on a qubit.
HermitianOperator universal_not(const HermitianOperator& x);

/// {|phi><phi|, |phi_perp><phi_perp|}.
Povm make_projective_qubit(const Ket& phi);
/// M_1 = mu |phi><phi| + (1 - mu) I/2, M_2 = Gamma(M_1).
Povm make_noisy_qubit(const Ket& phi, double mu);
/// The symmetric trine (2/3)|0><0|, (2/3)|v+><v+|, (2/3)|v-><v-|, optionally
/// conjugated by R_theta = diag(1, e^{i theta}).
Povm make_trine(double theta = 0.0, bool rotated = false);
/// Trine vectors |0>, |v+>, |v->, with |v+-> = (|0> +- sqrt(3)|1>)/2.
std::vector<Ket> trine_vectors();

/// Effects M_lj = |phi><phi| for j = l and x_lj (I - |phi><phi|) otherwise.
/// An empty x selects uniform off-diagonal weights 1/(n-1).
std::vector<Povm> make_perfect_family(std::size_t m, std::size_t n, const Ket& phi,
                                      const std::vector<std::vector<double>>& x = {});

}  // namespace qmd
