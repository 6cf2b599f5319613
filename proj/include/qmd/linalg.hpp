#pragma once

// Dense complex linear algebra for the small operators (dimension up to ~16)
// that appear in measurement discrimination: effects, states, tester blocks.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qmd/errors.hpp"

namespace qmd {

using Complex = std::complex<double>;
using Ket = std::vector<Complex>;

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kPsdClampTol = 1e-10;
inline constexpr double kRankTol = 1e-7;

/// Dense row-major complex matrix. A default-constructed matrix is empty
/// (0x0); matrices with zero columns are used for trivial embeddings.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// Column matrix built from a ket.
  static ComplexMatrix column(const Ket& v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  Ket col(std::size_t c) const;

  /// Largest absolute entry.
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend Ket operator*(const ComplexMatrix& a, const Ket& v);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square matrix that is Hermitian up to kHermiticityTol. On construction the
/// input is replaced by (A + A†)/2 so downstream code sees an exactly
/// Hermitian matrix.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m, double tol = kHermiticityTol);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  /// |v><v| (v is not normalized).
  static HermitianOperator projector(const Ket& v);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  operator const ComplexMatrix&() const noexcept { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }
  /// <v|A|v>, real for Hermitian A.
  double expectation(const Ket& v) const;
  HermitianOperator transpose() const;

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);
  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

 private:
  ComplexMatrix m_;
};

/// Hermitian part (A + A†)/2 without any tolerance check.
HermitianOperator hermitian_part(const ComplexMatrix& a);
/// A X A† for Hermitian X, returned as a Hermitian operator.
HermitianOperator congruence(const ComplexMatrix& a, const HermitianOperator& x);

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  ComplexMatrix vectors;       ///< orthonormal eigenvectors as columns

  Ket vector(std::size_t k) const { return vectors.col(k); }
};

// --- kets --------------------------------------------------------------------

Complex inner(const Ket& a, const Ket& b);  ///< <a|b>
double norm(const Ket& v);
Ket normalized(const Ket& v);
Ket conj(const Ket& v);
ComplexMatrix outer(const Ket& a, const Ket& b);  ///< |a><b|
Ket kron(const Ket& a, const Ket& b);
Ket basis_ket(std::size_t dim, std::size_t k);
/// Orthogonal complement of a unit qubit vector, (-b*, a*).
Ket qubit_orthogonal(const Ket& v);
/// Multiplies by a global phase so the first non-negligible amplitude is real
/// and positive.
Ket canonical_phase(const Ket& v);

// --- operations ----------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Partial trace of an operator on C^dA (x) C^dB, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);

/// Cyclic complex Jacobi eigensolver. Eigenvalues ascending.
EigenDecomposition hermitian_eig(const HermitianOperator& h);

/// Singular values (descending) by one-sided Jacobi orthogonalization.
std::vector<double> singular_values(const ComplexMatrix& a);

double trace_norm(const ComplexMatrix& a);
/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

double min_eigenvalue(const HermitianOperator& h);
double max_eigenvalue(const HermitianOperator& h);

/// Principal square root of a positive semidefinite operator. Eigenvalues in
/// [-kPsdClampTol, 0) are clamped to zero; anything more negative throws
/// NotPositiveError.
HermitianOperator sqrt_psd(const HermitianOperator& h);

/// Orthogonal projector onto the span of eigenvectors whose eigenvalue lies
/// within `tol * max(1, ||h||)` of `target`.
HermitianOperator eigenspace_projector(const HermitianOperator& h, double target,
                                       double tol = kRankTol);

/// Projector onto the eigenvectors with eigenvalue strictly above `threshold`.
HermitianOperator positive_part_projector(const HermitianOperator& h, double threshold = 0.0);

/// Projector onto the support (range) of a PSD operator.
HermitianOperator support_projector(const HermitianOperator& h, double tol = kRankTol);
HermitianOperator kernel_projector(const HermitianOperator& h, double tol = kRankTol);

bool is_projector(const ComplexMatrix& p, double tol = 1e-9);

/// Projector onto range(p) ∩ range(q), read off the eigenvalue-2 eigenspace of
/// p + q. Throws InvalidArgument if either input is not a projector.
HermitianOperator subspace_intersection(const HermitianOperator& p, const HermitianOperator& q,
                                        double tol = kRankTol);

/// Rank of a projector (rounded trace).
std::size_t projector_rank(const HermitianOperator& p);

/// Orthonormal basis of range(p) for a projector p, built by Gram-Schmidt over
/// the images of the canonical basis vectors in order. Columns of the result.
ComplexMatrix range_basis(const HermitianOperator& p, double tol = kRankTol);

/// Operator ordering check a <= b within tol (min eigenvalue of b - a).
bool operator_leq(const HermitianOperator& a, const HermitianOperator& b, double tol);

}  // namespace qmd
