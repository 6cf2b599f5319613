#include "qmd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmd {

namespace {

constexpr double kJacobiOffThreshold = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

void require_square(const ComplexMatrix& m, const char* who) {
  if (!m.is_square()) {
    std::ostringstream os;
    os << who << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << who << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
}

// Unitary acting on coordinates (p, q) that diagonalizes the Hermitian 2x2
// block [[app, apq], [conj(apq), aqq]]:
//   U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]],  phi = arg(apq).
struct Rotation {
  Complex upp, upq, uqp, uqq;
};

Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;  // e^{i phi}
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex e = std::conj(phase);
  return {c, s, -s * e, c * e};
}

// A <- A U on columns p, q.
void rotate_columns(ComplexMatrix& a, std::size_t p, std::size_t q, const Rotation& u) {
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * u.upp + akq * u.uqp;
    a(k, q) = akp * u.upq + akq * u.uqq;
  }
}

// A <- U† A on rows p, q.
void rotate_rows(ComplexMatrix& a, std::size_t p, std::size_t q, const Rotation& u) {
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(u.upp) * apk + std::conj(u.uqp) * aqk;
    a(q, k) = std::conj(u.upq) * apk + std::conj(u.uqq) * aqk;
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

HermitianOperator projector_from_columns(const EigenDecomposition& eig,
                                         const std::vector<std::size_t>& idx, std::size_t dim) {
  ComplexMatrix p(dim, dim);
  for (std::size_t k : idx) {
    const Ket v = eig.vector(k);
    p += outer(v, v);
  }
  return hermitian_part(p);
}

}  // namespace

// --- ComplexMatrix ---------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(const Ket& v) {
  ComplexMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix t = *this;
  for (auto& z : t.data_) z = std::conj(z);
  return t;
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace");
  Complex s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

Ket ComplexMatrix::col(std::size_t c) const {
  Ket v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Ket operator*(const ComplexMatrix& a, const Ket& v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector product: size mismatch");
  Ket r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) r[i] += a(i, k) * v[k];
  return r;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  return (a - b).max_abs();
}

// --- HermitianOperator ----------------------------------------------------------

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tol) {
  require_square(m, "HermitianOperator");
  if (!m.all_finite()) throw InvalidArgument("HermitianOperator: non-finite entry");
  const double dev = max_abs_diff(m, m.adjoint());
  if (dev > tol) {
    std::ostringstream os;
    os << "operator is not Hermitian (max |A - A^dagger| = " << dev << ")";
    throw NotHermitianError(os.str(), dev);
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  return HermitianOperator(ComplexMatrix(dim, dim));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return HermitianOperator(ComplexMatrix::identity(dim));
}

HermitianOperator HermitianOperator::projector(const Ket& v) { return hermitian_part(outer(v, v)); }

double HermitianOperator::expectation(const Ket& v) const {
  return inner(v, m_ * v).real();
}

HermitianOperator HermitianOperator::transpose() const { return hermitian_part(m_.transpose()); }

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  m_ -= o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianOperator hermitian_part(const ComplexMatrix& a) {
  require_square(a, "hermitian_part");
  return HermitianOperator((a + a.adjoint()) * 0.5);
}

HermitianOperator congruence(const ComplexMatrix& a, const HermitianOperator& x) {
  return hermitian_part(a * x.matrix() * a.adjoint());
}

// --- kets -------------------------------------------------------------------------

Complex inner(const Ket& a, const Ket& b) {
  if (a.size() != b.size()) throw DimensionError("inner: size mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const Ket& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Ket normalized(const Ket& v) {
  const double n = norm(v);
  if (n == 0.0) throw InvalidArgument("normalized: zero vector");
  Ket r = v;
  for (auto& z : r) z /= n;
  return r;
}

Ket conj(const Ket& v) {
  Ket r = v;
  for (auto& z : r) z = std::conj(z);
  return r;
}

ComplexMatrix outer(const Ket& a, const Ket& b) {
  ComplexMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

Ket kron(const Ket& a, const Ket& b) {
  Ket r(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
  return r;
}

Ket basis_ket(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("basis_ket: index out of range");
  Ket v(dim);
  v[k] = 1.0;
  return v;
}

Ket qubit_orthogonal(const Ket& v) {
  if (v.size() != 2) throw DimensionError("qubit_orthogonal: expected a qubit vector");
  return {-std::conj(v[1]), std::conj(v[0])};
}

Ket canonical_phase(const Ket& v) {
  for (const auto& z : v) {
    if (std::abs(z) > 1e-12) {
      const Complex phase = std::conj(z) / std::abs(z);
      Ket r = v;
      for (auto& w : r) w *= phase;
      return r;
    }
  }
  return v;
}

// --- operations --------------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep) {
  if (!m.is_square() || m.rows() != dim_a * dim_b) {
    std::ostringstream os;
    os << "partial_trace: matrix " << m.rows() << "x" << m.cols() << " does not act on "
       << dim_a << "x" << dim_b;
    throw DimensionError(os.str());
  }
  if (keep == Subsystem::A) {
    ComplexMatrix r(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k) r(i, j) += m(i * dim_b + k, j * dim_b + k);
    return r;
  }
  ComplexMatrix r(dim_b, dim_b);
  for (std::size_t i = 0; i < dim_b; ++i)
    for (std::size_t j = 0; j < dim_b; ++j)
      for (std::size_t k = 0; k < dim_a; ++k) r(i, j) += m(k * dim_b + i, k * dim_b + j);
  return r;
}

EigenDecomposition hermitian_eig(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(a.frobenius_norm(), 1e-300);

  bool converged = n <= 1;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiOffThreshold * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const Rotation u = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        rotate_columns(a, p, q, u);
        rotate_rows(a, p, q, u);
        rotate_columns(v, p, q, u);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > kJacobiOffThreshold * scale)
    throw ConvergenceError("hermitian_eig: Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& a_in) {
  // Hestenes one-sided Jacobi: rotate column pairs until mutually orthogonal.
  ComplexMatrix a = a_in;
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  auto col_dot = [&](std::size_t i, std::size_t j) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += std::conj(a(k, i)) * a(k, j);
    return s;
  };
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = col_dot(p, p).real();
        const double beta = col_dot(q, q).real();
        const Complex gamma = col_dot(p, q);
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300)
          continue;
        rotated = true;
        rotate_columns(a, p, q, jacobi_rotation(alpha, beta, gamma));
      }
    }
    if (!rotated) break;
  }
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = std::sqrt(std::max(0.0, col_dot(k, k).real()));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

double trace_norm(const ComplexMatrix& a) {
  require_square(a, "trace_norm");
  const auto s = singular_values(a);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

double operator_norm(const ComplexMatrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double min_eigenvalue(const HermitianOperator& h) { return hermitian_eig(h).values.front(); }

double max_eigenvalue(const HermitianOperator& h) { return hermitian_eig(h).values.back(); }

HermitianOperator sqrt_psd(const HermitianOperator& h) {
  const auto eig = hermitian_eig(h);
  const std::size_t n = h.dim();
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double lambda = eig.values[k];
    if (lambda < -kPsdClampTol) {
      std::ostringstream os;
      os << "sqrt_psd: operator has eigenvalue " << lambda;
      throw NotPositiveError(os.str(), lambda);
    }
    lambda = std::max(lambda, 0.0);
    if (lambda == 0.0) continue;
    const Ket v = eig.vector(k);
    r += outer(v, v) * std::sqrt(lambda);
  }
  return hermitian_part(r);
}

HermitianOperator eigenspace_projector(const HermitianOperator& h, double target, double tol) {
  const auto eig = hermitian_eig(h);
  double scale = 1.0;
  for (double lambda : eig.values) scale = std::max(scale, std::abs(lambda));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (std::abs(eig.values[k] - target) <= tol * scale) idx.push_back(k);
  return projector_from_columns(eig, idx, h.dim());
}

HermitianOperator positive_part_projector(const HermitianOperator& h, double threshold) {
  const auto eig = hermitian_eig(h);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (eig.values[k] > threshold) idx.push_back(k);
  return projector_from_columns(eig, idx, h.dim());
}

HermitianOperator support_projector(const HermitianOperator& h, double tol) {
  const auto eig = hermitian_eig(h);
  double scale = 1.0;
  for (double lambda : eig.values) scale = std::max(scale, std::abs(lambda));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (std::abs(eig.values[k]) > tol * scale) idx.push_back(k);
  return projector_from_columns(eig, idx, h.dim());
}

HermitianOperator kernel_projector(const HermitianOperator& h, double tol) {
  return eigenspace_projector(h, 0.0, tol);
}

bool is_projector(const ComplexMatrix& p, double tol) {
  if (!p.is_square()) return false;
  return max_abs_diff(p, p.adjoint()) <= tol && max_abs_diff(p * p, p) <= tol;
}

HermitianOperator subspace_intersection(const HermitianOperator& p, const HermitianOperator& q,
                                        double tol) {
  if (p.dim() != q.dim()) throw DimensionError("subspace_intersection: dimension mismatch");
  if (!is_projector(p.matrix()) || !is_projector(q.matrix()))
    throw InvalidArgument("subspace_intersection: inputs must be orthogonal projectors");
  return eigenspace_projector(p + q, 2.0, tol);
}

std::size_t projector_rank(const HermitianOperator& p) {
  return static_cast<std::size_t>(std::llround(std::max(0.0, p.trace())));
}

ComplexMatrix range_basis(const HermitianOperator& p, double tol) {
  const std::size_t d = p.dim();
  std::vector<Ket> basis;
  for (std::size_t k = 0; k < d; ++k) {
    Ket v = p.matrix() * basis_ket(d, k);
    for (const auto& b : basis) {
      const Complex c = inner(b, v);
      for (std::size_t i = 0; i < d; ++i) v[i] -= c * b[i];
    }
    if (norm(v) > std::sqrt(tol)) basis.push_back(normalized(v));
  }
  ComplexMatrix out(d, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t i = 0; i < d; ++i) out(i, c) = basis[c][i];
  return out;
}

bool operator_leq(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  return min_eigenvalue(b - a) >= -tol;
}

}  // namespace qmd
