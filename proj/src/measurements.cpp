#include "qmd/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qmd {

namespace {

constexpr double kProbClamp = 1e-12;

void require_unit(const Ket& v, const char* who) {
  if (std::abs(norm(v) - 1.0) > 1e-10) {
    std::ostringstream os;
    os << who << ": expected a unit vector, norm is " << norm(v);
    throw InvalidArgument(os.str());
  }
}

}  // namespace

const char* to_string(PovmError::Kind kind) {
  switch (kind) {
    case PovmError::Kind::Shape:
      return "Shape";
    case PovmError::Kind::NotHermitian:
      return "NotHermitian";
    case PovmError::Kind::NotPositive:
      return "NotPositive";
    case PovmError::Kind::NotComplete:
      return "NotComplete";
  }
  return "Unknown";
}

Povm validate_povm(const std::vector<ComplexMatrix>& raw, double tol) {
  using K = PovmError::Kind;
  if (raw.empty()) throw PovmError(K::Shape, "POVM has no effects", 0.0);
  const std::size_t d = raw.front().rows();
  if (d == 0) throw PovmError(K::Shape, "POVM effects are empty matrices", 0.0);
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (raw[j].rows() != d || raw[j].cols() != d) {
      std::ostringstream os;
      os << "effect " << j << " is " << raw[j].rows() << "x" << raw[j].cols() << ", expected " << d
         << "x" << d;
      throw PovmError(K::Shape, os.str(), 0.0, j);
    }
    if (!raw[j].all_finite()) throw PovmError(K::Shape, "non-finite effect entry", 0.0, j);
  }

  Povm out;
  out.dim_ = d;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const double dev = max_abs_diff(raw[j], raw[j].adjoint());
    if (dev > tol) {
      std::ostringstream os;
      os << "effect " << j << " is not Hermitian: max |M - M^dagger| = " << dev;
      throw PovmError(K::NotHermitian, os.str(), dev, j);
    }
    out.effects_.push_back(hermitian_part(raw[j]));
  }
  for (std::size_t j = 0; j < out.effects_.size(); ++j) {
    const double lo = min_eigenvalue(out.effects_[j]);
    if (lo < -tol) {
      std::ostringstream os;
      os << "effect " << j << " is not positive: min eigenvalue " << lo;
      throw PovmError(K::NotPositive, os.str(), lo, j);
    }
  }
  ComplexMatrix sum(d, d);
  for (const auto& e : out.effects_) sum += e.matrix();
  const double gap = max_abs_diff(sum, ComplexMatrix::identity(d));
  if (gap > tol) {
    std::ostringstream os;
    os << "effects do not sum to identity: max |sum M_j - I| = " << gap;
    throw PovmError(K::NotComplete, os.str(), gap);
  }
  return out;
}

Povm validate_povm(const std::vector<HermitianOperator>& effects, double tol) {
  std::vector<ComplexMatrix> raw;
  raw.reserve(effects.size());
  for (const auto& e : effects) raw.push_back(e.matrix());
  return validate_povm(raw, tol);
}

void require_density(const HermitianOperator& rho, double tol) {
  if (rho.dim() == 0) throw DimensionError("density operator is empty");
  if (std::abs(rho.trace() - 1.0) > tol) {
    std::ostringstream os;
    os << "density operator has trace " << rho.trace();
    throw InvalidArgument(os.str());
  }
  const double lo = min_eigenvalue(rho);
  if (lo < -tol) {
    std::ostringstream os;
    os << "density operator has negative eigenvalue " << lo;
    throw NotPositiveError(os.str(), lo);
  }
}

std::vector<double> apply(const Povm& m, const HermitianOperator& rho) {
  if (rho.dim() != m.dim()) throw DimensionError("apply: state and measurement dimensions differ");
  require_density(rho);
  std::vector<double> p;
  p.reserve(m.outcomes());
  for (const auto& e : m.effects()) {
    double pj = (e.matrix() * rho.matrix()).trace().real();
    if (pj < 0.0 && pj >= -kProbClamp) pj = 0.0;
    p.push_back(pj);
  }
  return p;
}

std::vector<double> apply(const Povm& m, const Ket& probe) {
  require_unit(probe, "apply");
  return apply(m, HermitianOperator::projector(probe));
}

ComplexMatrix ChoiOperator::block(std::size_t j) const {
  if (j >= n) throw DimensionError("ChoiOperator::block: outcome out of range");
  ComplexMatrix b(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) b(r, c) = matrix(j * d + r, j * d + c);
  return b;
}

ChoiOperator choi(const Povm& m) {
  ChoiOperator out;
  out.n = m.outcomes();
  out.d = m.dim();
  ComplexMatrix big(out.n * out.d, out.n * out.d);
  for (std::size_t j = 0; j < out.n; ++j)
    big += kron(outer(basis_ket(out.n, j), basis_ket(out.n, j)), m[j].matrix().transpose());
  out.matrix = hermitian_part(big);
  return out;
}

HermitianOperator universal_not(const HermitianOperator& x) {
  if (x.dim() != 2) throw DimensionError("universal_not is defined on qubits only");
  return HermitianOperator::identity(2) * x.trace() - x;
}

Povm make_projective_qubit(const Ket& phi) {
  if (phi.size() != 2) throw DimensionError("make_projective_qubit: expected a qubit vector");
  require_unit(phi, "make_projective_qubit");
  const Ket perp = qubit_orthogonal(phi);
  return validate_povm(std::vector<HermitianOperator>{HermitianOperator::projector(phi),
                                                      HermitianOperator::projector(perp)});
}

Povm make_noisy_qubit(const Ket& phi, double mu) {
  if (phi.size() != 2) throw DimensionError("make_noisy_qubit: expected a qubit vector");
  require_unit(phi, "make_noisy_qubit");
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("make_noisy_qubit: visibility outside [0,1]");
  const HermitianOperator m1 =
      HermitianOperator::projector(phi) * mu + HermitianOperator::identity(2) * ((1.0 - mu) / 2.0);
  return validate_povm(std::vector<HermitianOperator>{m1, universal_not(m1)});
}

std::vector<Ket> trine_vectors() {
  const double s = std::sqrt(3.0) / 2.0;
  return {Ket{1.0, 0.0}, Ket{0.5, s}, Ket{0.5, -s}};
}

Povm make_trine(double theta, bool rotated) {
  const Complex phase = rotated ? std::polar(1.0, theta) : Complex{1.0, 0.0};
  std::vector<HermitianOperator> effects;
  for (Ket v : trine_vectors()) {
    v[1] *= phase;
    effects.push_back(HermitianOperator::projector(v) * (2.0 / 3.0));
  }
  return validate_povm(effects);
}

std::vector<Povm> make_perfect_family(std::size_t m, std::size_t n, const Ket& phi,
                                      const std::vector<std::vector<double>>& x) {
  const std::size_t d = phi.size();
  if (d < 2) throw DimensionError("make_perfect_family: dimension must be at least 2");
  require_unit(phi, "make_perfect_family");
  if (m > n) throw InvalidArgument("make_perfect_family: more devices than outcomes");
  if (n < 2) throw InvalidArgument("make_perfect_family: need at least two outcomes");

  std::vector<std::vector<double>> w = x;
  if (w.empty()) w.assign(m, std::vector<double>(n, 1.0 / static_cast<double>(n - 1)));
  if (w.size() != m) throw DimensionError("make_perfect_family: weight table needs one row per device");
  for (std::size_t l = 0; l < m; ++l) {
    if (w[l].size() != n) throw DimensionError("make_perfect_family: weight row has wrong length");
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == l) continue;
      if (!(w[l][j] > 0.0)) throw InvalidArgument("make_perfect_family: off-diagonal weights must be positive");
      total += w[l][j];
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidArgument("make_perfect_family: off-diagonal weights must sum to one");
  }

  const HermitianOperator p = HermitianOperator::projector(phi);
  const HermitianOperator rest = HermitianOperator::identity(d) - p;
  std::vector<Povm> family;
  for (std::size_t l = 0; l < m; ++l) {
    std::vector<HermitianOperator> effects;
    for (std::size_t j = 0; j < n; ++j) effects.push_back(j == l ? p : rest * w[l][j]);
    family.push_back(validate_povm(effects));
  }
  return family;
}

}  // namespace qmd
