#include "qmd/perfect.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qmd/search.hpp"

namespace qmd {

namespace {

constexpr double kBallGridStep = 0.02;
constexpr double kBallFinalStep = 1e-8;
constexpr std::size_t kHighDimRestarts = 12;

void require_same_shape(const Povm& m, const Povm& n, const char* who) {
  if (m.dim() != n.dim() || m.outcomes() != n.outcomes()) {
    std::ostringstream os;
    os << who << ": devices differ in shape (" << m.outcomes() << "x" << m.dim() << " vs " << n.outcomes()
       << "x" << n.dim() << ")";
    throw DimensionError(os.str());
  }
}

// Hermitian 2x2 stored as (a, d real; b = upper off-diagonal).
struct H2 {
  double a, d;
  Complex b;
};

H2 to_h2(const ComplexMatrix& m) { return {m(0, 0).real(), m(1, 1).real(), m(0, 1)}; }

H2 mul_sandwich(const H2& s, const H2& x) {
  // s x s for Hermitian s, x.
  const Complex s00 = s.a, s01 = s.b, s10 = std::conj(s.b), s11 = s.d;
  const Complex x00 = x.a, x01 = x.b, x10 = std::conj(x.b), x11 = x.d;
  const Complex t00 = s00 * x00 + s01 * x10, t01 = s00 * x01 + s01 * x11;
  const Complex t10 = s10 * x00 + s11 * x10, t11 = s10 * x01 + s11 * x11;
  return {(t00 * s00 + t01 * s10).real(), (t10 * s01 + t11 * s11).real(), t00 * s01 + t01 * s11};
}

double trace_norm_h2(const H2& x) {
  const double t = x.a + x.d;
  const double det = x.a * x.d - std::norm(x.b);
  if (det >= 0.0) return std::abs(t);
  return std::sqrt(t * t - 4.0 * det);
}

// sqrt of the qubit state with Bloch vector r (|r| <= 1).
H2 sqrt_bloch(double x, double y, double z) {
  const double r2 = std::min(1.0, x * x + y * y + z * z);
  const double sdet = std::sqrt((1.0 - r2) / 4.0);
  const double norm = std::sqrt(1.0 + 2.0 * sdet);
  return {((1.0 + z) / 2.0 + sdet) / norm, ((1.0 - z) / 2.0 + sdet) / norm, Complex(x, -y) / 2.0 / norm};
}

HermitianOperator bloch_state(double x, double y, double z) {
  return HermitianOperator(ComplexMatrix{{(1.0 + z) / 2.0, Complex(x, -y) / 2.0},
                                         {Complex(x, y) / 2.0, (1.0 - z) / 2.0}});
}

// Unit vector from 2d real parameters.
Ket ket_from_params(const std::vector<double>& p) {
  Ket v(p.size() / 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(p[2 * i], p[2 * i + 1]);
  const double nv = norm(v);
  if (nv < 1e-300) return basis_ket(v.size(), 0);
  for (auto& z : v) z /= nv;
  return v;
}

// Density operator L L^dagger / tr from d^2 real parameters (lower triangle).
HermitianOperator density_from_params(const std::vector<double>& p, std::size_t d) {
  ComplexMatrix l(d, d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      if (i == j) {
        l(i, j) = p[k++];
      } else {
        l(i, j) = Complex(p[k], p[k + 1]);
        k += 2;
      }
    }
  ComplexMatrix rho = l * l.adjoint();
  const double tr = rho.trace().real();
  if (tr < 1e-300) return HermitianOperator(ComplexMatrix::identity(d) * (1.0 / static_cast<double>(d)));
  return hermitian_part(rho * (1.0 / tr));
}

// Maximize a function of a pure state in dimension d > 2 by random restarts.
std::pair<Ket, double> pure_state_maximize(const std::function<double(const Ket&)>& f, std::size_t d) {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> gauss;
  Ket best;
  double best_v = -1e300;
  for (std::size_t r = 0; r < kHighDimRestarts; ++r) {
    std::vector<double> x0(2 * d);
    if (r < d) {
      x0[2 * r] = 1.0;
    } else {
      for (auto& v : x0) v = gauss(rng);
    }
    const auto res = compass_maximize([&](const std::vector<double>& x) { return f(ket_from_params(x)); }, x0,
                                      0.25, 0.5, 40);
    if (res.value > best_v) {
      best_v = res.value;
      best = ket_from_params(res.x);
    }
  }
  return {best, best_v};
}

}  // namespace

std::optional<PerfectWitness> binary_perfect_check(const Povm& m, const Povm& n) {
  if (m.outcomes() != 2 || n.outcomes() != 2) throw InvalidArgument("binary_perfect_check: both devices must be binary");
  require_same_shape(m, n, "binary_perfect_check");
  for (std::size_t j = 0; j < 2; ++j) {
    const HermitianOperator k =
        subspace_intersection(eigenspace_projector(m[j], 1.0), kernel_projector(n[j]));
    if (projector_rank(k) == 0) continue;
    PerfectWitness w;
    w.probe = canonical_phase(normalized(range_basis(k).col(0)));
    w.certainty_outcome = j;
    w.certifies.assign(2, 1);
    w.certifies[j] = 0;
    return w;
  }
  return std::nullopt;
}

bool witness_holds(const PerfectWitness& w, const Povm& m, const Povm& n, double tol) {
  const auto pm = apply(m, w.probe);
  const auto pn = apply(n, w.probe);
  for (std::size_t j = 0; j < w.certifies.size(); ++j) {
    if (w.certifies[j] == 0 && pn[j] > tol) return false;
    if (w.certifies[j] == 1 && pm[j] > tol) return false;
    if (w.certifies[j] == kCertifiesNone && (pm[j] > tol || pn[j] > tol)) return false;
  }
  return true;
}

SimpleSchemeCheck simple_scheme_perfect_check(const Povm& m, const Povm& n, double threshold) {
  require_same_shape(m, n, "simple_scheme_perfect_check");
  const auto f = [&](const Ket& v) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.outcomes(); ++j) s += m[j].expectation(v) * n[j].expectation(v);
    return s;
  };
  SimpleSchemeCheck out;
  if (m.dim() == 2) {
    const SpherePoint p = sphere_minimize(f);
    out.min_value = p.value;
    out.argmin = p.ket();
  } else {
    auto [v, val] = pure_state_maximize([&](const Ket& k) { return -f(k); }, m.dim());
    out.min_value = -val;
    out.argmin = v;
    out.exhaustive = false;
  }
  out.min_value = std::max(out.min_value, 0.0);
  if (out.min_value <= threshold) out.probe = out.argmin;
  return out;
}

FamilyVerification verify_perfect_family(const std::vector<Povm>& measurements, const Ket& probe,
                                         std::vector<std::size_t> assignment, double tol) {
  if (measurements.empty()) throw InvalidArgument("verify_perfect_family: empty family");
  const std::size_t n = measurements.front().outcomes();
  const std::size_t m = measurements.size();
  for (const auto& dev : measurements) require_same_shape(measurements.front(), dev, "verify_perfect_family");
  if (m > n) {
    std::ostringstream os;
    os << "verify_perfect_family: " << m << " devices cannot be perfectly discriminated with " << n << " outcomes";
    throw InvalidArgument(os.str());
  }
  if (assignment.empty())
    for (std::size_t j = 0; j < n; ++j) assignment.push_back(j);
  if (assignment.size() != n) throw DimensionError("verify_perfect_family: one assignment per outcome");

  FamilyVerification out;
  std::vector<std::size_t> seen(m, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (assignment[j] < m) ++seen[assignment[j]];
  out.injective = std::all_of(seen.begin(), seen.end(), [](std::size_t c) { return c <= 1; });

  out.all_passed = out.injective;
  for (std::size_t l = 0; l < m; ++l) {
    const auto p = apply(measurements[l], probe);
    double correct = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (assignment[j] == l) correct += p[j];
    out.p_correct.push_back(correct);
    out.passed.push_back(std::abs(correct - 1.0) <= tol);
    out.all_passed = out.all_passed && out.passed.back();
  }
  return out;
}

double cb_objective(const Povm& m, const Povm& n, const HermitianOperator& sigma) {
  require_same_shape(m, n, "cb_objective");
  const HermitianOperator root = sqrt_psd(sigma);
  double s = 0.0;
  for (std::size_t j = 0; j < m.outcomes(); ++j) {
    const HermitianOperator delta = (m[j] - n[j]).transpose();
    s += trace_norm(congruence(root.matrix(), delta).matrix());
  }
  return s;
}

MinErrorPair minerror_pair(const Povm& m, const Povm& n, double eta_m) {
  require_same_shape(m, n, "minerror_pair");
  if (std::abs(eta_m - 0.5) > 1e-12)
    throw InvalidArgument("minerror_pair: only equal priors are supported; use the oracle for unequal priors");

  MinErrorPair out;
  if (m.dim() == 2) {
    std::vector<H2> deltas;
    for (std::size_t j = 0; j < m.outcomes(); ++j) deltas.push_back(to_h2((m[j] - n[j]).transpose().matrix()));
    const auto objective = [&](double x, double y, double z) {
      const H2 s = sqrt_bloch(x, y, z);
      double v = 0.0;
      for (const auto& dl : deltas) v += trace_norm_h2(mul_sandwich(s, dl));
      return v;
    };
    const int steps = static_cast<int>(std::lround(2.0 / kBallGridStep));
    double bx = 0, by = 0, bz = 0, best = objective(0, 0, 0);
    for (int i = 0; i <= steps; ++i) {
      const double x = -1.0 + i * kBallGridStep;
      for (int k = 0; k <= steps; ++k) {
        const double y = -1.0 + k * kBallGridStep;
        for (int l = 0; l <= steps; ++l) {
          const double z = -1.0 + l * kBallGridStep;
          if (x * x + y * y + z * z > 1.0 + 1e-12) continue;
          const double v = objective(x, y, z);
          if (v > best + 1e-14) {
            best = v;
            bx = x;
            by = y;
            bz = z;
          }
        }
      }
    }
    const auto clipped = [&](const std::vector<double>& p) {
      const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      if (r <= 1.0) return objective(p[0], p[1], p[2]);
      return objective(p[0] / r, p[1] / r, p[2] / r);
    };
    const std::size_t rounds =
        static_cast<std::size_t>(std::ceil(std::log2(kBallGridStep / kBallFinalStep))) + 1;
    const auto res = compass_maximize(clipped, {bx, by, bz}, kBallGridStep / 2.0, 0.5, rounds);
    double x = res.x[0], y = res.x[1], z = res.x[2];
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 1.0) {
      x /= r;
      y /= r;
      z /= r;
    }
    out.sigma = bloch_state(x, y, z);
    out.cb_value = res.value;
  } else {
    const std::size_t d = m.dim();
    std::mt19937_64 rng(20240602);
    std::normal_distribution<double> gauss;
    double best = -1.0;
    std::vector<double> best_x;
    for (std::size_t r = 0; r < kHighDimRestarts; ++r) {
      std::vector<double> x0(d * d, 0.0);
      if (r == 0) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j <= i; ++j) {
            if (i == j) x0[k] = 1.0;
            k += (i == j) ? 1 : 2;
          }
      } else {
        for (auto& v : x0) v = gauss(rng);
      }
      const auto res = compass_maximize(
          [&](const std::vector<double>& x) { return cb_objective(m, n, density_from_params(x, d)); }, x0, 0.25,
          0.5, 30);
      if (res.value > best) {
        best = res.value;
        best_x = res.x;
      }
    }
    out.sigma = density_from_params(best_x, d);
    out.cb_value = best;
    out.exhaustive = false;
  }
  out.cb_value = std::clamp(out.cb_value, 0.0, 2.0);
  out.p_e = 0.5 * (1.0 - 0.5 * out.cb_value);
  return out;
}

SimpleDistance simple_scheme_distance(const Povm& m, const Povm& n) {
  require_same_shape(m, n, "simple_scheme_distance");
  std::vector<HermitianOperator> deltas;
  for (std::size_t j = 0; j < m.outcomes(); ++j) deltas.push_back(m[j] - n[j]);
  const auto f = [&](const Ket& v) {
    double s = 0.0;
    for (const auto& dl : deltas) s += std::abs(dl.expectation(v));
    return s;
  };
  SimpleDistance out;
  if (m.dim() == 2) {
    const SpherePoint p = sphere_maximize(f);
    out.value = p.value;
    out.probe = p.ket();
  } else {
    auto [v, val] = pure_state_maximize(f, m.dim());
    out.value = val;
    out.probe = v;
    out.exhaustive = false;
  }
  return out;
}

}  // namespace qmd
