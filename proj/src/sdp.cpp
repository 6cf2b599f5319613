#include "qmd/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace qmd {

namespace {

constexpr double kCentering = 0.1;
constexpr double kStepFraction = 0.95;
// Residuals allowed before the final projection; the Schur system loses
// accuracy near the optimum, so tighter targets are not reachable.
constexpr double kResidualTol = 1e-8;
// Degenerate programs can stall before the requested gap; the best iterate is
// still returned when its relative gap is below this.
constexpr double kFallbackGap = 1e-8;
constexpr double kStallStep = 1e-6;

// Re tr(a b).
double trace_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) s += (a(r, c) * b(c, r)).real();
  return s;
}

double max_abs(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) s = std::max(s, std::abs(a(r, c)));
  return s;
}

ComplexMatrix spectral_map(const HermitianOperator& h, double (*f)(double)) {
  const auto eig = hermitian_eig(h);
  const std::size_t n = h.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(eig.values[k]);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out(r, c) += w * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
  }
  return out;
}

ComplexMatrix inverse_pd(const HermitianOperator& h) {
  return spectral_map(h, [](double v) { return 1.0 / v; });
}

// Largest a with x + a dx >= 0 (infinity when dx >= 0), for x > 0.
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  const ComplexMatrix r = spectral_map(hermitian_part(x), [](double v) { return 1.0 / std::sqrt(v); });
  const double lo = min_eigenvalue(hermitian_part(r * dx * r));
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

// Dense solve with partial pivoting; m is overwritten.
std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (!(std::abs(m[piv][c]) > 0.0)) throw ConvergenceError("solve_sdp: singular Schur complement");
    std::swap(m[c], m[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= m[c][k] * x[k];
    x[c] = s / m[c][c];
  }
  return x;
}

}  // namespace

SdpResult solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
  const std::size_t nb = p.block_dims.size();
  const std::size_t nc = p.constraints.size();
  if (nb == 0) throw DimensionError("solve_sdp: no blocks");
  if (p.objective.size() != nb) throw DimensionError("solve_sdp: one objective matrix per block expected");
  // a[i][k] points at A_ik or is null.
  std::vector<std::vector<const ComplexMatrix*>> a(nc, std::vector<const ComplexMatrix*>(nb, nullptr));
  for (std::size_t i = 0; i < nc; ++i)
    for (const auto& [k, m] : p.constraints[i].terms) {
      if (k >= nb || m.dim() != p.block_dims[k]) throw DimensionError("solve_sdp: constraint term has the wrong shape");
      if (a[i][k]) throw DimensionError("solve_sdp: repeated block in one constraint");
      a[i][k] = &m.matrix();
    }
  std::size_t total = 0;
  double c_scale = 1.0;
  for (std::size_t k = 0; k < nb; ++k) {
    if (p.objective[k].dim() != p.block_dims[k]) throw DimensionError("solve_sdp: objective block has the wrong shape");
    total += p.block_dims[k];
    c_scale = std::max(c_scale, 1.0 + max_abs(p.objective[k].matrix()));
  }
  double b_scale = 1.0;
  for (const auto& con : p.constraints) b_scale = std::max(b_scale, 1.0 + std::abs(con.rhs));
  if (!p.interior.empty()) {
    if (p.interior.size() != nb) throw DimensionError("solve_sdp: one interior block per block expected");
    for (std::size_t k = 0; k < nb; ++k)
      if (p.interior[k].dim() != p.block_dims[k]) throw DimensionError("solve_sdp: interior block has the wrong shape");
    for (std::size_t i = 0; i < nc; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < nb; ++k)
        if (a[i][k]) s += trace_mul(*a[i][k], p.interior[k].matrix());
      if (std::abs(s - p.constraints[i].rhs) > 1e-9 * b_scale)
        throw InvalidArgument("solve_sdp: interior point violates a constraint");
    }
  }

  // Minimize tr(C' X) with C' = -C; the dual is max b.y with sum y A + Z = C'.
  std::vector<ComplexMatrix> x, z, cmin;
  for (std::size_t k = 0; k < nb; ++k) {
    x.push_back(ComplexMatrix::identity(p.block_dims[k]));
    z.push_back(ComplexMatrix::identity(p.block_dims[k]));
    cmin.push_back(p.objective[k].matrix() * Complex(-1.0));
  }
  std::vector<double> y(nc, 0.0);

  // Best iterate meeting the residual targets, kept for when the method
  // stalls on a degenerate program before reaching the requested gap.
  struct Snapshot {
    std::vector<ComplexMatrix> x;
    std::vector<double> y, rp;
    double primal = 0.0, dual = 0.0, rel_gap = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
  };
  Snapshot best;
  const auto finish = [&](Snapshot s) {
    // Least-norm correction X += sum_i u_i A_i with (A A^*) u = rp.
    std::vector<std::vector<double>> gram(nc, std::vector<double>(nc, 0.0));
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t k = 0; k < nb; ++k)
          if (a[i][k] && a[j][k]) gram[i][j] += trace_mul(*a[i][k], *a[j][k]);
    const std::vector<double> u = solve_dense(std::move(gram), s.rp);
    SdpResult out;
    for (std::size_t k = 0; k < nb; ++k) {
      for (std::size_t i = 0; i < nc; ++i)
        if (a[i][k]) s.x[k] += *a[i][k] * Complex(u[i]);
      out.x.push_back(hermitian_part(s.x[k]));
    }
    if (!p.interior.empty()) {
      // The projection can leave eigenvalues of order -rp; mix toward the
      // interior point just enough to remove them. Equalities are kept.
      double lambda = 0.0;
      for (std::size_t k = 0; k < nb; ++k) {
        const double neg = -min_eigenvalue(out.x[k]);
        const double room = min_eigenvalue(p.interior[k]);
        if (neg > 0.0 && room > 0.0) lambda = std::max(lambda, 2.0 * neg / (2.0 * neg + room));
      }
      if (lambda > 0.0)
        for (std::size_t k = 0; k < nb; ++k) out.x[k] = out.x[k] * (1.0 - lambda) + p.interior[k] * lambda;
    }
    out.y = std::move(s.y);
    out.primal = 0.0;
    for (std::size_t k = 0; k < nb; ++k) out.primal += trace_mul(p.objective[k].matrix(), out.x[k].matrix());
    out.dual = s.dual;
    out.iterations = s.it;
    return out;
  };
  const auto fallback = [&](const std::string& why) {
    if (best.rel_gap <= kFallbackGap) return finish(best);
    std::ostringstream os;
    os << "solve_sdp: " << why << " (best relative gap " << best.rel_gap << ")";
    throw ConvergenceError(os.str());
  };

  for (std::size_t it = 0;; ++it) {
    std::vector<double> rp(nc);
    double rp_max = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < nb; ++k)
        if (a[i][k]) s += trace_mul(*a[i][k], x[k]);
      rp[i] = p.constraints[i].rhs - s;
      rp_max = std::max(rp_max, std::abs(rp[i]));
    }
    std::vector<ComplexMatrix> rd(nb);
    double rd_max = 0.0;
    double gap = 0.0;
    double primal = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      rd[k] = cmin[k] - z[k];
      for (std::size_t i = 0; i < nc; ++i)
        if (a[i][k]) rd[k] -= *a[i][k] * Complex(y[i]);
      rd_max = std::max(rd_max, max_abs(rd[k]));
      gap += trace_mul(x[k], z[k]);
      primal += trace_mul(p.objective[k].matrix(), x[k]);
    }
    double dual = 0.0;
    for (std::size_t i = 0; i < nc; ++i) dual -= p.constraints[i].rhs * y[i];
    if (!std::isfinite(gap) || !std::isfinite(rp_max) || !std::isfinite(rd_max)) return fallback("iterate broke down");
    const double rel_gap = std::abs(primal - dual) / (1.0 + std::abs(primal) + std::abs(dual));
    const bool gap_ok = rel_gap <= opt.tolerance && rd_max <= kResidualTol * c_scale;
    if (rp_max <= kResidualTol * b_scale && rd_max <= kResidualTol * c_scale && rel_gap < best.rel_gap) {
      best = {x, y, rp, primal, dual, rel_gap, it};
      if (gap_ok) return finish(best);
    }
    if (it >= opt.max_iterations) {
      std::ostringstream os;
      os << "no convergence after " << it << " iterations (gap " << primal - dual << ", residuals " << rp_max
         << ", " << rd_max << ")";
      return fallback(os.str());
    }

    // Numerical breakdown inside a step ends the iteration.
    try {
      const double mu = kCentering * gap / static_cast<double>(total);
      std::vector<ComplexMatrix> zinv(nb), base(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        zinv[k] = inverse_pd(hermitian_part(z[k]));
        base[k] = zinv[k] * Complex(mu) - x[k] - x[k] * rd[k] * zinv[k];
      }
      // Schur complement M_ij = Re sum_k tr(A_ik X_k A_jk Z_k^-1).
      std::vector<std::vector<double>> m(nc, std::vector<double>(nc, 0.0));
      std::vector<double> rhs(nc);
      for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t k = 0; k < nb; ++k) {
          if (!a[j][k]) continue;
          const ComplexMatrix g = x[k] * *a[j][k] * zinv[k];
          for (std::size_t i = 0; i < nc; ++i)
            if (a[i][k]) m[i][j] += trace_mul(*a[i][k], g);
        }
      for (std::size_t i = 0; i < nc; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < nb; ++k)
          if (a[i][k]) s += trace_mul(*a[i][k], base[k]);
        rhs[i] = rp[i] - s;
      }
      const std::vector<double> dy = solve_dense(std::move(m), std::move(rhs));
      if (!std::all_of(dy.begin(), dy.end(), [](double v) { return std::isfinite(v); }))
        throw ConvergenceError("non-finite search direction");

      std::vector<ComplexMatrix> dx(nb), dz(nb);
      double ap = std::numeric_limits<double>::infinity();
      double ad = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < nb; ++k) {
        dz[k] = rd[k];
        for (std::size_t i = 0; i < nc; ++i)
          if (a[i][k]) dz[k] -= *a[i][k] * Complex(dy[i]);
        dx[k] = hermitian_part(zinv[k] * Complex(mu) - x[k] - x[k] * dz[k] * zinv[k]).matrix();
        ap = std::min(ap, max_step(x[k], dx[k]));
        ad = std::min(ad, max_step(z[k], dz[k]));
      }
      if (!(std::max(ap, ad) >= kStallStep)) throw ConvergenceError("step length collapsed");
      ap = std::min(1.0, kStepFraction * ap);
      ad = std::min(1.0, kStepFraction * ad);
      for (std::size_t k = 0; k < nb; ++k) {
        x[k] += dx[k] * Complex(ap);
        z[k] = hermitian_part(z[k] + dz[k] * Complex(ad)).matrix();
      }
      for (std::size_t i = 0; i < nc; ++i) y[i] += ad * dy[i];
    } catch (const Error& e) {
      return fallback(e.what());
    }
  }
}

}  // namespace qmd
