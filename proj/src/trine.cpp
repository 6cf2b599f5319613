#include "qmd/trine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmd/qubit.hpp"
#include "qmd/search.hpp"
#include "qmd/strategy.hpp"

namespace qmd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_weight(double q, const char* who) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument(std::string(who) + ": Schmidt weight outside [0,1]");
}

// sqrt(rho) v^* for rho = diag(q, 1-q), normalized.
Ket heralded(const Ket& v, double q) {
  return normalized(Ket{std::sqrt(q) * std::conj(v[0]), std::sqrt(1.0 - q) * std::conj(v[1])});
}

Ket rotated(Ket v, double theta) {
  v[1] *= std::polar(1.0, theta);
  return v;
}

}  // namespace

double canonical_theta(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

double ziman_bound(const Povm& m, const Povm& n, double eta_m, const HermitianOperator& rho) {
  if (m.dim() != n.dim() || m.outcomes() != n.outcomes()) throw DimensionError("ziman_bound: devices differ in shape");
  if (rho.dim() != m.dim()) throw DimensionError("ziman_bound: state has the wrong dimension");
  if (!(eta_m >= 0.0 && eta_m <= 1.0)) throw InvalidArgument("ziman_bound: prior outside [0,1]");
  require_density(rho);
  double total = 0.0;
  for (std::size_t j = 0; j < m.outcomes(); ++j)
    total += trace_norm(sqrt_psd(m[j].transpose()).matrix() * rho.matrix() * sqrt_psd(n[j].transpose()).matrix());
  return 2.0 * std::sqrt(eta_m * (1.0 - eta_m)) * total;
}

double trine_relaxed_bound(const HermitianOperator& rho, double theta) {
  if (rho.dim() != 2) throw DimensionError("trine_relaxed_bound: expected a qubit state");
  require_density(rho);
  const Povm m = make_trine();
  const Povm n = make_trine(theta, true);
  const ComplexMatrix diag{{rho(0, 0), 0.0}, {0.0, rho(1, 1)}};
  const double first = trace_norm(m[0].transpose().matrix() * rho.matrix() * n[0].transpose().matrix());
  const double merged = trace_norm(m[1].transpose().matrix() * diag * n[1].transpose().matrix() * Complex(2.0));
  return 1.5 * (first + merged);
}

double trine_lower_bound(double q, double theta) {
  require_weight(q, "trine_lower_bound");
  // q^2 + 9(1-q)^2 + 6q(1-q)cos(theta) as a sum of two nonnegative terms, so
  // the root stays accurate where the radicand vanishes.
  const double c = std::cos(theta / 2.0);
  const double radicand = (4.0 * q - 3.0) * (4.0 * q - 3.0) + 12.0 * q * (1.0 - q) * c * c;
  return (2.0 * q + std::sqrt(radicand)) / 3.0;
}

double trine_overlap(double q, double theta) {
  require_weight(q, "trine_overlap");
  const Ket m2 = trine_vectors()[1];
  return std::min(1.0, std::abs(inner(heralded(m2, q), heralded(rotated(m2, theta), q))));
}

double trine_overlap_closed_form(double q, double theta) {
  require_weight(q, "trine_overlap_closed_form");
  return std::abs(q + 3.0 * std::polar(1.0, theta) * (1.0 - q)) / (3.0 - 2.0 * q);
}

double trine_protocol_pf(double q, double theta) {
  require_weight(q, "trine_protocol_pf");
  return (2.0 / 3.0) * q + 2.0 * ((3.0 - 2.0 * q) / 6.0) * trine_overlap_closed_form(q, theta);
}

TrineOptimum trine_optimal(double theta) {
  TrineOptimum r;
  r.theta = canonical_theta(theta);
  const double c = std::abs(std::cos(r.theta / 2.0));
  const double ct = std::cos(r.theta);
  const double s3 = std::sqrt(3.0);
  r.q_star = (9.0 - 2.0 * s3 * c - 3.0 * ct) / (10.0 - 6.0 * ct);
  r.p_f = (1.0 + s3 * c + (4.0 - 2.0 * s3 * c) / (5.0 - 3.0 * ct)) / 3.0;

  const ScalarMin num = golden_section_min([&](double q) { return trine_lower_bound(q, r.theta); }, 0.0, 1.0, 1e-10);
  r.q_numeric = num.x;
  r.p_f_numeric = num.value;

  // At theta = 0 the bound is 1 for every q, so only the value is checked.
  const bool flat = 1.0 - ct < 1e-12;
  if (std::abs(r.p_f - r.p_f_numeric) > 1e-9 || (!flat && std::abs(r.q_star - r.q_numeric) > 1e-6)) {
    std::ostringstream os;
    os << "trine_optimal: closed form (q=" << r.q_star << ", p_f=" << r.p_f << ") disagrees with the search (q="
       << r.q_numeric << ", p_f=" << r.p_f_numeric << ") at theta=" << r.theta;
    throw ConvergenceError(os.str());
  }
  return r;
}

Tester trine_tester(double q, double theta) {
  require_weight(q, "trine_tester");
  const Ket probe{std::sqrt(q), 0.0, 0.0, std::sqrt(1.0 - q)};
  const std::vector<std::string> conclusions{kConcludeM, kConcludeN, kFail};
  const auto vs = trine_vectors();
  std::vector<ProtocolBranch> branches;
  branches.push_back({validate_povm(std::vector<HermitianOperator>{HermitianOperator::identity(2)}), {kFail}});
  for (std::size_t j = 1; j < 3; ++j) {
    const UnambiguousResult u =
        unambiguous_pure(make_hypotheses(heralded(vs[j], q), heralded(rotated(vs[j], theta), q), 0.5));
    branches.push_back({u.povm.as_povm(), u.povm.conclusions});
  }
  return tester_from_protocol(probe, 2, 2, branches, conclusions);
}

std::vector<TrineSweepRow> trine_sweep(const std::vector<double>& thetas) {
  if (thetas.empty()) throw InvalidArgument("trine_sweep: empty theta grid");
  const Povm m = make_trine();
  std::vector<TrineSweepRow> rows;
  for (double theta : thetas) {
    const TrineOptimum opt = trine_optimal(theta);
    TrineSweepRow row;
    row.theta = theta;
    row.q_star = opt.q_star;
    row.pf_optimal = opt.p_f;
    row.pf_maxent = trine_lower_bound(0.5, theta);
    row.gap = row.pf_maxent - row.pf_optimal;
    const auto rep =
        performance(trine_tester(opt.q_star, theta), pair_hypotheses(m, make_trine(theta, true), 0.5));
    row.tester_pf = rep.p_f;
    row.tester_pe = rep.p_e;
    row.verified = std::abs(rep.p_f - opt.p_f) <= 1e-9 && rep.p_e <= 1e-12;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qmd
