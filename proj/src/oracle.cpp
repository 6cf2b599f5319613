#include "qmd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qmd/sdp.hpp"
#include "qmd/search.hpp"

namespace qmd {

namespace {

constexpr double kInfeasible = -1e6;

struct Best {
  std::vector<double> x;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t restart = 0;
  std::size_t evaluations = 0;
};

std::size_t rounds_for(const SearchConfig& cfg, double step) {
  std::size_t r = 0;
  while (r < cfg.refine_rounds + 1 && step >= cfg.tolerance) {
    step *= cfg.shrink;
    ++r;
  }
  return std::max<std::size_t>(r, 1);
}

// Compass refinement from each start; the first start wins ties.
Best refine_starts(const std::function<double(const std::vector<double>&)>& f,
                   const std::vector<std::vector<double>>& starts, double step, const SearchConfig& cfg) {
  Best best;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const CompassResult r = compass_maximize(f, starts[s], step, cfg.shrink, rounds_for(cfg, step));
    best.evaluations += r.evaluations;
    if (r.value > best.value + 1e-15) {
      best.x = r.x;
      best.value = r.value;
      best.restart = s;
    }
  }
  return best;
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

// Full (polar, azimuth) grid plus random sphere points, each refined.
Best sphere_search(const std::function<double(const Ket&)>& f, const SearchConfig& cfg) {
  const auto g = [&](const std::vector<double>& x) { return f(bloch_ket(x[0], x[1])); };
  const double step = deg(cfg.grid_step_deg);
  const int np = static_cast<int>(std::lround(180.0 / cfg.grid_step_deg));
  const int na = static_cast<int>(std::lround(360.0 / cfg.grid_step_deg));
  std::vector<double> grid_best{0.0, 0.0};
  double grid_value = -std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  for (int i = 0; i <= np; ++i)
    for (int k = 0; k < na; ++k) {
      if ((i == 0 || i == np) && k > 0) continue;
      const std::vector<double> x{i * step, -std::numbers::pi + (k + 1) * step};
      const double v = g(x);
      ++evals;
      if (v > grid_value + 1e-15) {
        grid_value = v;
        grid_best = x;
      }
    }
  std::vector<std::vector<double>> starts{grid_best};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t r = 0; r < cfg.restarts; ++r)
    starts.push_back({std::acos(1.0 - 2.0 * u(rng)), 2.0 * std::numbers::pi * u(rng) - std::numbers::pi});
  Best b = refine_starts(g, starts, step, cfg);
  b.evaluations += evals;
  return b;
}

std::vector<std::string> hypothesis_labels(std::size_t m) {
  return m == 2 ? std::vector<std::string>{kConcludeM, kConcludeN} : device_labels(m);
}

void require_priors(const std::vector<double>& priors, std::size_t m, const char* who) {
  if (priors.size() != m) throw DimensionError(std::string(who) + ": one prior per hypothesis");
  double total = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(who) + ": prior outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument(std::string(who) + ": priors must sum to one");
}

HermitianOperator inverse_sqrt_on_support(const HermitianOperator& s) {
  const auto eig = hermitian_eig(s);
  const double scale = std::max(1.0, eig.values.back());
  ComplexMatrix out(s.dim(), s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k) {
    if (eig.values[k] <= kRankTol * scale) continue;
    const Ket v = eig.vector(k);
    out += outer(v, v) * (1.0 / std::sqrt(eig.values[k]));
  }
  return hermitian_part(out);
}

// tr(a b), real for Hermitian a and b.
double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

struct Outcome {
  double p_s = 0.0;
  double p_f = 0.0;
};

Outcome score(const StatePovm& povm, const std::vector<HermitianOperator>& states, const std::vector<double>& priors,
              const std::vector<std::string>& labels) {
  Outcome o;
  for (std::size_t k = 0; k < states.size(); ++k) {
    o.p_s += priors[k] * trace_product(povm.effect(labels[k]), states[k]);
    o.p_f += priors[k] * trace_product(povm.effect(kFail), states[k]);
  }
  return o;
}

}  // namespace

void SearchConfig::validate() const {
  if (!(grid_step_deg > 0.0 && grid_step_deg <= 90.0)) throw InvalidArgument("SearchConfig: grid step must be in (0, 90] degrees");
  if (refine_rounds == 0) throw InvalidArgument("SearchConfig: need at least one refinement round");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("SearchConfig: shrink must be in (0, 1)");
  if (!(tolerance > 0.0)) throw InvalidArgument("SearchConfig: tolerance must be positive");
}

const char* to_string(Scheme s) { return s == Scheme::Simple ? "simple" : "ancilla"; }

OracleStateResult oracle_state_povm(const std::vector<HermitianOperator>& states, const std::vector<double>& priors,
                                    const Mode& mode, const SearchConfig& cfg) {
  cfg.validate();
  const std::size_t m = states.size();
  if (m < 2 || m > 4) throw InvalidArgument("oracle_state_povm: need between two and four states");
  for (const auto& s : states) {
    if (s.dim() != 2) throw DimensionError("oracle_state_povm: qubit states only");
    require_density(s);
  }
  require_priors(priors, m, "oracle_state_povm");
  const auto labels = hypothesis_labels(m);
  const HermitianOperator id = HermitianOperator::identity(2);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::function<StatePovm(const std::vector<double>&)> build;
  std::vector<std::vector<double>> starts;
  double step = 0.5;

  switch (mode.kind) {
    case Mode::Kind::MinError: {
      // Rank-one seeds a_k |chi_k><chi_k|, completed by S^{-1/2} (.) S^{-1/2}.
      build = [&, m](const std::vector<double>& x) {
        std::vector<HermitianOperator> g;
        HermitianOperator s = HermitianOperator::zero(2);
        for (std::size_t k = 0; k < m; ++k) {
          g.push_back(HermitianOperator::projector(bloch_ket(x[3 * k], x[3 * k + 1])) * std::exp(x[3 * k + 2]));
          s += g.back();
        }
        const HermitianOperator r = inverse_sqrt_on_support(s);
        StatePovm p;
        p.conclusions = labels;
        for (auto& gk : g) p.effects.push_back(congruence(r.matrix(), gk));
        p.effects.front() += kernel_projector(s);
        p.conclusions.push_back(kFail);
        p.effects.push_back(HermitianOperator::zero(2));
        return p;
      };
      for (std::size_t r = 0; r <= cfg.restarts; ++r) {
        std::vector<double> x;
        for (std::size_t k = 0; k < m; ++k) {
          x.push_back(std::acos(1.0 - 2.0 * uni(rng)));
          x.push_back(2.0 * std::numbers::pi * uni(rng));
          x.push_back(0.0);
        }
        starts.push_back(x);
      }
      break;
    }
    case Mode::Kind::Unambiguous: {
      // E_k = w_k K_k on the kernel of the other states, scaled out to the
      // boundary of E_fail >= 0.
      std::vector<HermitianOperator> kernels;
      for (std::size_t k = 0; k < m; ++k) {
        HermitianOperator others = HermitianOperator::zero(2);
        for (std::size_t l = 0; l < m; ++l)
          if (l != k) others += states[l];
        kernels.push_back(kernel_projector(others));
      }
      build = [&, m, kernels](const std::vector<double>& x) {
        HermitianOperator total = HermitianOperator::zero(2);
        for (std::size_t k = 0; k < m; ++k) total += kernels[k] * (x[k] * x[k]);
        const double top = max_eigenvalue(total);
        const double scale = top > 1e-300 ? 1.0 / top : 0.0;
        StatePovm p;
        p.conclusions = labels;
        HermitianOperator fail = id;
        for (std::size_t k = 0; k < m; ++k) {
          p.effects.push_back(kernels[k] * (scale * x[k] * x[k]));
          fail -= p.effects.back();
        }
        p.conclusions.push_back(kFail);
        p.effects.push_back(fail);
        return p;
      };
      starts.push_back(std::vector<double>(m, 1.0));
      for (std::size_t r = 0; r < cfg.restarts; ++r) {
        std::vector<double> x;
        for (std::size_t k = 0; k < m; ++k) x.push_back(uni(rng));
        starts.push_back(x);
      }
      step = 0.25;
      break;
    }
    case Mode::Kind::FixedFailure: {
      if (m != 2) throw InvalidArgument("oracle_state_povm: fixed-failure search supports pairs only");
      const double target = mode.p_f;
      if (!(target >= 0.0 && target <= 1.0)) throw InvalidArgument("oracle_state_povm: failure target outside [0,1]");
      // Fail effect c L L^dag at the target rate; Helstrom on the residual.
      build = [&, target](const std::vector<double>& x) {
        HermitianOperator fail = HermitianOperator::zero(2);
        if (target > 0.0) {
          ComplexMatrix l(2, 2);
          l(0, 0) = x[0];
          l(1, 1) = x[1];
          l(1, 0) = Complex(x[2], x[3]);
          const HermitianOperator ll = hermitian_part(l * l.adjoint());
          const double w = priors[0] * trace_product(ll, states[0]) + priors[1] * trace_product(ll, states[1]);
          if (!(w > 1e-300)) return StatePovm{};
          fail = ll * (target / w);
          if (max_eigenvalue(fail) > 1.0 + 1e-12) return StatePovm{};
        }
        const HermitianOperator root = sqrt_psd(id - fail);
        const HermitianOperator a = congruence(root.matrix(), states[0] * priors[0]);
        const HermitianOperator b = congruence(root.matrix(), states[1] * priors[1]);
        const HermitianOperator pm = positive_part_projector(a - b, 0.0);
        return StatePovm{{labels[0], labels[1], kFail},
                         {congruence(root.matrix(), pm), congruence(root.matrix(), id - pm), fail}};
      };
      starts.push_back({1.0, 1.0, 0.0, 0.0});
      for (std::size_t r = 0; r < cfg.restarts; ++r)
        starts.push_back({gauss(rng), gauss(rng), gauss(rng), gauss(rng)});
      break;
    }
  }

  const auto objective = [&](const std::vector<double>& x) {
    const StatePovm p = build(x);
    if (p.effects.empty()) return kInfeasible;
    const Outcome o = score(p, states, priors, labels);
    return mode.kind == Mode::Kind::Unambiguous ? -o.p_f : o.p_s;
  };
  const Best best = refine_starts(objective, starts, step, cfg);
  if (best.value <= kInfeasible / 2) throw InfeasibleError("oracle_state_povm: no feasible POVM found");

  OracleStateResult out;
  out.povm = build(best.x);
  out.povm.as_povm();
  const Outcome o = score(out.povm, states, priors, labels);
  out.p_s = o.p_s;
  out.p_f = o.p_f;
  out.p_e = std::max(0.0, 1.0 - o.p_s - o.p_f);
  out.value = mode.kind == Mode::Kind::Unambiguous ? out.p_f : out.p_s;
  out.params.emplace_back("restart", static_cast<double>(best.restart));
  out.params.emplace_back("evaluations", static_cast<double>(best.evaluations));
  for (std::size_t i = 0; i < best.x.size(); ++i) out.params.emplace_back("x" + std::to_string(i), best.x[i]);
  return out;
}

namespace {

struct BranchChoice {
  Povm measurement;
  std::vector<std::string> conclusion_of;
  double success = 0.0;
  double fail = 0.0;
};

// Optimal ancilla measurement after one device outcome, given the two
// weighted conditional ancilla states.
BranchChoice branch_measurement(const HermitianOperator& t0, const HermitianOperator& t1, const Mode& mode,
                                bool build_povm) {
  const std::size_t a = t0.dim();
  const HermitianOperator id = HermitianOperator::identity(a);
  BranchChoice out;
  if (mode.kind == Mode::Kind::MinError) {
    const HermitianOperator p = positive_part_projector(t0 - t1, 0.0);
    out.success = trace_product(p, t0) + trace_product(id - p, t1);
    if (build_povm) {
      out.measurement = validate_povm(std::vector<HermitianOperator>{p, id - p});
      out.conclusion_of = {kConcludeM, kConcludeN};
    }
    return out;
  }
  const HermitianOperator supp = support_projector(t0 + t1);
  const HermitianOperator k0 = subspace_intersection(kernel_projector(t1), supp);
  const HermitianOperator k1 = subspace_intersection(kernel_projector(t0), supp);
  const double a0 = trace_product(k0, t0);
  const double a1 = trace_product(k1, t1);
  const bool has0 = projector_rank(k0) > 0;
  const bool has1 = projector_rank(k1) > 0;
  double w0 = 0.0;
  double w1 = 0.0;
  if (has0 && has1) {
    // w0 K0 + w1 K1 <= I  iff  w1 <= (1 - w0) / (1 - (1 - c) w0), c = ||K1 K0 K1||.
    const double c = std::clamp(max_eigenvalue(congruence(k1.matrix(), k0)), 0.0, 1.0);
    const auto w1_of = [c](double w0v) {
      const double den = 1.0 - (1.0 - c) * w0v;
      return den <= 1e-300 ? 1.0 : std::clamp((1.0 - w0v) / den, 0.0, 1.0);
    };
    const auto gain = [&](double v) { return v * a0 + w1_of(v) * a1; };
    w0 = golden_section_min([&](double v) { return -gain(v); }, 0.0, 1.0, 1e-12).x;
    for (double edge : {0.0, 1.0})
      if (gain(edge) > gain(w0)) w0 = edge;
    w1 = w1_of(w0);
  } else if (has0) {
    w0 = 1.0;
  } else if (has1) {
    w1 = 1.0;
  }
  out.success = w0 * a0 + w1 * a1;
  out.fail = t0.trace() + t1.trace() - out.success;
  if (build_povm) {
    const HermitianOperator e0 = k0 * w0;
    const HermitianOperator e1 = k1 * w1;
    out.measurement = validate_povm(std::vector<HermitianOperator>{e0, e1, id - e0 - e1});
    out.conclusion_of = {kConcludeM, kConcludeN, kFail};
  }
  return out;
}


}  // namespace

OracleMeasurementResult oracle_measurement_discrimination(const std::vector<Povm>& measurements,
                                                          const std::vector<double>& priors, Scheme scheme,
                                                          const Mode& mode, const SearchConfig& cfg) {
  cfg.validate();
  const std::size_t m = measurements.size();
  if (m < 2) throw InvalidArgument("oracle_measurement_discrimination: need at least two devices");
  require_priors(priors, m, "oracle_measurement_discrimination");
  const std::size_t d = measurements.front().dim();
  const std::size_t n = measurements.front().outcomes();
  for (const auto& dev : measurements)
    if (dev.dim() != d || dev.outcomes() != n)
      throw DimensionError("oracle_measurement_discrimination: devices differ in shape");
  const auto labels = hypothesis_labels(m);
  std::vector<std::string> conclusions = labels;
  conclusions.push_back(kFail);
  std::vector<Hypothesis> hyps;
  for (std::size_t l = 0; l < m; ++l) hyps.push_back({measurements[l], priors[l], labels[l]});

  OracleMeasurementResult out;
  if (scheme == Scheme::Simple) {
    if (mode.kind != Mode::Kind::MinError)
      throw InvalidArgument("oracle_measurement_discrimination: the simple scheme search is min-error only");
    if (d != 2) throw DimensionError("oracle_measurement_discrimination: simple scheme search needs qubit devices");
    const auto rule = [&](const Ket& v, std::vector<std::vector<double>>* q) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t arg = 0;
        double top = -1.0;
        for (std::size_t l = 0; l < m; ++l) {
          const double w = priors[l] * measurements[l][j].expectation(v);
          if (w > top + 1e-15) {
            top = w;
            arg = l;
          }
        }
        total += top;
        if (q) {
          std::vector<double> row(m + 1, 0.0);
          row[arg] = 1.0;
          q->push_back(row);
        }
      }
      return total;
    };
    const Best b = sphere_search([&](const Ket& v) { return rule(v, nullptr); }, cfg);
    const Ket probe = bloch_ket(b.x[0], b.x[1]);
    std::vector<std::vector<double>> q;
    rule(probe, &q);
    out.tester = simple_tester(HermitianOperator::projector(probe), conclusions, q);
    double polar = 0.0, azimuth = 0.0;
    bloch_angles(probe, polar, azimuth);
    out.params = {{"polar", polar}, {"azimuth", azimuth}, {"restart", static_cast<double>(b.restart)},
                  {"evaluations", static_cast<double>(b.evaluations)}};
    out.normalization = out.tester.normalization();
  } else {
    // Every tester is realized by some ancilla of dimension d, so the best
    // ancilla scheme is the SDP over tester blocks H_j^(c) >= 0 with
    // sum_c H_j^(c) = rho for every j and tr rho = 1. Unambiguous blocks for
    // hypothesis l live on the common kernel of the other devices' effects.
    if (mode.kind == Mode::Kind::FixedFailure && !(mode.p_f >= 0.0 && mode.p_f <= 1.0))
      throw InvalidArgument("oracle_measurement_discrimination: failure rate outside [0,1]");
    const std::size_t nconc = m + 1;
    SdpProblem sdp;
    sdp.block_dims.push_back(d);
    sdp.objective.push_back(HermitianOperator::zero(d));
    // slot[j][c] is the block index (0 when the block is absent) and iso[j][c]
    // its isometry into C^d.
    std::vector<std::vector<std::size_t>> slot(n, std::vector<std::size_t>(nconc, 0));
    std::vector<std::vector<ComplexMatrix>> iso(n, std::vector<ComplexMatrix>(nconc));
    // At p_f = 0 (p_f = 1) the failure constraint confines the fail
    // (conclusion) blocks to where they change no probability, so those
    // blocks are dropped along with the constraint.
    const bool fixed = mode.kind == Mode::Kind::FixedFailure;
    const bool no_fail = mode.kind == Mode::Kind::MinError || (fixed && mode.p_f == 0.0);
    const bool all_fail = fixed && mode.p_f == 1.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < nconc; ++c) {
        if ((c == m && no_fail) || (c < m && all_fail)) continue;
        ComplexMatrix basis = ComplexMatrix::identity(d);
        if (mode.kind == Mode::Kind::Unambiguous && c < m) {
          HermitianOperator others = HermitianOperator::zero(d);
          for (std::size_t l = 0; l < m; ++l)
            if (l != c) others += measurements[l][j];
          const HermitianOperator ker = kernel_projector(others);
          if (projector_rank(ker) == 0) continue;
          basis = range_basis(ker);
        }
        HermitianOperator gain = HermitianOperator::zero(basis.cols());
        if (c < m) gain = congruence(basis.adjoint(), measurements[c][j]) * priors[c];
        slot[j][c] = sdp.block_dims.size();
        iso[j][c] = basis;
        sdp.block_dims.push_back(basis.cols());
        sdp.objective.push_back(gain);
      }
    std::vector<HermitianOperator> herm_basis;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r; c < d; ++c) {
        if (r == c) {
          herm_basis.push_back(HermitianOperator::projector(basis_ket(d, r)));
          continue;
        }
        ComplexMatrix re(d, d), im(d, d);
        re(r, c) = re(c, r) = 1.0 / std::sqrt(2.0);
        im(r, c) = Complex(0.0, 1.0 / std::sqrt(2.0));
        im(c, r) = Complex(0.0, -1.0 / std::sqrt(2.0));
        herm_basis.push_back(HermitianOperator(re));
        herm_basis.push_back(HermitianOperator(im));
      }
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& g : herm_basis) {
        SdpConstraint con;
        con.terms.emplace_back(0, g * -1.0);
        for (std::size_t c = 0; c < nconc; ++c)
          if (slot[j][c]) con.terms.emplace_back(slot[j][c], congruence(iso[j][c].adjoint(), g));
        sdp.constraints.push_back(std::move(con));
      }
    sdp.constraints.push_back({{{0, HermitianOperator::identity(d)}}, 1.0});
    if (fixed && !no_fail && !all_fail) {
      SdpConstraint con;
      con.rhs = mode.p_f;
      for (std::size_t j = 0; j < n; ++j) {
        HermitianOperator w = HermitianOperator::zero(d);
        for (std::size_t l = 0; l < m; ++l) w += measurements[l][j] * priors[l];
        con.terms.emplace_back(slot[j][m], w);
      }
      sdp.constraints.push_back(std::move(con));
    }
    // A strictly feasible tester with rho = I/d, used to repair rounding.
    // Unambiguous: delta on each conclusion block, the rest fails. Otherwise
    // delta I on every conclusion block, with delta fixed by the failure rate.
    const double dd = static_cast<double>(d);
    const double delta = mode.kind == Mode::Kind::Unambiguous ? 1.0 / (2.0 * dd * m)
                         : mode.kind == Mode::Kind::FixedFailure ? (1.0 - mode.p_f) / (dd * m)
                                                                 : 1.0 / (dd * m);
    sdp.interior.assign(sdp.block_dims.size(), HermitianOperator());
    sdp.interior[0] = HermitianOperator::identity(d) * (1.0 / dd);
    for (std::size_t j = 0; j < n; ++j) {
      HermitianOperator rest = HermitianOperator::identity(d) * (1.0 / dd);
      for (std::size_t c = 0; c < m; ++c)
        if (slot[j][c]) {
          sdp.interior[slot[j][c]] = HermitianOperator::identity(iso[j][c].cols()) * delta;
          rest -= congruence(iso[j][c], sdp.interior[slot[j][c]]);
        }
      if (slot[j][m]) sdp.interior[slot[j][m]] = rest;
    }
    SdpOptions opt;
    opt.tolerance = std::max(cfg.tolerance, 1e-11);
    const SdpResult res = solve_sdp(sdp, opt);

    std::vector<std::vector<HermitianOperator>> blocks(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < nconc; ++c)
        blocks[j].push_back(slot[j][c] ? congruence(iso[j][c], res.x[slot[j][c]]) : HermitianOperator::zero(d));
    out.tester = Tester(conclusions, std::move(blocks));
    const auto eig = hermitian_eig(out.tester.normalization());
    for (std::size_t k = 0; k < d; ++k)
      out.params.emplace_back("sigma_eig_" + std::to_string(k), eig.values[d - 1 - k]);
    out.params.emplace_back("success_bound", res.dual);
    out.params.emplace_back("iterations", static_cast<double>(res.iterations));
    // Interior-point rounding leaves eigenvalues of order -1e-10; clip them so
    // the probe state is an exact density operator.
    ComplexMatrix sigma(d, d);
    double total = 0.0;
    for (std::size_t k = 0; k < d; ++k) total += std::max(0.0, eig.values[k]);
    for (std::size_t k = 0; k < d; ++k) {
      const double w = std::max(0.0, eig.values[k]) / total;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) sigma(r, c) += w * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
    }
    out.normalization = hermitian_part(sigma);
  }
  out.report = performance(out.tester, hyps);
  out.value = mode.kind == Mode::Kind::Unambiguous ? out.report.p_f : out.report.p_s;
  return out;
}

double ancilla_success(const Povm& m, const Povm& n, const std::vector<double>& priors, const Mode& mode,
                       const HermitianOperator& sigma) {
  if (mode.kind == Mode::Kind::FixedFailure) throw InvalidArgument("ancilla_success: fixed-failure is not supported");
  if (m.dim() != n.dim() || m.outcomes() != n.outcomes() || sigma.dim() != m.dim())
    throw DimensionError("ancilla_success: shapes differ");
  require_priors(priors, 2, "ancilla_success");
  require_density(sigma);
  const HermitianOperator root = sqrt_psd(sigma);
  double success = 0.0;
  for (std::size_t j = 0; j < m.outcomes(); ++j)
    success += branch_measurement(congruence(root.matrix(), m[j]).transpose() * priors[0],
                                  congruence(root.matrix(), n[j]).transpose() * priors[1], mode, false)
                   .success;
  return success;
}

OracleOverlapResult oracle_min_sum_overlap(const Povm& m, const Povm& n, const SearchConfig& cfg) {
  cfg.validate();
  if (m.dim() != 2 || n.dim() != 2 || m.outcomes() != n.outcomes())
    throw DimensionError("oracle_min_sum_overlap: expected qubit devices with equal outcome counts");
  const auto f = [&](const Ket& v) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.outcomes(); ++j) s += m[j].expectation(v) * n[j].expectation(v);
    return -s;
  };
  const Best b = sphere_search(f, cfg);
  OracleOverlapResult out;
  out.probe = canonical_phase(bloch_ket(b.x[0], b.x[1]));
  out.value = std::max(0.0, -b.value);
  bloch_angles(out.probe, out.polar, out.azimuth);
  return out;
}

}  // namespace qmd
