#include "qmd/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmd/oracle.hpp"
#include "qmd/search.hpp"

namespace qmd {

namespace {

constexpr double kUnitTol = 1e-10;
constexpr double kProtocolAgreement = 1e-10;

void require_qubit_unit(const Ket& v, const char* who) {
  if (v.size() != 2) throw DimensionError(std::string(who) + ": expected a qubit vector");
  if (std::abs(norm(v) - 1.0) > kUnitTol) throw InvalidArgument(std::string(who) + ": expected a unit vector");
}

void require_prior(double eta, const char* who) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument(std::string(who) + ": prior outside [0,1]");
}

StatePovm pair_povm(HermitianOperator em, HermitianOperator en, HermitianOperator ef) {
  return {{kConcludeM, kConcludeN, kFail}, {std::move(em), std::move(en), std::move(ef)}};
}

// Trace norm of a Hermitian 2x2 from its trace and determinant.
double trace_norm_2x2(const HermitianOperator& x) {
  const double t = x.trace();
  const double det = x(0, 0).real() * x(1, 1).real() - std::norm(x(0, 1));
  if (det >= 0.0) return std::abs(t);
  return std::sqrt(t * t - 4.0 * det);
}

double check_same(double a, double b, const char* what) {
  if (std::abs(a - b) > kProtocolAgreement) {
    std::ostringstream os;
    os << what << ": realizations disagree (" << a << " vs " << b << ")";
    throw ConvergenceError(os.str());
  }
  return a;
}

}  // namespace

double PureStateHypotheses::overlap() const { return std::min(1.0, std::abs(inner(psi, phi))); }

PureStateHypotheses make_hypotheses(const Ket& phi, const Ket& psi, double eta) {
  require_qubit_unit(phi, "make_hypotheses");
  require_qubit_unit(psi, "make_hypotheses");
  require_prior(eta, "make_hypotheses");
  return {canonical_phase(phi), canonical_phase(psi), eta};
}

PureStateHypotheses hypotheses_with_overlap(double overlap, double eta) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidArgument("hypotheses_with_overlap: overlap outside [0,1]");
  return make_hypotheses(Ket{1.0, 0.0}, Ket{overlap, std::sqrt(std::max(0.0, 1.0 - overlap * overlap))}, eta);
}

HelstromResult helstrom_pure(const PureStateHypotheses& h) {
  const double eta = h.eta;
  const double f = h.overlap();
  const HermitianOperator delta =
      HermitianOperator::projector(h.psi) * (1.0 - eta) - HermitianOperator::projector(h.phi) * eta;
  const auto eig = hermitian_eig(delta);
  const HermitianOperator en = positive_part_projector(delta, 0.0);
  const HermitianOperator em = HermitianOperator::identity(2) - en;

  HelstromResult r;
  r.p_e = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * eta * (1.0 - eta) * f * f)));
  r.povm = pair_povm(em, en, HermitianOperator::zero(2));
  r.probe = canonical_phase(eig.vector(1));
  return r;
}

UnambiguousResult unambiguous_pure(const PureStateHypotheses& h) {
  const double eta = h.eta;
  const double f = h.overlap();
  const double f2 = f * f;
  const HermitianOperator id = HermitianOperator::identity(2);
  const Ket phi_perp = qubit_orthogonal(h.phi);
  const Ket psi_perp = qubit_orthogonal(h.psi);

  UnambiguousResult r;
  if ((1.0 + f2) * eta <= f2) {
    r.regime = 1;
    r.p_f = eta + (1.0 - eta) * f2;
    const HermitianOperator en = HermitianOperator::projector(phi_perp);
    r.povm = pair_povm(HermitianOperator::zero(2), en, id - en);
  } else if ((1.0 + f2) * eta >= 1.0) {
    r.regime = 3;
    r.p_f = 1.0 - eta + eta * f2;
    const HermitianOperator em = HermitianOperator::projector(psi_perp);
    r.povm = pair_povm(em, HermitianOperator::zero(2), id - em);
  } else {
    r.regime = 2;
    r.p_f = 2.0 * std::sqrt(eta * (1.0 - eta)) * f;
    // Failure rates conditional on phi and psi.
    const double q1 = f == 0.0 ? 0.0 : f * std::sqrt((1.0 - eta) / eta);
    const double q2 = f == 0.0 ? 0.0 : f * std::sqrt(eta / (1.0 - eta));
    const HermitianOperator em = HermitianOperator::projector(psi_perp) * ((1.0 - q1) / (1.0 - f2));
    const HermitianOperator en = HermitianOperator::projector(phi_perp) * ((1.0 - q2) / (1.0 - f2));
    r.povm = pair_povm(em, en, id - em - en);
  }
  return r;
}

FixedFailureResult fixed_failure_pure(const PureStateHypotheses& h, double p_f) {
  if (!(p_f >= 0.0 && p_f <= 1.0)) throw InvalidArgument("fixed_failure_pure: target failure rate outside [0,1]");
  const double eta = h.eta;
  FixedFailureResult out;
  const double p_unamb = unambiguous_pure(h).p_f;
  double target = p_f;
  if (target > p_unamb) {
    out.clamped = true;
    std::ostringstream os;
    os << "target failure rate " << p_f << " exceeds the unambiguous rate " << p_unamb << "; clamped";
    out.note = os.str();
    target = p_unamb;
  }
  out.p_f = target;

  const HermitianOperator rho_phi = HermitianOperator::projector(h.phi) * eta;
  const HermitianOperator rho_psi = HermitianOperator::projector(h.psi) * (1.0 - eta);

  // Fail effect a |chi><chi| with a fixed by the target; the conclusive part
  // is the Helstrom measurement of the residual states.
  struct Eval {
    double p_s;
    double a;
    HermitianOperator root;
  };
  const auto evaluate = [&](const Ket& chi) -> Eval {
    const double w = rho_phi.expectation(chi) + rho_psi.expectation(chi);
    double a = 0.0;
    if (target > 0.0) {
      if (w <= 0.0) return {-1.0, 0.0, {}};
      a = target / w;
      if (a > 1.0) return {-1.0, a, {}};
    }
    const double c = 1.0 - std::sqrt(1.0 - a);
    const HermitianOperator root = HermitianOperator::identity(2) - HermitianOperator::projector(chi) * c;
    const HermitianOperator ra = congruence(root.matrix(), rho_phi);
    const HermitianOperator rb = congruence(root.matrix(), rho_psi);
    return {0.5 * (ra.trace() + rb.trace() + trace_norm_2x2(ra - rb)), a, root};
  };

  SphereSearchOptions opt;
  opt.final_step = 1e-9;
  const SpherePoint best = sphere_maximize([&](const Ket& chi) { return evaluate(chi).p_s; }, opt);
  const Ket chi = best.ket();
  const Eval e = evaluate(chi);
  if (e.p_s < 0.0) throw InfeasibleError("fixed_failure_pure: no feasible fail effect found");

  const HermitianOperator ra = congruence(e.root.matrix(), rho_phi);
  const HermitianOperator rb = congruence(e.root.matrix(), rho_psi);
  const HermitianOperator pm = positive_part_projector(ra - rb, 0.0);
  const HermitianOperator em = congruence(e.root.matrix(), pm);
  const HermitianOperator en = congruence(e.root.matrix(), HermitianOperator::identity(2) - pm);
  out.povm = pair_povm(em, en, HermitianOperator::projector(chi) * e.a);
  out.p_s = e.p_s;
  out.p_e = std::max(0.0, 1.0 - out.p_s - out.p_f);
  return out;
}

MixedHelstromResult helstrom_mixed(const HermitianOperator& rho0, const HermitianOperator& rho1, double eta) {
  require_density(rho0);
  require_density(rho1);
  require_prior(eta, "helstrom_mixed");
  if (rho0.dim() != rho1.dim()) throw DimensionError("helstrom_mixed: states differ in dimension");
  const HermitianOperator delta = rho0 * eta - rho1 * (1.0 - eta);
  const HermitianOperator em = positive_part_projector(delta, 0.0);
  MixedHelstromResult r;
  r.p_e = std::max(0.0, 0.5 * (1.0 - trace_norm(delta.matrix())));
  r.povm = pair_povm(em, HermitianOperator::identity(rho0.dim()) - em, HermitianOperator::zero(rho0.dim()));
  return r;
}

Ket max_entangled_state(std::size_t d) {
  Ket v(d * d);
  for (std::size_t k = 0; k < d; ++k) v[k * d + k] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

Ket singlet_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return {0.0, s, -s, 0.0};
}

Tester measurement_protocol(const StatePovm& e) {
  if (e.dim() != 2) throw DimensionError("measurement_protocol: expected a qubit POVM");
  e.as_povm();
  std::vector<HermitianOperator> first, second;
  for (const auto& ec : e.effects) {
    first.push_back(ec.transpose());
    second.push_back(universal_not(ec).transpose());
  }
  const std::vector<ProtocolBranch> branches{{validate_povm(first), e.conclusions},
                                             {validate_povm(second), e.conclusions}};
  return tester_from_protocol(max_entangled_state(2), 2, 2, branches, e.conclusions);
}

Tester singlet_protocol(const StatePovm& e) {
  if (e.dim() != 2) throw DimensionError("singlet_protocol: expected a qubit POVM");
  e.as_povm();
  std::vector<HermitianOperator> first;
  for (const auto& ec : e.effects) first.push_back(universal_not(ec));
  const std::vector<ProtocolBranch> branches{{validate_povm(first), e.conclusions},
                                             {validate_povm(e.effects), e.conclusions}};
  return tester_from_protocol(singlet_state(), 2, 2, branches, e.conclusions);
}

Tester singlet_helstrom_tester(const Povm& m, const Povm& n, double eta) {
  if (m.dim() != 2 || n.dim() != 2 || m.outcomes() != n.outcomes())
    throw DimensionError("singlet_helstrom_tester: expected two qubit measurements with equal outcome counts");
  require_prior(eta, "singlet_helstrom_tester");
  std::vector<ProtocolBranch> branches;
  for (std::size_t j = 0; j < m.outcomes(); ++j) {
    const HermitianOperator delta = universal_not(m[j]) * eta - universal_not(n[j]) * (1.0 - eta);
    const HermitianOperator pm = positive_part_projector(delta, 0.0);
    branches.push_back({validate_povm(std::vector<HermitianOperator>{pm, HermitianOperator::identity(2) - pm}),
                        {kConcludeM, kConcludeN}});
  }
  return tester_from_protocol(singlet_state(), 2, 2, branches, {kConcludeM, kConcludeN, kFail});
}

std::vector<Hypothesis> pair_hypotheses(const Povm& m, const Povm& n, double eta) {
  return {{m, eta, kConcludeM}, {n, 1.0 - eta, kConcludeN}};
}

PairSolution discriminate_projective_pair(const Ket& phi, const Ket& psi, double eta, const Mode& mode) {
  const PureStateHypotheses h = make_hypotheses(phi, psi, eta);
  const Povm m = make_projective_qubit(h.phi);
  const Povm n = make_projective_qubit(h.psi);
  const auto hyps = pair_hypotheses(m, n, eta);
  const std::vector<std::string> simple_labels{kConcludeM, kConcludeN, kFail};

  PairSolution out;
  switch (mode.kind) {
    case Mode::Kind::MinError: {
      const HelstromResult hr = helstrom_pure(h);
      out.povm = hr.povm;
      out.method = "helstrom";
      // Outcome 1 of the device fires on |phi>; read it as N exactly when the
      // probe spans the N effect.
      const std::size_t rank_n = projector_rank(hr.povm.effects[1]);
      std::vector<std::vector<double>> q;
      if (rank_n == 0) q = {{1, 0, 0}, {1, 0, 0}};
      else if (rank_n == 2) q = {{0, 1, 0}, {0, 1, 0}};
      else q = {{0, 1, 0}, {1, 0, 0}};
      out.simple = simple_tester(HermitianOperator::projector(hr.probe), simple_labels, q);
      break;
    }
    case Mode::Kind::Unambiguous: {
      const UnambiguousResult ur = unambiguous_pure(h);
      out.povm = ur.povm;
      out.method = "unambiguous-regime-" + std::to_string(ur.regime);
      if (ur.regime == 1) {
        // Probe phi_perp: M never fires outcome 1, so outcome 1 certifies N.
        out.simple = simple_tester(HermitianOperator::projector(qubit_orthogonal(h.phi)), simple_labels,
                                   {{0, 1, 0}, {0, 0, 1}});
      } else if (ur.regime == 3) {
        // Probe psi_perp: N never fires outcome 1, so outcome 1 certifies M.
        out.simple = simple_tester(HermitianOperator::projector(qubit_orthogonal(h.psi)), simple_labels,
                                   {{1, 0, 0}, {0, 0, 1}});
      }
      break;
    }
    case Mode::Kind::FixedFailure: {
      const FixedFailureResult fr = fixed_failure_pure(h, mode.p_f);
      out.povm = fr.povm;
      out.method = "fixed-failure-search";
      out.note = fr.note;
      break;
    }
  }
  out.tester = measurement_protocol(out.povm);
  out.report = performance(out.tester, hyps);
  if (out.simple) {
    out.simple_report = performance(*out.simple, hyps);
    check_same(out.report.p_e, out.simple_report->p_e, "discriminate_projective_pair p_e");
    check_same(out.report.p_f, out.simple_report->p_f, "discriminate_projective_pair p_f");
  }
  return out;
}

PairSolution discriminate_noisy_pair(const Ket& phi, double mu, const Ket& psi, double nu, double eta,
                                     const Mode& mode) {
  require_qubit_unit(phi, "discriminate_noisy_pair");
  require_qubit_unit(psi, "discriminate_noisy_pair");
  require_prior(eta, "discriminate_noisy_pair");
  if (mu == 1.0 && nu == 1.0) {
    PairSolution s = discriminate_projective_pair(phi, psi, eta, mode);
    s.method = "projective:" + s.method;
    return s;
  }
  const Povm m = make_noisy_qubit(phi, mu);
  const Povm n = make_noisy_qubit(psi, nu);
  const HermitianOperator& rho0 = m[0];
  const HermitianOperator& rho1 = n[0];
  const HermitianOperator id = HermitianOperator::identity(2);

  PairSolution out;
  switch (mode.kind) {
    case Mode::Kind::MinError: {
      out.povm = helstrom_mixed(rho0, rho1, eta).povm;
      out.method = "helstrom-mixed";
      break;
    }
    case Mode::Kind::Unambiguous: {
      if (mu < 1.0 && nu < 1.0) {
        std::ostringstream os;
        os << "unambiguous discrimination is impossible: M_1 and N_1 both have full support (mu = " << mu
           << ", nu = " << nu << ")";
        throw InfeasibleError(os.str());
      }
      if (mu == 1.0) {
        // M_1 is pure: only N can be certified, on the kernel of M_1.
        const HermitianOperator en = HermitianOperator::projector(qubit_orthogonal(phi));
        out.povm = pair_povm(HermitianOperator::zero(2), en, id - en);
      } else {
        const HermitianOperator em = HermitianOperator::projector(qubit_orthogonal(psi));
        out.povm = pair_povm(em, HermitianOperator::zero(2), id - em);
      }
      out.method = "kernel-projector";
      break;
    }
    case Mode::Kind::FixedFailure: {
      const auto res = oracle_state_povm({rho0, rho1}, {eta, 1.0 - eta}, mode);
      out.povm = res.povm;
      out.method = "oracle";
      out.note = "mixed-state fixed-failure solved by search";
      break;
    }
  }
  out.tester = measurement_protocol(out.povm);
  out.report = performance(out.tester, pair_hypotheses(m, n, eta));
  return out;
}

bool gram_circulant_up_to_phases(const std::vector<Ket>& states, double tol) {
  const std::size_t m = states.size();
  if (m < 2) return true;
  Complex product = 1.0;
  for (std::size_t k = 0; k < m; ++k) product *= inner(states[k], states[(k + 1) % m]);
  const double mag = std::abs(inner(states[0], states[1]));
  for (std::size_t k = 0; k < m; ++k)
    if (std::abs(std::abs(inner(states[k], states[(k + 1) % m])) - mag) > tol) return false;
  if (mag < tol) {
    // Consecutive states orthogonal: the phases cannot be fixed by the chain.
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l)
        if (std::abs(std::abs(inner(states[k], states[l])) - std::abs(inner(states[0], states[(l + m - k) % m]))) > tol)
          return false;
    return true;
  }
  for (std::size_t r = 0; r < m; ++r) {
    const Complex c1 = std::polar(mag, (std::arg(product) + 2.0 * std::numbers::pi * static_cast<double>(r)) /
                                           static_cast<double>(m));
    std::vector<Ket> v = states;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const Complex g = inner(v[k], v[k + 1]);
      const Complex fix = c1 / g;
      for (auto& z : v[k + 1]) z *= fix / std::abs(fix);
    }
    bool ok = true;
    for (std::size_t k = 0; k < m && ok; ++k)
      for (std::size_t l = 0; l < m && ok; ++l)
        if (std::abs(inner(v[k], v[l]) - inner(v[0], v[(l + m - k) % m])) > tol) ok = false;
    if (ok) return true;
  }
  return false;
}

StatePovm square_root_measurement(const std::vector<Ket>& states, const std::vector<double>& priors,
                                  const std::vector<std::string>& labels) {
  if (states.empty() || states.size() != priors.size() || states.size() != labels.size())
    throw DimensionError("square_root_measurement: states, priors and labels must have equal length");
  const std::size_t d = states.front().size();
  HermitianOperator s = HermitianOperator::zero(d);
  for (std::size_t k = 0; k < states.size(); ++k) s += HermitianOperator::projector(states[k]) * priors[k];
  const auto eig = hermitian_eig(s);
  const double scale = std::max(1.0, eig.values.back());
  ComplexMatrix inv_root(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (eig.values[k] <= kRankTol * scale) continue;
    const Ket v = eig.vector(k);
    inv_root += outer(v, v) * (1.0 / std::sqrt(eig.values[k]));
  }
  StatePovm out;
  out.conclusions = labels;
  for (std::size_t k = 0; k < states.size(); ++k)
    out.effects.push_back(congruence(inv_root, HermitianOperator::projector(states[k]) * priors[k]));
  out.effects.front() += kernel_projector(s);
  return out;
}

MultiSolution discriminate_multi_projective(const std::vector<Ket>& phis, const std::vector<double>& priors) {
  const std::size_t m = phis.size();
  if (m < 2) throw InvalidArgument("discriminate_multi_projective: need at least two devices");
  if (priors.size() != m) throw DimensionError("discriminate_multi_projective: one prior per device");
  double total = 0.0;
  for (double p : priors) {
    require_prior(p, "discriminate_multi_projective");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("discriminate_multi_projective: priors must sum to one");
  std::vector<Ket> states;
  for (const auto& v : phis) {
    require_qubit_unit(v, "discriminate_multi_projective");
    states.push_back(canonical_phase(v));
  }
  const auto labels = device_labels(m);

  MultiSolution out;
  const bool equal_priors =
      std::all_of(priors.begin(), priors.end(), [&](double p) { return std::abs(p - priors[0]) < 1e-12; });
  if (m == 2) {
    const HelstromResult hr = helstrom_pure(make_hypotheses(states[0], states[1], priors[0]));
    out.povm = {labels, {hr.povm.effects[0], hr.povm.effects[1]}};
    out.method = "helstrom";
  } else if (equal_priors && gram_circulant_up_to_phases(states)) {
    out.povm = square_root_measurement(states, priors, labels);
    out.method = "square-root";
  } else {
    std::vector<HermitianOperator> rhos;
    for (const auto& v : states) rhos.push_back(HermitianOperator::projector(v));
    const auto res = oracle_state_povm(rhos, priors, Mode::min_error());
    StatePovm p;
    for (std::size_t k = 0; k < res.povm.conclusions.size(); ++k) {
      if (res.povm.conclusions[k] == kFail) continue;
      p.conclusions.push_back(res.povm.conclusions[k]);
      p.effects.push_back(res.povm.effects[k]);
    }
    // Search labels are device labels for m > 2, so they line up with ours.
    out.povm = p;
    out.method = "oracle";
  }
  out.tester = measurement_protocol(out.povm);
  std::vector<Hypothesis> hyps;
  for (std::size_t l = 0; l < m; ++l) hyps.push_back({make_projective_qubit(states[l]), priors[l], labels[l]});
  out.report = performance(out.tester, hyps);
  return out;
}

SimpleSchemeResult best_simple_scheme(const std::vector<Povm>& measurements, const std::vector<double>& priors) {
  const std::size_t m = measurements.size();
  if (m == 0 || priors.size() != m) throw DimensionError("best_simple_scheme: one prior per device");
  const std::size_t n = measurements.front().outcomes();
  for (const auto& dev : measurements)
    if (dev.dim() != 2 || dev.outcomes() != n)
      throw DimensionError("best_simple_scheme: expected qubit devices with equal outcome counts");

  const auto assign = [&](const Ket& v, std::vector<std::size_t>* choice) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double best = -1.0;
      std::size_t arg = 0;
      for (std::size_t l = 0; l < m; ++l) {
        const double w = priors[l] * measurements[l][j].expectation(v);
        if (w > best + 1e-15) {
          best = w;
          arg = l;
        }
      }
      total += best;
      if (choice) choice->push_back(arg);
    }
    return total;
  };

  const SpherePoint p = sphere_maximize([&](const Ket& v) { return assign(v, nullptr); });
  SimpleSchemeResult out;
  out.probe = p.ket();
  out.polar = p.polar;
  out.azimuth = p.azimuth;
  out.p_s = assign(out.probe, &out.assignment);
  const auto labels = device_labels(m);
  std::vector<std::vector<double>> q(n, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < n; ++j) q[j][out.assignment[j]] = 1.0;
  out.tester = simple_tester(HermitianOperator::projector(out.probe), labels, q);
  return out;
}

}  // namespace qmd
