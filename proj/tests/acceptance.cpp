// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qmd/io.hpp"
#include "qmd/oracle.hpp"
#include "qmd/perfect.hpp"
#include "qmd/qubit.hpp"
#include "qmd/reduction.hpp"
#include "qmd/trine.hpp"

using namespace qmd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  std::vector<std::string> failures;
  std::ostringstream summary;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Povm> projective_devices(const std::vector<Ket>& vs) {
  std::vector<Povm> out;
  for (const auto& v : vs) out.push_back(make_projective_qubit(v));
  return out;
}

double helstrom_ps(double f, double eta) { return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * eta * (1.0 - eta) * f * f)); }

std::vector<HermitianOperator> state_pair(const PureStateHypotheses& h) {
  return {HermitianOperator::projector(h.phi), HermitianOperator::projector(h.psi)};
}

// 1. Closed-form trine optimum against golden-section minimization.
void trine_closed_form(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_pf = 0.0, worst_q = 0.0;
  for (int k = 0; k <= 72; ++k) {
    const double theta = k * kPi / 36.0;
    const TrineOptimum r = trine_optimal(theta);
    worst_pf = std::max(worst_pf, std::abs(r.p_f - r.p_f_numeric));
    // The bound does not depend on q at theta = 0 (mod 2 pi).
    if (k % 72 != 0) worst_q = std::max(worst_q, std::abs(r.q_star - r.q_numeric));
  }
  const TrineOptimum half = trine_optimal(kPi);
  const double elapsed = seconds_since(t0);
  o.require(worst_pf <= 1e-9, "p_f deviation " + fmt(worst_pf));
  o.require(worst_q <= 1e-6, "q* deviation " + fmt(worst_q));
  o.require(std::abs(half.q_star - 0.75) <= 1e-12 && std::abs(half.p_f - 0.5) <= 1e-12, "theta = pi values");
  o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
  o.summary << "73 angles, max |dp_f| " << fmt(worst_pf) << ", max |dq| " << fmt(worst_q)
           << ", " << fmt(elapsed) << " s";
}

// 2. Protocol saturates the bound; the assembled tester reproduces it.
void trine_saturation(Outcome& o) {
  double worst_protocol = 0.0, worst_tester = 0.0, worst_pe = 0.0;
  const Povm m = make_trine();
  for (int k = 0; k <= 72; ++k) {
    const double theta = k * kPi / 36.0;
    const auto hyps = pair_hypotheses(m, make_trine(theta, true), 0.5);
    for (int i = 0; i <= 100; ++i) {
      const double q = i / 100.0;
      const double bound = trine_lower_bound(q, theta);
      const double protocol = trine_protocol_pf(q, theta);
      worst_protocol = std::max(worst_protocol, std::abs(protocol - bound));
      const auto r = performance(trine_tester(q, theta), hyps);
      worst_tester = std::max({worst_tester, std::abs(r.p_f - bound), std::abs(r.p_f - protocol)});
      worst_pe = std::max(worst_pe, r.p_e);
    }
  }
  o.require(worst_protocol <= 1e-12, "protocol vs bound " + fmt(worst_protocol));
  o.require(worst_tester <= 1e-9, "tester vs bound " + fmt(worst_tester));
  o.require(worst_pe <= 1e-12, "tester p_e " + fmt(worst_pe));
  o.summary << "101x73 grid, protocol " << fmt(worst_protocol) << ", tester "
           << fmt(worst_tester) << ", p_e " << fmt(worst_pe);
}

// 3. Maximally entangled probe versus the optimal one.
void entanglement_gap(Outcome& o) {
  const double maxent = trine_lower_bound(0.5, kPi);
  const double best = trine_optimal(kPi).p_f;
  o.require(std::abs(maxent - 2.0 / 3.0) <= 1e-12, "maximally entangled p_f " + fmt(maxent));
  o.require(std::abs(maxent - best - 1.0 / 6.0) <= 1e-12, "gap " + fmt(maxent - best));
  std::vector<double> thetas;
  for (int k = 0; k <= 360; ++k) thetas.push_back(k * 2.0 * kPi / 360.0);
  double min_gap = 1.0;
  bool verified = true;
  for (const auto& r : trine_sweep(thetas)) {
    min_gap = std::min(min_gap, r.gap);
    verified = verified && r.verified;
  }
  o.require(min_gap >= -1e-12, "negative gap " + fmt(min_gap));
  o.require(verified, "tester verification in sweep");
  o.summary << "gap at pi " << fmt(maxent - best) << ", min gap over 361 angles "
           << fmt(min_gap);
}

// 4. Helstrom value against the POVM oracle; simple and entangled testers.
void helstrom(Outcome& o) {
  std::mt19937_64 g(404);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst_oracle = 0.0, worst_closed = 0.0, worst_schemes = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double f = u(g), eta = u(g);
    const PureStateHypotheses h = hypotheses_with_overlap(f, eta);
    const double pe = helstrom_pure(h).p_e;
    const auto orc = oracle_state_povm(state_pair(h), {eta, 1.0 - eta}, Mode::min_error());
    worst_oracle = std::max(worst_oracle, std::abs(pe - orc.p_e));
    worst_closed = std::max(worst_closed, std::abs(1.0 - pe - helstrom_ps(f, eta)));
    const PairSolution s = discriminate_projective_pair(h.phi, h.psi, eta, Mode::min_error());
    o.require(s.simple_report.has_value(), "no ancilla-free realization");
    if (s.simple_report)
      worst_schemes = std::max({worst_schemes, std::abs(s.simple_report->p_s - s.report.p_s),
                                std::abs(s.simple_report->p_e - s.report.p_e)});
  }
  o.require(worst_oracle <= 1e-3, "oracle deviation " + fmt(worst_oracle));
  o.require(worst_closed <= 1e-12, "closed-form deviation " + fmt(worst_closed));
  o.require(worst_schemes <= 1e-10, "simple vs entangled " + fmt(worst_schemes));
  o.summary << "20 instances, oracle " << fmt(worst_oracle) << ", simple vs entangled "
           << fmt(worst_schemes);
}

// 5. Unambiguous discrimination in all three regimes.
void unambiguous_regimes(Outcome& o) {
  std::mt19937_64 g(505);
  std::uniform_real_distribution<double> uf(0.2, 0.9), unit(0.02, 0.98);
  double worst_oracle = 0.0, worst_pe = 0.0;
  bool seen[4] = {false, false, false, false};
  for (int i = 0; i < 21; ++i) {
    const double f = uf(g);
    const double lo = f * f / (1.0 + f * f), hi = 1.0 / (1.0 + f * f);
    // Draw eta inside each regime in turn.
    const double a = i % 3 == 0 ? 0.0 : i % 3 == 1 ? lo : hi;
    const double b = i % 3 == 0 ? lo : i % 3 == 1 ? hi : 1.0;
    const double eta = a + (b - a) * unit(g);
    const PureStateHypotheses h = hypotheses_with_overlap(f, eta);
    const UnambiguousResult r = unambiguous_pure(h);
    seen[r.regime] = true;
    const auto orc = oracle_state_povm(state_pair(h), {eta, 1.0 - eta}, Mode::unambiguous());
    worst_oracle = std::max(worst_oracle, std::abs(r.p_f - orc.value));
    const PairSolution s = discriminate_projective_pair(h.phi, h.psi, eta, Mode::unambiguous());
    worst_pe = std::max(worst_pe, s.report.p_e);
  }
  double worst_boundary = 0.0;
  for (double f : {0.2, 0.45, 0.7, 0.9}) {
    for (double eta_b : {f * f / (1.0 + f * f), 1.0 / (1.0 + f * f)}) {
      const UnambiguousResult below = unambiguous_pure(hypotheses_with_overlap(f, eta_b * (1.0 - 1e-13)));
      const UnambiguousResult above = unambiguous_pure(hypotheses_with_overlap(f, eta_b * (1.0 + 1e-13)));
      o.require(below.regime != above.regime, "no regime change at boundary");
      // Both sides meet 2 sqrt(eta (1 - eta)) F = 2 F^2 / (1 + F^2) there.
      const double meet = 2.0 * f * f / (1.0 + f * f);
      worst_boundary = std::max({worst_boundary, std::abs(below.p_f - above.p_f), std::abs(below.p_f - meet),
                                 std::abs(above.p_f - meet)});
    }
  }
  o.require(seen[1] && seen[2] && seen[3], "not every regime was exercised");
  o.require(worst_oracle <= 1e-3, "oracle deviation " + fmt(worst_oracle));
  o.require(worst_boundary <= 1e-9, "boundary mismatch " + fmt(worst_boundary));
  o.require(worst_pe <= 1e-12, "protocol p_e " + fmt(worst_pe));
  o.summary << "21 instances over 3 regimes, oracle " << fmt(worst_oracle) << ", boundaries "
           << fmt(worst_boundary) << ", p_e " << fmt(worst_pe);
}

// 6. Two-trine pair: perfect with a singlet, not with any simple probe.
void two_trine(Outcome& o) {
  const Povm m = read_povm_file(test::data_path("twotrine_m.json"));
  const Povm n = read_povm_file(test::data_path("twotrine_n.json"));
  const auto r = performance(singlet_helstrom_tester(m, n), pair_hypotheses(m, n, 0.5));
  o.require(std::abs(r.p_s - 1.0) <= 1e-12 && r.p_e <= 1e-12 && r.p_f <= 1e-12, "singlet tester not perfect");
  const double simple_min = simple_scheme_perfect_check(m, n).min_value;
  // Regression constant: the minimum over pure probes is 1/6.
  o.require(simple_min > 1e-3, "simple minimum " + fmt(simple_min));
  o.require(std::abs(simple_min - 1.0 / 6.0) <= 1e-9, "simple minimum moved from 1/6: " + fmt(simple_min));
  const double cb_pe = minerror_pair(m, n).p_e;
  const double dist = simple_scheme_distance(m, n).value;
  o.require(cb_pe <= 1e-12, "cb p_e " + fmt(cb_pe));
  o.require(dist < 2.0 - 1e-3, "simple distance " + fmt(dist));
  o.summary << "singlet p_s " << fmt(r.p_s) << ", simple min " << fmt(simple_min)
           << ", cb p_e " << fmt(cb_pe) << ", simple distance " << fmt(dist);
}

// 7. Symmetric projective triple: simple scheme versus entangled protocol.
void symmetric_triple(Outcome& o) {
  const auto vs = trine_vectors();
  const auto devs = projective_devices(vs);
  const std::vector<double> priors(3, 1.0 / 3.0);
  const double target = (2.0 + std::sqrt(3.0)) / 6.0;
  const SimpleSchemeResult s = best_simple_scheme(devs, priors);
  // Real probe cos w |0> + sin w |1>, so w is half the polar angle.
  const double omega = s.polar / 2.0;
  o.require(std::abs(s.p_s - target) <= 1e-6, "simple p_s " + fmt(s.p_s));
  o.require(std::abs(s.azimuth) <= 1e-6, "probe is not real");
  o.require(std::abs(omega - 0.0833 * kPi) <= 2e-3 * kPi, "omega/pi " + fmt(omega / kPi));
  const MultiSolution multi = discriminate_multi_projective(vs, priors);
  o.require(std::abs(multi.report.p_s - 2.0 / 3.0) <= 1e-9, "protocol p_s " + fmt(multi.report.p_s));
  const double orc = oracle_measurement_discrimination(devs, priors, Scheme::Simple, Mode::min_error()).value;
  o.require(orc <= target + 1e-3, "oracle simple scheme " + fmt(orc));
  o.summary << "simple p_s " << fmt(s.p_s) << " at omega/pi " << fmt(omega / kPi)
           << ", protocol " << fmt(multi.report.p_s) << ", oracle simple " << fmt(orc);
}

// 8. Binary perfect-distinguishability checker against the overlap oracle.
void binary_checker(Outcome& o) {
  std::mt19937_64 g(808);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SearchConfig cfg;
  cfg.refine_rounds = 24;
  cfg.tolerance = 1e-12;
  int disagreements = 0, witnesses = 0;
  for (int i = 0; i < 200; ++i) {
    const Ket u = test::random_ket(g, 2);
    const Ket v = qubit_orthogonal(u);
    const HermitianOperator pu = HermitianOperator::projector(u), pv = HermitianOperator::projector(v);
    const HermitianOperator id = HermitianOperator::identity(2);
    Povm m, n;
    switch (i % 4) {
      case 0: {  // M_1 has eigenvalue 1 on u, N_1 vanishes on u
        const HermitianOperator m1 = pu + pv * (0.95 * unit(g));
        const HermitianOperator n1 = pv * (0.3 + 0.7 * unit(g));
        m = validate_povm(std::vector<HermitianOperator>{m1, id - m1});
        n = validate_povm(std::vector<HermitianOperator>{n1, id - n1});
        break;
      }
      case 1: {  // the same through the second outcome
        const HermitianOperator m1 = pv * (0.95 * unit(g));
        const HermitianOperator n1 = id - pv * (0.3 + 0.7 * unit(g));
        m = validate_povm(std::vector<HermitianOperator>{m1, id - m1});
        n = validate_povm(std::vector<HermitianOperator>{n1, id - n1});
        break;
      }
      case 2: {  // near miss: N_1 tilted away from v
        const double eps = 0.01 + 0.2 * unit(g);
        const Ket w{std::cos(eps) * v[0] + std::sin(eps) * u[0], std::cos(eps) * v[1] + std::sin(eps) * u[1]};
        const HermitianOperator m1 = pu + pv * (0.95 * unit(g));
        const HermitianOperator n1 = HermitianOperator::projector(w) * (0.3 + 0.7 * unit(g));
        m = validate_povm(std::vector<HermitianOperator>{m1, id - m1});
        n = validate_povm(std::vector<HermitianOperator>{n1, id - n1});
        break;
      }
      default:
        m = test::random_povm(g, 2, 2);
        n = test::random_povm(g, 2, 2);
    }
    const bool has_witness = binary_perfect_check(m, n).has_value();
    const bool oracle_zero = oracle_min_sum_overlap(m, n, cfg).value <= 1e-9;
    witnesses += has_witness;
    disagreements += has_witness != oracle_zero;
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.require(witnesses > 0 && witnesses < 200, "instances are all of one kind");
  o.summary << "200 instances, " << witnesses << " with witness, " << disagreements
           << " disagreements";
}

// 9. Perfectly distinguishable family with a single probe and no ancilla.
void perfect_family(Outcome& o) {
  std::mt19937_64 g(909);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const Ket phi = test::random_ket(g, 3);
  // Uniform off-diagonal weights, then random ones.
  std::vector<std::vector<double>> x(4, std::vector<double>(4, 0.0));
  for (std::size_t l = 0; l < 4; ++l) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != l) s += (x[l][j] = unit(g));
    for (std::size_t j = 0; j < 4; ++j) x[l][j] /= s;
  }
  double worst = 0.0;
  for (const auto& weights : {std::vector<std::vector<double>>{}, x}) {
    const auto v = verify_perfect_family(make_perfect_family(4, 4, phi, weights), phi);
    o.require(v.all_passed && v.injective, "family not verified");
    for (double p : v.p_correct) worst = std::max(worst, std::abs(p - 1.0));
  }
  o.require(worst <= 1e-12, "p(l|M_l) deviation " + fmt(worst));
  o.summary << "4 devices, 4 outcomes, d = 3, max |p - 1| " << fmt(worst);
}

// 10. Filter pairs: reduced optimum lifted to C^d against the full-space SDP.
void reduction(Outcome& o) {
  std::mt19937_64 g(1010);
  std::uniform_real_distribution<double> ueta(0.2, 0.8);
  double worst_oracle = 0.0, worst_table = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 3 + i % 3;
    const Ket phi = test::random_ket(g, d), psi = test::random_ket(g, d);
    const double eta = ueta(g);
    const FilterReduction fr = reduce_filters(phi, psi);
    const Povm m = make_filter(phi), n = make_filter(psi);
    for (const Mode& mode : {Mode::min_error(), Mode::unambiguous()}) {
      const PairSolution s = discriminate_projective_pair(fr.phi, fr.psi, eta, mode);
      const auto reduced = performance(s.tester, pair_hypotheses(fr.m, fr.n, eta));
      const auto lifted = performance(lift_tester(s.tester, fr.reduction), pair_hypotheses(m, n, eta));
      for (std::size_t h = 0; h < 2; ++h)
        for (std::size_t c = 0; c < lifted.table[h].size(); ++c)
          worst_table = std::max(worst_table, std::abs(lifted.table[h][c] - reduced.table[h][c]));
      const bool unamb = mode.kind == Mode::Kind::Unambiguous;
      const double value = unamb ? lifted.p_f : lifted.p_s;
      const double orc = oracle_measurement_discrimination({m, n}, {eta, 1.0 - eta}, Scheme::Ancilla, mode).value;
      worst_oracle = std::max(worst_oracle, std::abs(value - orc));
    }
  }
  o.require(worst_oracle <= 1e-3, "lifted vs full-space oracle " + fmt(worst_oracle));
  o.require(worst_table <= 1e-10, "conditional probabilities changed by " + fmt(worst_table));
  o.summary << "20 pairs in d = 3..5, two modes, oracle " << fmt(worst_oracle)
           << ", lifting " << fmt(worst_table);
}

// 11. Fixed failure rate at F = 1/2.
void fixed_failure(Outcome& o) {
  // Search-oracle p_e at p_f = k/19 of the unambiguous failure rate, k = 1..18.
  const std::vector<std::pair<double, std::vector<double>>> reference{
      {0.5,
       {0.061493950651, 0.056141272299, 0.050937304835, 0.045890886779, 0.041011768487, 0.036310749547,
        0.031799844001, 0.027492480607, 0.023403747663, 0.019550695169, 0.015952711626, 0.012631999328,
        0.009614181592, 0.006929089624, 0.004611798608, 0.002704016872, 0.001255987364, 0.000329153218}},
      {0.3,
       {0.050942986089, 0.046423601586, 0.042038985266, 0.037796632737, 0.033704761325, 0.029772411272,
        0.026009565951, 0.022427295656, 0.019037930851, 0.015855272647, 0.012894850747, 0.010174242654,
        0.007713472915, 0.005535518400, 0.003666956187, 0.002138806605, 0.000987648450, 0.000257122174}}};
  const double f = 0.5;
  double worst_ref = 0.0, worst_sdp = 0.0, worst_end = 0.0;
  for (const auto& [eta, pe_ref] : reference) {
    const PureStateHypotheses h = hypotheses_with_overlap(f, eta);
    const double pf_max = unambiguous_pure(h).p_f;
    const Povm m = make_projective_qubit(h.phi), n = make_projective_qubit(h.psi);
    double prev = 1.0;
    for (int k = 0; k <= 19; ++k) {
      const double pf = pf_max * k / 19.0;
      const PairSolution s = discriminate_projective_pair(h.phi, h.psi, eta, Mode::fixed_failure(pf));
      const double pe = s.report.p_e;
      o.require(pe <= prev + 1e-12, "p_e increases at eta " + fmt(eta) + ", k " + std::to_string(k));
      prev = pe;
      if (k == 0) worst_end = std::max(worst_end, std::abs(pe - (1.0 - helstrom_ps(f, eta))));
      if (k == 19) worst_end = std::max(worst_end, pe);
      if (k > 0 && k < 19) worst_ref = std::max(worst_ref, std::abs(pe - pe_ref[k - 1]));
      const auto sdp =
          oracle_measurement_discrimination({m, n}, {eta, 1.0 - eta}, Scheme::Ancilla, Mode::fixed_failure(pf));
      worst_sdp = std::max(worst_sdp, std::abs(pe - sdp.report.p_e));
    }
  }
  o.require(worst_end <= 1e-6, "endpoints off by " + fmt(worst_end));
  o.require(worst_ref <= 1e-4, "interior vs search oracle " + fmt(worst_ref));
  o.require(worst_sdp <= 1e-6, "curve vs SDP oracle " + fmt(worst_sdp));
  o.summary << "eta 0.5 and 0.3, 20 points each, endpoints " << fmt(worst_end)
           << ", search oracle " << fmt(worst_ref) << ", SDP " << fmt(worst_sdp);
}

// 12. Noisy projective measurements.
void noisy(Outcome& o) {
  std::mt19937_64 g(1212);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  double worst_limit = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double f = unit(g), eta = unit(g);
    const PureStateHypotheses h = hypotheses_with_overlap(f, eta);
    for (const Mode& mode : {Mode::min_error(), Mode::unambiguous(), Mode::fixed_failure(0.1)}) {
      const auto a = discriminate_noisy_pair(h.phi, 1.0, h.psi, 1.0, eta, mode).report;
      const auto b = discriminate_projective_pair(h.phi, h.psi, eta, mode).report;
      worst_limit = std::max({worst_limit, std::abs(a.p_s - b.p_s), std::abs(a.p_e - b.p_e), std::abs(a.p_f - b.p_f)});
    }
  }
  int infeasible = 0;
  const PureStateHypotheses h = hypotheses_with_overlap(0.5, 0.5);
  for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      try {
        discriminate_noisy_pair(h.phi, mu, h.psi, nu, 0.5, Mode::unambiguous());
      } catch (const InfeasibleError&) {
        ++infeasible;
      }
    }
  double worst_oracle = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double f = unit(g), eta = unit(g), mu = unit(g), nu = unit(g);
    const PureStateHypotheses hh = hypotheses_with_overlap(f, eta);
    const double ps = discriminate_noisy_pair(hh.phi, mu, hh.psi, nu, eta, Mode::min_error()).report.p_s;
    const double orc = oracle_measurement_discrimination({make_noisy_qubit(hh.phi, mu), make_noisy_qubit(hh.psi, nu)},
                                                         {eta, 1.0 - eta}, Scheme::Ancilla, Mode::min_error())
                           .value;
    worst_oracle = std::max(worst_oracle, std::abs(ps - orc));
  }
  o.require(worst_limit <= 1e-10, "mu = nu = 1 limit off by " + fmt(worst_limit));
  o.require(infeasible == 25, std::to_string(infeasible) + "/25 grid points infeasible");
  o.require(worst_oracle <= 1e-3, "min-error vs oracle " + fmt(worst_oracle));
  o.summary << "pure limit " << fmt(worst_limit) << ", " << infeasible
           << "/25 infeasible, oracle " << fmt(worst_oracle);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"trine closed form", trine_closed_form},
      {"trine saturation", trine_saturation},
      {"entanglement gap", entanglement_gap},
      {"helstrom", helstrom},
      {"unambiguous regimes", unambiguous_regimes},
      {"two-trine pair", two_trine},
      {"symmetric triple", symmetric_triple},
      {"binary checker", binary_checker},
      {"perfect family", perfect_family},
      {"filter reduction", reduction},
      {"fixed failure rate", fixed_failure},
      {"noisy measurements", noisy},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    std::string line = o.summary.str();
    for (const auto& f : o.failures) line += (line.empty() ? "" : "; ") + f;
    failures += !o.failures.empty();
    std::printf("%s %2zu %-20s %s (%.2f s)\n", o.failures.empty() ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), line.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
