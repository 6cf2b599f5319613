#include "qmd/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmd/io.hpp"
#include "qmd/oracle.hpp"
#include "qmd/perfect.hpp"
#include "qmd/qubit.hpp"
#include "qmd/reduction.hpp"
#include "qmd/strategy.hpp"
#include "qmd/trine.hpp"

namespace qmd {

namespace {

// Raised for flag combinations CLI11 cannot express.
class FlagError : public Error {
 public:
  using Error::Error;
};

Json tolerances() {
  return Json{{"povm", kPovmTol}, {"tester", kTesterTol}, {"rank", kRankTol}};
}

Json witness_to_json(const PerfectWitness& w) {
  return Json{{"probe", ket_to_json(w.probe)}, {"certainty_outcome", w.certainty_outcome}, {"certifies", w.certifies}};
}

Mode make_mode(const std::string& name, std::optional<double> pf) {
  const Mode::Kind kind = parse_mode(name);
  if (kind == Mode::Kind::FixedFailure) {
    if (!pf) throw FlagError("--mode fixed-failure needs --pf");
    return Mode::fixed_failure(*pf);
  }
  if (pf) throw FlagError("--pf only applies to --mode fixed-failure");
  return {kind, 0.0};
}

Json mode_to_json(const Mode& m) {
  Json j{{"kind", to_string(m.kind)}};
  if (m.kind == Mode::Kind::FixedFailure) j["p_f"] = m.p_f;
  return j;
}

Json state_povm_to_json(const StatePovm& p) {
  Json j = Json::object();
  for (std::size_t k = 0; k < p.effects.size(); ++k) j[p.conclusions[k]] = matrix_to_json(p.effects[k].matrix());
  return j;
}

// Unit vectors with |<phi|psi>| = F; psi spreads its orthogonal part evenly
// over the remaining basis directions.
std::pair<Ket, Ket> filter_vectors(double f, std::size_t d) {
  Ket phi(d, 0.0), psi(d, 0.0);
  phi[0] = 1.0;
  psi[0] = f;
  const double rest = std::sqrt(std::max(0.0, 1.0 - f * f) / static_cast<double>(d - 1));
  for (std::size_t k = 1; k < d; ++k) psi[k] = rest;
  return {phi, psi};
}

std::vector<Ket> symmetric_vectors(std::size_t m) {
  std::vector<Ket> out;
  for (std::size_t k = 0; k < m; ++k) {
    const double a = std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    out.push_back({std::cos(a), std::sin(a)});
  }
  return out;
}

std::vector<Povm> projective_family(const std::vector<Ket>& vs) {
  std::vector<Povm> out;
  for (const auto& v : vs) out.push_back(make_projective_qubit(v));
  return out;
}

struct Options {
  // validate
  std::string validate_file;
  // perfect
  std::vector<std::string> perfect_files;
  // discriminate
  bool projective = false, noisy = false, filters = false, multi = false;
  double f = 0.5, eta = 0.5, mu = 1.0, nu = 1.0;
  std::size_t dim = 4, count = 3;
  std::vector<double> priors;
  std::string mode = "min-error";
  std::optional<double> pf;
  // trine-sweep
  double theta_min = 0.0, theta_max = std::numbers::pi;
  std::size_t steps = 181;
  std::string out_path;
  bool deg = false;
  // oracle
  std::string target;
  std::vector<std::string> oracle_files;
  double theta = std::numbers::pi;
  SearchConfig cfg;
};

int cmd_validate(const Options& o, std::ostream& out) {
  Json j{{"file", o.validate_file}, {"tolerance", kPovmTol}};
  try {
    const Povm p = validate_povm(read_raw_effects_file(o.validate_file));
    j["valid"] = true;
    j["dim"] = p.dim();
    j["outcomes"] = p.outcomes();
    out << j.dump(2) << '\n';
    return kExitOk;
  } catch (const PovmError& e) {
    j["valid"] = false;
    j["violation"] = to_string(e.kind());
    j["magnitude"] = e.magnitude();
    if (e.kind() == PovmError::Kind::NotHermitian || e.kind() == PovmError::Kind::NotPositive) j["effect"] = e.effect();
    j["message"] = e.what();
    out << j.dump(2) << '\n';
    return kExitInvalid;
  }
}

int cmd_perfect(const Options& o, std::ostream& out) {
  if (o.perfect_files.size() != 2) throw FlagError("perfect expects exactly two measurement files");
  const Povm m = read_povm_file(o.perfect_files[0]);
  const Povm n = read_povm_file(o.perfect_files[1]);
  if (m.dim() != n.dim() || m.outcomes() != n.outcomes()) throw DimensionError("perfect: devices differ in shape");
  Json j{{"files", o.perfect_files}, {"dim", m.dim()}, {"outcomes", m.outcomes()}};
  if (m.outcomes() == 2) {
    const auto w = binary_perfect_check(m, n);
    j["binary_witness"] = w ? witness_to_json(*w) : Json(nullptr);
  } else {
    j["binary_witness"] = nullptr;
  }
  const SimpleSchemeCheck s = simple_scheme_perfect_check(m, n);
  j["simple_min_overlap"] = s.min_value;
  j["simple_min_overlap_probe"] = ket_to_json(s.argmin);
  j["simple_exhaustive"] = s.exhaustive;
  const MinErrorPair me = minerror_pair(m, n);
  j["cb_pe"] = me.p_e;
  j["cb_value"] = me.cb_value;
  j["cb_exhaustive"] = me.exhaustive;
  const SimpleDistance sd = simple_scheme_distance(m, n);
  j["simple_distance"] = sd.value;
  j["simple_distance_probe"] = ket_to_json(sd.probe);
  j["tolerances"] = tolerances();
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_discriminate(const Options& o, std::ostream& out) {
  const int kinds = int(o.projective) + int(o.noisy) + int(o.filters) + int(o.multi);
  if (kinds != 1) throw FlagError("choose exactly one of --projective, --noisy, --filters, --multi");
  const Mode mode = make_mode(o.mode, o.pf);
  Json j{{"mode", mode_to_json(mode)}, {"tolerances", tolerances()}};

  if (o.multi) {
    if (mode.kind != Mode::Kind::MinError) throw FlagError("--multi supports --mode min-error only");
    std::vector<double> priors = o.priors;
    if (priors.empty()) priors.assign(o.count, 1.0 / static_cast<double>(o.count));
    if (priors.size() != o.count) throw FlagError("--priors needs one value per device");
    const auto vs = symmetric_vectors(o.count);
    const MultiSolution s = discriminate_multi_projective(vs, priors);
    Json devs = Json::array();
    for (const auto& v : vs) devs.push_back(ket_to_json(v));
    j["devices"] = {{"kind", "projective"}, {"vectors", devs}, {"priors", priors}};
    j["method"] = s.method;
    j["report"] = report_to_json(s.report);
    j["povm"] = state_povm_to_json(s.povm);
    j["tester"] = tester_to_json(s.tester);
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  if (o.filters) {
    if (o.dim < 3) throw FlagError("--filters needs --dim >= 3");
    if (o.f >= 1.0) throw FlagError("--filters needs --F < 1");
    const auto [phi, psi] = filter_vectors(o.f, o.dim);
    const FilterReduction fr = reduce_filters(phi, psi);
    const PairSolution s = discriminate_projective_pair(fr.phi, fr.psi, o.eta, mode);
    const Tester lifted = lift_tester(s.tester, fr.reduction);
    const auto report = performance(lifted, pair_hypotheses(make_filter(phi), make_filter(psi), o.eta));
    j["devices"] = {{"kind", "filters"}, {"phi", ket_to_json(phi)}, {"psi", ket_to_json(psi)}, {"eta", o.eta}};
    j["reduction"] = {{"original_dim", fr.reduction.original_dim},
                      {"reduced_dim", fr.reduction.reduced_dim},
                      {"identical_on_support", fr.reduction.identical_on_support},
                      {"embedding", matrix_to_json(fr.reduction.embedding)},
                      {"reduced_phi", ket_to_json(fr.phi)},
                      {"reduced_psi", ket_to_json(fr.psi)},
                      {"reduced_report", report_to_json(s.report)}};
    j["method"] = s.method;
    if (!s.note.empty()) j["note"] = s.note;
    j["report"] = report_to_json(report);
    j["tester"] = tester_to_json(lifted);
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  const PureStateHypotheses h = hypotheses_with_overlap(o.f, o.eta);
  PairSolution s = o.projective ? discriminate_projective_pair(h.phi, h.psi, o.eta, mode)
                                : discriminate_noisy_pair(h.phi, o.mu, h.psi, o.nu, o.eta, mode);
  j["devices"] = {{"kind", o.projective ? "projective" : "noisy"}, {"phi", ket_to_json(h.phi)},
                  {"psi", ket_to_json(h.psi)}, {"F", o.f}, {"eta", o.eta}};
  if (o.noisy) {
    j["devices"]["mu"] = o.mu;
    j["devices"]["nu"] = o.nu;
  }
  j["method"] = s.method;
  if (!s.note.empty()) j["note"] = s.note;
  j["report"] = report_to_json(s.report);
  j["povm"] = state_povm_to_json(s.povm);
  j["tester"] = tester_to_json(s.tester);
  if (s.simple) j["simple_tester"] = tester_to_json(*s.simple);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_trine_sweep(const Options& o, std::ostream& out) {
  const double scale = o.deg ? std::numbers::pi / 180.0 : 1.0;
  const double lo = o.theta_min * scale;
  const double hi = o.theta_max * scale;
  if (o.steps == 0) throw FlagError("--steps must be positive");
  if (o.steps > 1 && !(hi >= lo)) throw FlagError("--theta-max must not be below --theta-min");
  std::vector<double> grid;
  for (std::size_t k = 0; k < o.steps; ++k)
    grid.push_back(o.steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(o.steps - 1));
  const auto rows = trine_sweep(grid);
  for (const auto& r : rows)
    if (!r.verified) {
      std::ostringstream os;
      os << "trine tester does not reproduce the optimum at theta=" << r.theta;
      throw ConvergenceError(os.str());
    }
  if (o.out_path.empty()) {
    write_trine_csv(out, rows);
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw FormatError("cannot write " + o.out_path);
    write_trine_csv(f, rows);
    out << Json{{"rows", rows.size()}, {"out", o.out_path}, {"verification_tolerance", 1e-9}}.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  o.cfg.validate();
  const Mode mode = make_mode(o.mode, o.pf);
  Json j{{"target", o.target}, {"mode", mode_to_json(mode)}, {"config", config_to_json(o.cfg)}};
  const double theta = o.deg ? o.theta * std::numbers::pi / 180.0 : o.theta;

  if (o.target == "triple-simple") {
    const auto devs = projective_family(trine_vectors());
    const auto r = oracle_measurement_discrimination(devs, {1.0 / 3, 1.0 / 3, 1.0 / 3}, Scheme::Simple, mode, o.cfg);
    j["scheme"] = to_string(Scheme::Simple);
    j["value"] = r.value;
    j["params"] = params_to_json(r.params);
    j["report"] = report_to_json(r.report);
  } else if (o.target == "trine-ancilla") {
    const auto r = oracle_measurement_discrimination({make_trine(), make_trine(theta, true)}, {0.5, 0.5},
                                                     Scheme::Ancilla, mode, o.cfg);
    j["scheme"] = to_string(Scheme::Ancilla);
    j["theta"] = theta;
    j["value"] = r.value;
    j["params"] = params_to_json(r.params);
    j["report"] = report_to_json(r.report);
  } else if (o.target == "projective-states") {
    const PureStateHypotheses h = hypotheses_with_overlap(o.f, o.eta);
    const auto r = oracle_state_povm({HermitianOperator::projector(h.phi), HermitianOperator::projector(h.psi)},
                                     {o.eta, 1.0 - o.eta}, mode, o.cfg);
    j["F"] = o.f;
    j["eta"] = o.eta;
    j["value"] = r.value;
    j["p_s"] = r.p_s;
    j["p_e"] = r.p_e;
    j["p_f"] = r.p_f;
    j["params"] = params_to_json(r.params);
    j["povm"] = state_povm_to_json(r.povm);
  } else if (o.target == "overlap") {
    if (o.oracle_files.size() != 2) throw FlagError("--target overlap needs two --files");
    const auto r = oracle_min_sum_overlap(read_povm_file(o.oracle_files[0]), read_povm_file(o.oracle_files[1]), o.cfg);
    j["files"] = o.oracle_files;
    j["value"] = r.value;
    j["params"] = {{"polar", r.polar}, {"azimuth", r.azimuth}};
    j["probe"] = ket_to_json(r.probe);
  } else {
    throw FlagError("unknown oracle target " + o.target);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Discrimination of quantum measurements: analysis and verification tools", "qmd"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check that a measurement file is a POVM");
  validate->add_option("file", o.validate_file, "Measurement JSON")->required();

  auto* perfect = app.add_subcommand("perfect", "Perfect-distinguishability and minimum-error summary of a pair");
  perfect->add_option("files", o.perfect_files, "Two measurement JSON files")->required()->expected(2);

  const auto unit = CLI::Range(0.0, 1.0);
  const std::vector<std::string> modes{"min-error", "unambiguous", "fixed-failure"};

  auto* disc = app.add_subcommand("discriminate", "Optimal discrimination of a pair or family of measurements");
  disc->add_flag("--projective", o.projective, "Projective qubit pair with overlap F");
  disc->add_flag("--noisy", o.noisy, "Noisy qubit pair (mu, nu)");
  disc->add_flag("--filters", o.filters, "Filter pair in --dim dimensions, reduced to a qubit");
  disc->add_flag("--multi", o.multi, "Symmetric family of --count projective qubit measurements");
  disc->add_option("--F", o.f, "Overlap |<psi|phi>|")->check(unit);
  disc->add_option("--eta", o.eta, "Prior of the first device")->check(unit);
  disc->add_option("--mu", o.mu, "Visibility of the first noisy device")->check(unit);
  disc->add_option("--nu", o.nu, "Visibility of the second noisy device")->check(unit);
  disc->add_option("--dim", o.dim, "Dimension of the filter pair")->check(CLI::Range(3, 16));
  disc->add_option("--count", o.count, "Number of devices for --multi")->check(CLI::Range(2, 8));
  disc->add_option("--priors", o.priors, "Priors for --multi");
  disc->add_option("--mode", o.mode, "min-error | unambiguous | fixed-failure")->check(CLI::IsMember(modes));
  disc->add_option("--pf", o.pf, "Target failure rate for fixed-failure")->check(unit);

  auto* sweep = app.add_subcommand("trine-sweep", "Optimal versus maximally entangled probe for the trine pair");
  sweep->add_option("--theta-min", o.theta_min, "First angle");
  sweep->add_option("--theta-max", o.theta_max, "Last angle");
  sweep->add_option("--steps", o.steps, "Number of angles")->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out_path, "CSV output path (default stdout)");
  sweep->add_flag("--deg", o.deg, "Angles in degrees");

  const std::vector<std::string> targets{"triple-simple", "trine-ancilla", "projective-states", "overlap"};
  auto* orc = app.add_subcommand("oracle", "Brute-force reference search");
  orc->add_option("--target", o.target, "triple-simple | trine-ancilla | projective-states | overlap")
      ->required()
      ->check(CLI::IsMember(targets));
  orc->add_option("--files", o.oracle_files, "Measurement files for --target overlap");
  orc->add_option("--theta", o.theta, "Rotation angle for trine-ancilla");
  orc->add_flag("--deg", o.deg, "Angles in degrees");
  orc->add_option("--F", o.f, "Overlap for projective-states")->check(unit);
  orc->add_option("--eta", o.eta, "Prior for projective-states")->check(unit);
  orc->add_option("--mode", o.mode, "min-error | unambiguous | fixed-failure")->check(CLI::IsMember(modes));
  orc->add_option("--pf", o.pf, "Target failure rate for fixed-failure")->check(unit);
  orc->add_option("--grid-step", o.cfg.grid_step_deg, "Angular grid step in degrees");
  orc->add_option("--rounds", o.cfg.refine_rounds, "Refinement rounds");
  orc->add_option("--shrink", o.cfg.shrink, "Step shrink factor per round");
  orc->add_option("--tolerance", o.cfg.tolerance, "Smallest refinement step");
  orc->add_option("--restarts", o.cfg.restarts, "Random restarts");
  orc->add_option("--seed", o.cfg.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadFlags;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*perfect) return cmd_perfect(o, out);
    if (*disc) return cmd_discriminate(o, out);
    if (*sweep) return cmd_trine_sweep(o, out);
    if (*orc) return cmd_oracle(o, out);
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const PovmError& e) {
    err << "invalid measurement: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const FormatError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitBadFlags;
}

}  // namespace qmd
