#include "qmd/testers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmd {

namespace {

constexpr double kProbTol = 1e-12;

double clamp_probability(double p, const char* who) {
  if (p < -kProbTol || p > 1.0 + kProbTol) {
    std::ostringstream os;
    os << who << ": probability " << p << " outside [0,1]";
    throw InvalidArgument(os.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) s += (a(i, k) * b(k, i)).real();
  return s;
}

}  // namespace

Tester::Tester(std::vector<std::string> conclusions, std::vector<std::vector<HermitianOperator>> blocks,
               double tol)
    : conclusions_(std::move(conclusions)), blocks_(std::move(blocks)) {
  if (conclusions_.empty()) throw InvalidArgument("Tester: no conclusions");
  for (std::size_t c = 0; c < conclusions_.size(); ++c)
    for (std::size_t k = c + 1; k < conclusions_.size(); ++k)
      if (conclusions_[c] == conclusions_[k]) throw InvalidArgument("Tester: duplicate conclusion " + conclusions_[c]);
  if (blocks_.empty()) throw InvalidArgument("Tester: no device outcomes");

  const std::size_t d = blocks_.front().empty() ? 0 : blocks_.front().front().dim();
  if (d == 0) throw DimensionError("Tester: empty blocks");
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (blocks_[j].size() != conclusions_.size())
      throw DimensionError("Tester: each outcome needs one block per conclusion");
    HermitianOperator sum = HermitianOperator::zero(d);
    for (std::size_t c = 0; c < blocks_[j].size(); ++c) {
      const auto& h = blocks_[j][c];
      if (h.dim() != d) throw DimensionError("Tester: blocks differ in dimension");
      const double lo = min_eigenvalue(h);
      if (lo < -tol) {
        std::ostringstream os;
        os << "Tester: block (" << j << ", " << conclusions_[c] << ") has eigenvalue " << lo;
        throw NotPositiveError(os.str(), lo);
      }
      sum += h;
    }
    if (j == 0) {
      normalization_ = sum;
      if (std::abs(sum.trace() - 1.0) > tol) {
        std::ostringstream os;
        os << "Tester: normalization has trace " << sum.trace();
        throw InvalidArgument(os.str());
      }
    } else {
      const double gap = max_abs_diff(sum, normalization_);
      if (gap > tol) {
        std::ostringstream os;
        os << "Tester: outcome " << j << " normalization differs by " << gap;
        throw InvalidArgument(os.str());
      }
    }
  }
}

std::size_t Tester::conclusion_index(const std::string& label) const {
  const auto it = std::find(conclusions_.begin(), conclusions_.end(), label);
  if (it == conclusions_.end()) throw InvalidArgument("unknown conclusion: " + label);
  return static_cast<std::size_t>(it - conclusions_.begin());
}

bool Tester::has_conclusion(const std::string& label) const {
  return std::find(conclusions_.begin(), conclusions_.end(), label) != conclusions_.end();
}

std::vector<double> conditional_distribution(const Tester& t, const Povm& m) {
  if (m.outcomes() != t.outcomes() || m.dim() != t.dim()) {
    std::ostringstream os;
    os << "tester is for " << t.outcomes() << " outcomes on dim " << t.dim() << ", device has "
       << m.outcomes() << " outcomes on dim " << m.dim();
    throw DimensionError(os.str());
  }
  std::vector<double> p(t.conclusions().size(), 0.0);
  for (std::size_t c = 0; c < p.size(); ++c) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.outcomes(); ++j) s += trace_product(t.block(j, c), m[j]);
    p[c] = clamp_probability(s, "conditional_prob");
  }
  return p;
}

double conditional_prob(const Tester& t, const Povm& m, const std::string& c) {
  const std::size_t idx = t.conclusion_index(c);
  return conditional_distribution(t, m)[idx];
}

DiscriminationReport performance(const Tester& t, const std::vector<Hypothesis>& hypotheses) {
  if (hypotheses.empty()) throw InvalidArgument("performance: no hypotheses");
  double total = 0.0;
  for (const auto& h : hypotheses) {
    if (h.prior < 0.0) throw InvalidArgument("performance: negative prior");
    total += h.prior;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "performance: priors sum to " << total;
    throw InvalidArgument(os.str());
  }

  DiscriminationReport r;
  r.conclusions = t.conclusions();
  const bool has_fail = t.has_conclusion(kFail);
  const std::size_t fail = has_fail ? t.conclusion_index(kFail) : 0;
  for (const auto& h : hypotheses) {
    const auto dist = conditional_distribution(t, h.device);
    r.hypotheses.push_back(h.label);
    r.table.push_back(dist);
    if (t.has_conclusion(h.label)) r.p_s += h.prior * dist[t.conclusion_index(h.label)];
    if (has_fail) r.p_f += h.prior * dist[fail];
  }
  r.p_s = clamp_probability(r.p_s, "performance");
  r.p_f = clamp_probability(r.p_f, "performance");
  r.p_e = clamp_probability(1.0 - r.p_s - r.p_f, "performance");
  return r;
}

Tester symmetrize(const std::vector<HermitianOperator>& raw, const std::vector<std::string>& conclusions,
                  const HermitianOperator& rho, std::size_t n, double tol) {
  if (raw.size() != conclusions.size()) throw DimensionError("symmetrize: one operator per conclusion");
  const std::size_t d = rho.dim();
  HermitianOperator sum = HermitianOperator::zero(n * d);
  for (const auto& tc : raw) {
    if (tc.dim() != n * d) throw DimensionError("symmetrize: operator is not on C^n (x) C^d");
    sum += tc;
  }
  const double gap = max_abs_diff(sum, kron(ComplexMatrix::identity(n), rho.matrix()));
  if (gap > tol) {
    std::ostringstream os;
    os << "symmetrize: sum_c T_c differs from I (x) rho by " << gap;
    throw InvalidArgument(os.str());
  }
  std::vector<std::vector<HermitianOperator>> blocks(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& tc : raw) {
      ComplexMatrix b(d, d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) b(r, c) = tc(j * d + r, j * d + c);
      blocks[j].push_back(hermitian_part(b));
    }
  }
  return Tester(conclusions, std::move(blocks), tol);
}

std::vector<HermitianOperator> block_form(const Tester& t) {
  const std::size_t n = t.outcomes();
  std::vector<HermitianOperator> out;
  for (std::size_t c = 0; c < t.conclusions().size(); ++c) {
    ComplexMatrix big(n * t.dim(), n * t.dim());
    for (std::size_t j = 0; j < n; ++j)
      big += kron(outer(basis_ket(n, j), basis_ket(n, j)), t.block(j, c).matrix());
    out.push_back(hermitian_part(big));
  }
  return out;
}

double choi_form_prob(const HermitianOperator& tc, const Povm& m) {
  const HermitianOperator choi_t = choi(m).matrix.transpose();
  if (tc.dim() != choi_t.dim()) throw DimensionError("choi_form_prob: size mismatch");
  return trace_product(tc, choi_t);
}

Tester tester_from_protocol(const Ket& probe, std::size_t d, std::size_t a,
                            const std::vector<ProtocolBranch>& branches,
                            const std::vector<std::string>& conclusions) {
  if (probe.size() != d * a) throw DimensionError("tester_from_protocol: probe is not on C^d (x) C^a");
  if (std::abs(norm(probe) - 1.0) > 1e-10) throw InvalidArgument("tester_from_protocol: probe is not normalized");
  if (branches.empty()) throw InvalidArgument("tester_from_protocol: no branches");

  const ComplexMatrix p = outer(probe, probe);
  const ComplexMatrix id_d = ComplexMatrix::identity(d);
  std::vector<std::vector<HermitianOperator>> blocks;
  for (const auto& br : branches) {
    if (br.ancilla_measurement.dim() != a)
      throw DimensionError("tester_from_protocol: ancilla measurement has wrong dimension");
    if (br.conclusion_of.size() != br.ancilla_measurement.outcomes())
      throw DimensionError("tester_from_protocol: need one conclusion per ancilla outcome");
    std::vector<ComplexMatrix> acc(conclusions.size(), ComplexMatrix(d, d));
    for (std::size_t k = 0; k < br.ancilla_measurement.outcomes(); ++k) {
      const auto it = std::find(conclusions.begin(), conclusions.end(), br.conclusion_of[k]);
      if (it == conclusions.end())
        throw InvalidArgument("tester_from_protocol: unknown conclusion " + br.conclusion_of[k]);
      // tr_A[(I (x) sqrt(E)) P (I (x) sqrt(E))] is PSD and equals tr_A[(I (x) E) P].
      const ComplexMatrix root = kron(id_d, sqrt_psd(br.ancilla_measurement[k]).matrix());
      const ComplexMatrix sandwiched = root * p * root;
      acc[static_cast<std::size_t>(it - conclusions.begin())] +=
          partial_trace(sandwiched, d, a, Subsystem::A);
    }
    std::vector<HermitianOperator> row;
    for (const auto& m : acc) row.push_back(hermitian_part(m));
    blocks.push_back(std::move(row));
  }
  return Tester(conclusions, std::move(blocks));
}

Tester simple_tester(const HermitianOperator& probe, const std::vector<std::string>& conclusions,
                     const std::vector<std::vector<double>>& q) {
  require_density(probe);
  std::vector<std::vector<HermitianOperator>> blocks;
  for (const auto& row : q) {
    if (row.size() != conclusions.size()) throw DimensionError("simple_tester: assignment row has wrong length");
    double total = 0.0;
    for (double v : row) {
      if (v < 0.0) throw InvalidArgument("simple_tester: negative assignment probability");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("simple_tester: assignment row does not sum to one");
    std::vector<HermitianOperator> bl;
    for (double v : row) bl.push_back(probe * v);
    blocks.push_back(std::move(bl));
  }
  return Tester(conclusions, std::move(blocks));
}

Tester mix(const Tester& a, const Tester& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("mix: weight outside [0,1]");
  if (a.conclusions() != b.conclusions() || a.outcomes() != b.outcomes() || a.dim() != b.dim())
    throw DimensionError("mix: testers differ in shape or conclusions");
  std::vector<std::vector<HermitianOperator>> blocks(a.outcomes());
  for (std::size_t j = 0; j < a.outcomes(); ++j)
    for (std::size_t c = 0; c < a.conclusions().size(); ++c)
      blocks[j].push_back(a.block(j, c) * lambda + b.block(j, c) * (1.0 - lambda));
  return Tester(a.conclusions(), std::move(blocks));
}

}  // namespace qmd
