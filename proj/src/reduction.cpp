#include "qmd/reduction.hpp"

#include <cmath>
#include <sstream>

namespace qmd {

namespace {

Ket restrict_to(const ComplexMatrix& v, const Ket& x) { return v.adjoint() * x; }

}  // namespace

ReductionResult reduce_pair(const Povm& m, const Povm& n) {
  if (m.dim() != n.dim() || m.outcomes() != n.outcomes()) throw DimensionError("reduce_pair: devices differ in shape");
  const std::size_t d = m.dim();
  ReductionResult r;
  r.original_dim = d;
  r.p_projector = HermitianOperator::zero(d);
  for (std::size_t j = 0; j < m.outcomes(); ++j) {
    HermitianOperator q = subspace_intersection(eigenspace_projector(m[j], 1.0), eigenspace_projector(n[j], 1.0));
    r.p_projector += q;
    r.q_projectors.push_back(std::move(q));
  }
  const HermitianOperator rest = HermitianOperator::identity(d) - r.p_projector;
  r.embedding = range_basis(rest);
  r.reduced_dim = r.embedding.cols();
  r.identical_on_support = r.reduced_dim == 0;
  if (r.reduced_dim > 0) {
    std::vector<HermitianOperator> mt, nt;
    for (std::size_t j = 0; j < m.outcomes(); ++j) {
      mt.push_back(congruence(r.embedding.adjoint(), m[j]));
      nt.push_back(congruence(r.embedding.adjoint(), n[j]));
    }
    r.reduced_pair.emplace(validate_povm(mt), validate_povm(nt));
  }
  return r;
}

Povm make_filter(const Ket& v, std::size_t rank_one_outcome) {
  if (rank_one_outcome > 1) throw InvalidArgument("make_filter: outcome must be 0 or 1");
  if (std::abs(norm(v) - 1.0) > 1e-10) throw InvalidArgument("make_filter: expected a unit vector");
  const HermitianOperator p = HermitianOperator::projector(v);
  const HermitianOperator rest = HermitianOperator::identity(v.size()) - p;
  return rank_one_outcome == 0 ? validate_povm(std::vector<HermitianOperator>{p, rest})
                               : validate_povm(std::vector<HermitianOperator>{rest, p});
}

FilterReduction reduce_filters(const Ket& phi, const Ket& psi) {
  if (phi.size() != psi.size()) throw DimensionError("reduce_filters: vectors differ in dimension");
  if (phi.size() < 2) throw DimensionError("reduce_filters: dimension must be at least 2");
  if (std::abs(std::abs(inner(phi, psi)) - 1.0) < 1e-10)
    throw InvalidArgument("reduce_filters: parallel vectors describe identical filters");

  FilterReduction out{Ket{}, Ket{}, make_projective_qubit(Ket{1.0, 0.0}), make_projective_qubit(Ket{1.0, 0.0}),
                      reduce_pair(make_filter(phi), make_filter(psi))};
  if (out.reduction.reduced_dim != 2) {
    std::ostringstream os;
    os << "reduce_filters: expected a two-dimensional relevant subspace, found " << out.reduction.reduced_dim;
    throw InvalidArgument(os.str());
  }
  out.phi = normalized(restrict_to(out.reduction.embedding, phi));
  out.psi = normalized(restrict_to(out.reduction.embedding, psi));
  out.m = make_projective_qubit(out.phi);
  out.n = make_projective_qubit(out.psi);
  return out;
}

std::optional<PerfectWitness> opposite_filters_witness(const Ket& phi, const Ket& psi) {
  if (phi.size() != psi.size()) throw DimensionError("opposite_filters_witness: vectors differ in dimension");
  const std::size_t d = phi.size();
  const HermitianOperator span =
      support_projector(HermitianOperator::projector(phi) + HermitianOperator::projector(psi));
  const HermitianOperator outside = HermitianOperator::identity(d) - span;
  if (projector_rank(outside) == 0) return std::nullopt;
  PerfectWitness w;
  w.probe = canonical_phase(normalized(range_basis(outside).col(0)));
  w.certainty_outcome = 1;
  w.certifies = {1, 0};
  return w;
}

Tester lift_tester(const Tester& reduced, const ReductionResult& r) {
  if (r.reduced_dim == 0) throw InvalidArgument("lift_tester: nothing to lift, the devices agree everywhere");
  if (reduced.dim() != r.reduced_dim) throw DimensionError("lift_tester: tester does not act on the reduced space");
  std::vector<std::vector<HermitianOperator>> blocks(reduced.outcomes());
  for (std::size_t j = 0; j < reduced.outcomes(); ++j)
    for (std::size_t c = 0; c < reduced.conclusions().size(); ++c)
      blocks[j].push_back(congruence(r.embedding, reduced.block(j, c)));
  return Tester(reduced.conclusions(), std::move(blocks));
}

}  // namespace qmd
