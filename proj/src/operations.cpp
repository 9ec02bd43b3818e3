#include <cmath>

#include "vnlab/channels.hpp"
#include "vnlab/squares.hpp"

namespace vnlab {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

double frob_gap(const cmat& a, const cmat& b) { return (a - b).norm(); }

bool superops_commute(const cmat& a, const cmat& b, double tol) { return frob_gap(a * b, b * a) <= tol; }

bool is_unitary(const cmat& u, Index d, double tol) {
  return u.rows() == d && u.cols() == d && frob_gap(u.adjoint() * u, cmat::Identity(d, d)) <= tol;
}

bool square_commutes(const VnAlgebra& s, const VnAlgebra& t, double tol) {
  return commuting_defect(s, t, intersect(s, t)) <= tol;
}

// x ⊗ 1_c ↦ x for every element; the caller has checked a ⊆ M_{d/c} ⊗ 1.
VnAlgebra drop_trailing(const VnAlgebra& a, Index c) {
  const Index kept = a.ambient_dim() / c;
  std::vector<cmat> gens;
  for (const auto& x : a.elements()) gens.push_back(partial_trace(x, {kept, c}, {0}) / double(c));
  return generate(kept, gens);
}

cmat pad_with_ground(const cmat& rho, Index c) {
  cmat ground = cmat::Zero(c, c);
  ground(0, 0) = 1;
  return tensor(rho, ground);
}

}  // namespace

double configuration_cmi(const Configuration& c) { return gen_cmi(c.s, c.t, join(c.s, c.t), c.rho).value_bits; }

std::string step_name(const OperationStep& s) {
  return std::visit(Overloaded{[](const step::Extend&) { return std::string("extend"); },
                               [](const step::ApplyChannel&) { return std::string("channel"); },
                               [](const step::HeisenbergUnitary&) { return std::string("unitary-heisenberg"); },
                               [](const step::Rename&) { return std::string("unitary-rename"); },
                               [](const step::ShrinkS&) { return std::string("shrink-S"); },
                               [](const step::EnlargeT&) { return std::string("enlarge-T"); },
                               [](const step::Restrict&) { return std::string("restrict"); }},
                    s);
}

ValidatedOperation build_operation(const OperationPlan& plan, const Square& square, double tol) {
  if (!square.commuting) throw NotCommutingSquare("build_operation: input square does not commute");
  const bool swap = plan.party == Party::T;
  VnAlgebra s = swap ? square.second : square.first;
  VnAlgebra t = swap ? square.first : square.second;
  std::vector<std::pair<VnAlgebra, VnAlgebra>> stages;
  auto record = [&] { stages.emplace_back(swap ? t : s, swap ? s : t); };
  record();

  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const Index d = s.ambient_dim();
    auto reject = [i](const std::string& why) { return StepRejected(i, why); };
    std::visit(
        Overloaded{
            [&](const step::Extend& e) {
              if (e.aux_dim < 1) throw reject("auxiliary dimension must be positive");
              s = tensor(s, VnAlgebra::full(e.aux_dim));
              t = tensor(t, VnAlgebra::trivial(e.aux_dim));
            },
            [&](const step::ApplyChannel& c) {
              const Channel& phi = c.channel;
              if (phi.in_dim() != d || phi.out_dim() != d) throw reject("channel does not act on the current space");
              if (!is_bimodule(phi, s, VnAlgebra::full(d), tol)) throw reject("channel is not an S-bimodule");
              const cmat sp = phi.superoperator();
              const double slack = tol * double(d);
              if (!superops_commute(sp, s.superoperator(), slack)) throw reject("channel does not commute with E_S");
              if (!superops_commute(sp, join(s, t).superoperator(), slack))
                throw reject("channel does not commute with E_ST");
              if (c.certificate && c.certificate->isometry.rows() != d)
                throw reject("certificate must keep the dimension");
              if (!is_t_preserving(phi, t, c.certificate, tol)) throw reject("channel is not T-preserving");
              if (c.certificate) t = c.certificate->target;
            },
            [&](const step::HeisenbergUnitary& h) {
              if (!is_unitary(h.unitary, d, tol)) throw reject("matrix is not unitary");
              const VnAlgebra accessible = intersect(s, commutant(intersect(s, t)));
              if (!accessible.contains(h.unitary, tol)) throw reject("unitary is not in S ∩ (S ∩ T)'");
            },
            [&](const step::Rename& r) {
              if (!is_unitary(r.unitary, d, tol)) throw reject("matrix is not unitary");
              s = conjugate(s, r.unitary);
              t = conjugate(t, r.unitary);
            },
            [&](const step::ShrinkS& k) {
              if (k.algebra.ambient_dim() != d) throw reject("algebra acts on a different space");
              if (!s.contains(k.algebra)) throw reject("new S is not contained in S");
              if (!same_algebra(intersect(k.algebra, t), intersect(s, t))) throw reject("S ∩ T changes");
              s = k.algebra;
            },
            [&](const step::EnlargeT& k) {
              if (k.algebra.ambient_dim() != d) throw reject("algebra acts on a different space");
              if (!k.algebra.contains(t)) throw reject("new T does not contain T");
              if (!same_algebra(join(s, k.algebra), join(s, t))) throw reject("S ∨ T changes");
              t = k.algebra;
            },
            [&](const step::Restrict& r) {
              if (r.drop_dim <= 1) return;
              if (d % r.drop_dim != 0) throw reject("dropped factor does not divide the dimension");
              const VnAlgebra host =
                  tensor(VnAlgebra::full(d / r.drop_dim), VnAlgebra::trivial(r.drop_dim));
              if (!host.contains(join(s, t))) throw reject("dropped factor carries part of S ∨ T");
              s = drop_trailing(s, r.drop_dim);
              t = drop_trailing(t, r.drop_dim);
            }},
        plan.steps[i]);
    if (!square_commutes(s, t, tol)) throw reject("square no longer commutes");
    record();
  }
  return ValidatedOperation(plan, std::move(stages));
}

std::vector<Configuration> ValidatedOperation::trace(const cmat& rho) const {
  const auto& [s0, t0] = stages_.front();
  if (rho.rows() != s0.ambient_dim()) throw ShapeMismatch("operation: state has the wrong dimension");
  require_density(rho, "operation");
  std::vector<Configuration> out{{s0, t0, rho}};
  cmat cur = rho;
  for (std::size_t i = 0; i < plan_.steps.size(); ++i) {
    const auto& [prev_s, prev_t] = stages_[i];
    std::visit(Overloaded{[&](const step::Extend& e) { cur = pad_with_ground(cur, e.aux_dim); },
                          [&](const step::ApplyChannel& c) { cur = c.channel.apply(cur); },
                          [&](const step::HeisenbergUnitary& h) { cur = h.unitary.adjoint() * cur * h.unitary; },
                          [&](const step::Rename& r) { cur = r.unitary * cur * r.unitary.adjoint(); },
                          [](const step::ShrinkS&) {}, [](const step::EnlargeT&) {},
                          [&](const step::Restrict& r) {
                            cur = join(prev_s, prev_t).expectation(cur);
                            if (r.drop_dim <= 1) return;
                            const Index kept = cur.rows() / r.drop_dim;
                            const cmat reduced = partial_trace(cur, {kept, r.drop_dim}, {0});
                            const cmat mixed = cmat::Identity(r.drop_dim, r.drop_dim) / double(r.drop_dim);
                            if (trace_distance(cur, tensor(reduced, mixed)) > kMixtureTol)
                              throw ToleranceFailure("restrict: dropped factor is not completely mixed");
                            cur = reduced;
                          }},
               plan_.steps[i]);
    cur = hermitian_part(cur);
    out.push_back({stages_[i + 1].first, stages_[i + 1].second, cur});
  }
  return out;
}

Configuration ValidatedOperation::apply(const cmat& rho) const { return trace(rho).back(); }

AveragedSquare covariant_average(const std::vector<WeightedUnitary>& unitaries, const Square& square,
                                 const cmat& rho, const VnAlgebra& new_s, const VnAlgebra& new_t, double tol) {
  if (unitaries.empty()) throw ShapeMismatch("covariant_average: no unitaries");
  if (!square.commuting) throw NotCommutingSquare("covariant_average: input square does not commute");
  const VnAlgebra& s = square.first;
  const VnAlgebra& t = square.second;
  const Index d = s.ambient_dim();
  require_density(rho, "covariant_average");
  if (rho.rows() != d || new_s.ambient_dim() != d || new_t.ambient_dim() != d)
    throw ShapeMismatch("covariant_average: dimensions differ");
  double total = 0;
  for (const auto& wu : unitaries) {
    if (wu.weight < 0) throw DomainError("covariant_average: negative weight");
    total += wu.weight;
  }
  if (std::abs(total - 1.0) > kChannelTol) throw DomainError("covariant_average: weights do not sum to one");

  const VnAlgebra joint = join(s, t);
  const std::vector<cmat> expectations{s.superoperator(), t.superoperator(), joint.superoperator(),
                                       square.meet.superoperator()};
  const double slack = tol * double(d);
  cmat average = cmat::Zero(d * d, d * d);
  std::vector<cmat> gens;
  cmat out = cmat::Zero(d, d);
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const cmat& u = unitaries[i].unitary;
    if (!is_unitary(u, d, tol)) throw DomainError("covariant_average: matrix is not unitary");
    const cmat ad = tensor(cmat(u.conjugate()), u);
    for (const auto& e : expectations)
      if (!superops_commute(ad, e, slack)) throw NotCovariant(i);
    average += unitaries[i].weight * ad;
    out += unitaries[i].weight * u * rho * u.adjoint();
    gens.push_back(u);
  }
  const VnAlgebra r = commutant(generate(d, gens));
  if (frob_gap(average, r.superoperator()) > slack)
    throw ConstraintViolated("the average is not the conditional expectation onto its fixed points");
  if (!same_algebra(intersect(new_s, r), intersect(s, r))) throw ConstraintViolated("S~ ∩ R = S ∩ R");
  if (!same_algebra(intersect(new_t, r), intersect(t, r))) throw ConstraintViolated("T~ ∩ R = T ∩ R");
  if (!same_algebra(intersect(intersect(new_s, new_t), r), intersect(square.meet, r)))
    throw ConstraintViolated("S~ ∩ T~ ∩ R = S ∩ T ∩ R");
  if (!same_algebra(join(new_s, new_t), joint)) throw ConstraintViolated("S~ T~ = S T");
  Square replaced = classify_square(new_s, new_t, joint, tol);
  if (!replaced.commuting) throw ConstraintViolated("S~, T~ commuting square");
  return {hermitian_part(out), std::move(replaced), r};
}

SwappedSquare picture_swap(const Square& square, const VnAlgebra& r, const VnAlgebra& new_s, const cmat& rho,
                           double tol) {
  const VnAlgebra& s = square.first;
  const VnAlgebra& t = square.second;
  const Index d = s.ambient_dim();
  if (r.ambient_dim() != d || new_s.ambient_dim() != d || rho.rows() != d)
    throw ShapeMismatch("picture_swap: dimensions differ");
  require_density(rho, "picture_swap");
  if (!r.contains(t)) throw ConstraintViolated("R ∩ T = T");
  const VnAlgebra joint = join(s, t);
  const std::vector<cmat> expectations{s.superoperator(), t.superoperator(), joint.superoperator(),
                                       square.meet.superoperator()};
  const double slack = tol * double(d);
  const cmat pr = r.superoperator();
  const cmat pnew = new_s.superoperator();
  for (const auto& e : expectations) {
    if (!superops_commute(pr, e, slack)) throw ConstraintViolated("E_R commutes with E_S, E_T, E_ST, E_{S∩T}");
    if (!superops_commute(pnew, e, slack))
      throw ConstraintViolated("E_S~ commutes with E_S, E_T, E_ST, E_{S∩T}");
  }
  if (!superops_commute(pnew, pr, slack)) throw ConstraintViolated("E_S~ commutes with E_R");
  if (!same_algebra(intersect(r, new_s), intersect(r, s))) throw ConstraintViolated("R ∩ S~ = R ∩ S");

  const cmat mixed = hermitian_part(r.expectation(rho));
  const VnAlgebra new_joint = join(new_s, t);
  SwappedSquare out{mixed, classify_square(new_s, t, new_joint, tol), 0, 0};
  out.before_bits = square_info(s, joint, square.meet, t, rho, tol).value_bits;
  out.after_bits = square_info(new_s, new_joint, out.square.meet, t, mixed, tol).value_bits;
  if (out.after_bits > out.before_bits + tol)
    throw ToleranceFailure("picture_swap: generalised CMI increased");
  return out;
}

}  // namespace vnlab
