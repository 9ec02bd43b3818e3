#include "vnlab/squares.hpp"

#include <cmath>

#include "vnlab/optimize.hpp"

namespace vnlab {

namespace {

constexpr double kPurityTol = 1e-8;

void require_nested(const VnAlgebra& sub, const VnAlgebra& sup, const char* what) {
  if (sub.ambient_dim() != sup.ambient_dim()) throw ShapeMismatch(std::string("square: ") + what + " dimension mismatch");
  if (!sup.contains(sub)) throw NotNested(std::string("square: ") + what);
}

SquareTerms terms_of(const VnAlgebra& a, const VnAlgebra& m, const VnAlgebra& c, const VnAlgebra& b,
                     const cmat& rho) {
  return {entropy_bits(a.expectation(rho)), entropy_bits(b.expectation(rho)), entropy_bits(m.expectation(rho)),
          entropy_bits(c.expectation(rho))};
}

double value_of(const SquareTerms& t) { return t.first + t.second - t.within - t.meet; }

}  // namespace

SquareReport square_info(const VnAlgebra& first, const VnAlgebra& within, const VnAlgebra& meet,
                         const VnAlgebra& second, const cmat& rho, double tol) {
  require_nested(meet, first, "meet is not contained in the first algebra");
  require_nested(meet, second, "meet is not contained in the second algebra");
  require_nested(first, within, "first algebra is not contained in the ambient algebra");
  require_nested(second, within, "second algebra is not contained in the ambient algebra");
  require_density(rho, "square_info");
  if (rho.rows() != within.ambient_dim()) throw ShapeMismatch("square_info: state has the wrong dimension");
  SquareReport r;
  r.terms = terms_of(first, within, meet, second, rho);
  r.value_bits = value_of(r.terms);
  r.state_hash = state_hash(rho);
  r.commuting_defect = commuting_defect(first, second, meet);
  r.commuting = r.commuting_defect <= tol;
  r.tolerance = tol;
  r.nonnegative = r.value_bits >= -tol;
  return r;
}

SquareReport gen_cmi(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, const cmat& rho, double tol,
                     bool certify) {
  const VnAlgebra meet = intersect(s, t);
  SquareReport r = square_info(s, within, meet, t, rho, tol);
  if (!r.commuting) throw NotCommutingSquare("gen_cmi: E_S and E_T do not commute to E_{S∩T}");
  if (certify) r.recovery_gap = recovery_gap(s, t, within, rho);
  return r;
}

ChainRuleReport chain_rule(const VnAlgebra& first, const VnAlgebra& within, const VnAlgebra& meet,
                           const VnAlgebra& second, const VnAlgebra& mid_within, const VnAlgebra& mid_meet,
                           const cmat& rho, double tol) {
  // [A M; T S] on top of [T S; C B].
  require_nested(mid_meet, first, "T is not contained in A");
  require_nested(mid_meet, mid_within, "T is not contained in S");
  require_nested(first, within, "A is not contained in M");
  require_nested(mid_within, within, "S is not contained in M");
  require_nested(meet, mid_meet, "C is not contained in T");
  require_nested(meet, second, "C is not contained in B");
  require_nested(second, mid_within, "B is not contained in S");
  require_density(rho, "chain_rule");
  const double ha = entropy_bits(first.expectation(rho));
  const double hb = entropy_bits(second.expectation(rho));
  const double hm = entropy_bits(within.expectation(rho));
  const double hc = entropy_bits(meet.expectation(rho));
  const double hs = entropy_bits(mid_within.expectation(rho));
  const double ht = entropy_bits(mid_meet.expectation(rho));
  ChainRuleReport r;
  r.total = ha + hb - hm - hc;
  r.upper = ha + hs - hm - ht;
  r.lower = ht + hb - hs - hc;
  r.additivity_defect = std::abs(r.total - r.upper - r.lower);
  r.lower_commuting = commuting_defect(mid_meet, second, meet) <= tol;
  return r;
}

double recovery_gap(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, const cmat& rho,
                    bool swap_roles) {
  const VnAlgebra& keep = swap_roles ? t : s;
  const VnAlgebra& lose = swap_roles ? s : t;
  require_density(rho, "recovery_gap");
  const cmat omega = within.expectation(rho);
  const cmat sigma = keep.expectation(omega);
  const cmat reduced = lose.expectation(sigma);
  const cmat root = psd_sqrt(sigma);
  const cmat inv_root = psd_power(reduced, -0.5);
  const cmat recovered = root * lose.expectation(cmat(inv_root * lose.expectation(omega) * inv_root)) * root;
  const double f = fidelity(omega, hermitian_part(recovered));
  return f > 0 ? -2.0 * std::log2(f) : std::numeric_limits<double>::infinity();
}

ConverseResult ssa_converse_search(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, int budget,
                                   std::uint64_t seed, double tol) {
  const VnAlgebra meet = intersect(s, t);
  ConverseResult out;
  if (commuting_defect(s, t, meet) <= tol) return out;
  require_nested(s, within, "first algebra is not contained in the ambient algebra");
  require_nested(t, within, "second algebra is not contained in the ambient algebra");
  const Index d = s.ambient_dim();
  auto state_of = [d](const rvec& p) {
    cvec v(d);
    for (Index i = 0; i < d; ++i) v(i) = cplx(p(2 * i), p(2 * i + 1));
    const double nrm = v.norm();
    if (nrm == 0) v(0) = 1;
    return cmat(ket_to_density(v));
  };
  auto objective = [&](const rvec& p) {
    const cmat rho = state_of(p);
    return value_of(terms_of(s, within, meet, t, rho));
  };
  // Eigenvectors of generic elements of S and T seed the search, then random kets.
  std::vector<cvec> starts;
  Rng rng(seed);
  for (const VnAlgebra* alg : {&s, &t}) {
    const auto spec = eig_hermitian(random_hermitian_in(*alg, rng));
    for (Index j = 0; j < d; ++j) starts.push_back(spec.vectors.col(j));
  }
  double best = std::numeric_limits<double>::infinity();
  rvec best_point;
  std::size_t next = 0;
  NelderMeadOptions opts;
  while (out.evaluations < budget) {
    const cvec v = next < starts.size() ? starts[next] : random_ket(d, rng);
    ++next;
    rvec p(2 * d);
    for (Index i = 0; i < d; ++i) {
      p(2 * i) = v(i).real();
      p(2 * i + 1) = v(i).imag();
    }
    opts.max_evaluations = std::min(budget - out.evaluations, static_cast<int>(200 * d));
    if (opts.max_evaluations <= 2 * d + 1) break;
    const auto res = nelder_mead(objective, p, opts);
    out.evaluations += res.evaluations;
    if (res.value < best) {
      best = res.value;
      best_point = res.point;
    }
  }
  if (best_point.size() == 0) return out;
  out.value_bits = best;
  out.state = state_of(best_point);
  out.found = best < -tol;
  return out;
}

DualityReport duality_check(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, const cmat& psi,
                            double tol) {
  require_density(psi, "duality_check");
  if (std::abs((psi * psi).trace().real() - 1.0) > kPurityTol) throw InvalidDensity("duality_check: state is not pure");
  if (!within.is_factor()) throw NotFactor("duality_check: ambient algebra is not a factor");
  const Square sq = classify_square(s, t, within, tol);
  if (!sq.commuting) throw NotCommutingSquare("duality_check: square does not commute");
  if (!sq.co_commuting) throw NotCoCommuting("duality_check: commutant square does not commute");
  const VnAlgebra joint = join(s, t);
  const cmat rho = joint.expectation(psi);
  DualityReport r;
  r.lhs_bits = value_of(terms_of(s, joint, sq.meet, t, rho));
  const VnAlgebra s_c = commutant(s, within);
  const VnAlgebra t_c = commutant(t, within);
  r.rhs_bits = value_of(terms_of(s_c, join(s_c, t_c), intersect(s_c, t_c), t_c, psi));
  return r;
}

}  // namespace vnlab
