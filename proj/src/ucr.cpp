#include "vnlab/ucr.hpp"

#include <cmath>

#include "vnlab/entropy.hpp"

namespace vnlab {

namespace {

void require_basis(const cmat& u, Index d, const char* where) {
  if (u.rows() != d || u.cols() != d) throw ShapeMismatch(std::string(where) + ": basis has the wrong size");
  if ((u.adjoint() * u - cmat::Identity(d, d)).norm() > 1e-9)
    throw ShapeMismatch(std::string(where) + ": basis columns are not orthonormal");
}

double log2d(Index d) { return std::log2(double(d)); }

// H(X|B) for the measurement of A in `basis`, ρ on A⊗B.
double measured_conditional(const cmat& basis, const cmat& rho_ab, Index b_dim, double h_b) {
  return entropy_bits(VnAlgebra::diagonal_in(basis).expectation(rho_ab, b_dim)) - h_b;
}

struct MemoryTerms {
  double lhs;
  double cond_a;  // H(A|B)
};

MemoryTerms memory_terms(Index d, const cmat& rho_ab, const cmat& x_basis, const cmat& z_basis,
                         const char* where) {
  if (d < 1 || rho_ab.rows() % d != 0) throw ShapeMismatch(std::string(where) + ": d does not divide the state");
  require_density(rho_ab, where);
  require_basis(x_basis, d, where);
  require_basis(z_basis, d, where);
  const Index b_dim = rho_ab.rows() / d;
  const double h_b = entropy_bits(partial_trace(rho_ab, {d, b_dim}, {1}));
  const double lhs = measured_conditional(x_basis, rho_ab, b_dim, h_b) + measured_conditional(z_basis, rho_ab, b_dim, h_b);
  return {lhs, entropy_bits(rho_ab) - h_b};
}

}  // namespace

double max_overlap(const cmat& x_basis, const cmat& z_basis) {
  return (x_basis.adjoint() * z_basis).cwiseAbs2().maxCoeff();
}

void require_unbiased(const cmat& x_basis, const cmat& z_basis) {
  const double target = 1.0 / double(x_basis.rows());
  const double worst = ((x_basis.adjoint() * z_basis).cwiseAbs2().array() - target).abs().maxCoeff();
  if (worst > kUnbiasedTol) throw NotUnbiased("bases are not mutually unbiased");
}

UcrReport memory_ucr(Index d, const cmat& rho_ab, const cmat& x_basis, const cmat& z_basis) {
  const MemoryTerms terms = memory_terms(d, rho_ab, x_basis, z_basis, "memory_ucr");
  require_unbiased(x_basis, z_basis);
  UcrReport r;
  r.relation = "memory";
  r.lhs_bits = terms.lhs;
  r.rhs_bits = log2d(d) + terms.cond_a;
  r.margin_bits = r.lhs_bits - r.rhs_bits;
  r.instance = {{d, rho_ab.rows() / d}, {x_basis, z_basis}, std::nullopt};
  return r;
}

UcrReport memory_ucr_general(Index d, const cmat& rho_ab, const cmat& x_basis, const cmat& z_basis) {
  const MemoryTerms terms = memory_terms(d, rho_ab, x_basis, z_basis, "memory_ucr_general");
  UcrReport r;
  r.relation = "memory_general_overlap";
  r.lhs_bits = terms.lhs;
  r.rhs_bits = -std::log2(max_overlap(x_basis, z_basis)) + terms.cond_a;
  r.margin_bits = r.lhs_bits - r.rhs_bits;
  r.asserted = false;
  r.instance = {{d, rho_ab.rows() / d}, {x_basis, z_basis}, std::nullopt};
  return r;
}

UcrReport maassen_uffink_general(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho_abc, Index b_dim,
                                 Index c_dim) {
  const Index a_dim = s.ambient_dim();
  if (t.ambient_dim() != a_dim || rho_abc.rows() != a_dim * b_dim * c_dim)
    throw ShapeMismatch("maassen_uffink_general: dimensions differ");
  require_density(rho_abc, "maassen_uffink_general");
  const VnAlgebra meet = intersect(s, t);
  if (commuting_defect(s, t, meet) > kSquareTol)
    throw NotCommutingSquare("maassen_uffink_general: square does not commute");

  const std::vector<Index> dims{a_dim, b_dim, c_dim};
  const cmat rho_ab = partial_trace(rho_abc, dims, {0, 1});
  const cmat rho_ac = partial_trace(rho_abc, dims, {0, 2});
  const double h_b = entropy_bits(partial_trace(rho_abc, dims, {1}));
  const double h_c = entropy_bits(partial_trace(rho_abc, dims, {2}));

  // The complement acts on A only, so the B marginal of its output is ρ_B.
  const double complement_term = entropy_bits(complement_apply(s, rho_ab, b_dim)) - h_b;
  const double t_term = entropy_bits(t.expectation(rho_ac, c_dim)) - h_c;
  UcrReport r;
  r.relation = "maassen_uffink_general";
  r.lhs_bits = complement_term + t_term;
  r.rhs_bits = entropy_bits(meet.expectation(rho_ac, c_dim)) - h_c;
  r.margin_bits = r.lhs_bits - r.rhs_bits;
  r.tolerance = 1e-8;
  r.instance = {dims, {}, std::nullopt};
  return r;
}

UcrReport coherence_ucr(const cmat& x_basis, const cmat& z_basis, const cmat& rho) {
  const Index d = rho.rows();
  require_density(rho, "coherence_ucr");
  require_basis(x_basis, d, "coherence_ucr");
  require_basis(z_basis, d, "coherence_ucr");
  require_unbiased(x_basis, z_basis);
  UcrReport r;
  r.relation = "coherence";
  r.lhs_bits = asymmetry(VnAlgebra::diagonal_in(x_basis), rho, 1.0).bits() +
               asymmetry(VnAlgebra::diagonal_in(z_basis), rho, 1.0).bits();
  r.rhs_bits = log2d(d) - entropy_bits(rho);
  r.margin_bits = r.lhs_bits - r.rhs_bits;
  r.instance = {{d}, {x_basis, z_basis}, std::nullopt};
  return r;
}

}  // namespace vnlab
