#pragma once

// Finite-dimensional von Neumann algebras on a fixed Hilbert space, stored as
// a Hilbert–Schmidt orthonormal basis of column-major vectorised matrices.

#include <memory>
#include <vector>

#include "vnlab/matcore.hpp"

namespace vnlab {

// Relative residual below which a candidate is considered already spanned.
inline constexpr double kRankCutoff = 1e-10;
// Default tolerance of the commuting-square test (Frobenius norm of superoperators).
inline constexpr double kSquareTol = 1e-9;
// Residual tolerance of membership and containment tests.
inline constexpr double kContainTol = 1e-9;

// One summand M_n ⊗ 1_m. Columns of `frame` are ordered (k, j) ↦ k·m + j so that
// frame† a frame = A ⊗ 1_m for every algebra element a.
struct Block {
  Index factor_dim = 0;
  Index multiplicity = 0;
  cmat projector;
  cmat frame;
};

struct BlockStructure {
  std::vector<Block> blocks;  // sorted by factor_dim, then multiplicity, descending
  cmat alignment;             // [frame_0 | frame_1 | ...], unitary
};

namespace detail {
struct BlockCache;
}

class VnAlgebra {
 public:
  // `basis` holds HS-orthonormal columns vec(b_k) spanning a unital *-algebra on ℂ^d.
  VnAlgebra(Index ambient_dim, cmat basis);

  static VnAlgebra full(Index d);
  static VnAlgebra trivial(Index d);
  static VnAlgebra diagonal(Index d);
  // span{|u_j⟩⟨u_j|} for the columns u_j of a unitary.
  static VnAlgebra diagonal_in(const cmat& unitary);

  Index ambient_dim() const noexcept { return dim_; }
  Index dimension() const noexcept { return basis_.cols(); }
  const cmat& basis() const noexcept { return basis_; }
  cmat element(Index k) const { return unvec(basis_.col(k), dim_); }
  std::vector<cmat> elements() const;

  // Trace-preserving conditional expectation E_N, and E_N ⊗ id on ℂ^d ⊗ ℂ^aux.
  cmat expectation(const cmat& x) const;
  cmat expectation(const cmat& x, Index aux_dim) const;
  // Matrix of E_N acting on column-major vectorisations.
  cmat superoperator() const { return basis_ * basis_.adjoint(); }

  double residual(const cmat& x) const;
  bool contains(const cmat& x, double tol = kContainTol) const;
  bool contains(const VnAlgebra& sub, double tol = kContainTol) const;

  const BlockStructure& blocks() const;
  bool is_factor() const { return blocks().blocks.size() == 1; }
  bool is_commutative() const;

 private:
  Index dim_;
  cmat basis_;
  std::shared_ptr<detail::BlockCache> cache_;
};

bool same_algebra(const VnAlgebra& a, const VnAlgebra& b, double tol = kContainTol);

struct BlockShape {
  Index factor_dim;
  Index multiplicity;
};

// ⊕_i M_{n_i} ⊗ 1_{m_i} in the standard frame.
VnAlgebra direct_sum_algebra(const std::vector<BlockShape>& shape);

// Smallest unital *-algebra containing the generators.
VnAlgebra generate(Index d, const std::vector<cmat>& generators);
VnAlgebra join(const VnAlgebra& a, const VnAlgebra& b);
VnAlgebra intersect(const VnAlgebra& a, const VnAlgebra& b);
// {x ∈ within : [x, n] = 0}; throws NotSubalgebra unless n ⊆ within.
VnAlgebra commutant(const VnAlgebra& n, const VnAlgebra& within);
VnAlgebra commutant(const VnAlgebra& n);
VnAlgebra center(const VnAlgebra& n);
VnAlgebra tensor(const VnAlgebra& a, const VnAlgebra& b);
VnAlgebra tensor(const std::vector<VnAlgebra>& factors);
VnAlgebra conjugate(const VnAlgebra& n, const cmat& unitary);
// Random unitary exp(iH) with H a random Hermitian element of n.
cmat random_unitary_in(const VnAlgebra& n, Rng& rng);
cmat random_hermitian_in(const VnAlgebra& n, Rng& rng);

inline cmat cond_expectation(const VnAlgebra& n, const cmat& rho) { return n.expectation(rho); }
// E_N through the block frames; agrees with cond_expectation.
cmat cond_expectation_blockwise(const VnAlgebra& n, const cmat& rho);
// E_{N'} through the block frames.
cmat commutant_expectation_blockwise(const VnAlgebra& n, const cmat& rho);

// Complementary channel of E_N, tensored with id on an auxiliary factor.
// The output space is (⊕_i ℂ^{m_i} ⊗ ℂ^{m_i}) ⊗ ℂ^aux.
Index complement_dim(const VnAlgebra& n);
cmat complement_apply(const VnAlgebra& n, const cmat& rho_joint, Index aux_dim = 1);
// Isometry V: ℂ^d → ℂ^d ⊗ ℂ^E with tr_E V ρ V† = E_N(ρ) and tr_d V ρ V† the complement.
cmat stinespring(const VnAlgebra& n);

// [first within; meet second]. `commuting` means E_first E_second = E_second E_first = E_meet.
struct Square {
  VnAlgebra first;
  VnAlgebra second;
  VnAlgebra meet;
  VnAlgebra within;
  bool commuting = false;
  bool co_commuting = false;
  double commuting_defect = 0;
  double co_commuting_defect = 0;
};

// Uses meet = first ∩ second and commutants taken inside `within`.
Square classify_square(const VnAlgebra& first, const VnAlgebra& second, const VnAlgebra& within,
                       double tol = kSquareTol);

double commuting_defect(const VnAlgebra& a, const VnAlgebra& b, const VnAlgebra& meet);

}  // namespace vnlab
