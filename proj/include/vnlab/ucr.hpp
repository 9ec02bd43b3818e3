#pragma once

// Entropic uncertainty relations read off from non-negativity of the
// generalised mutual information of a commuting square.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vnlab/algebra.hpp"

namespace vnlab {

inline constexpr double kUnbiasedTol = 1e-9;

struct UcrInstance {
  std::vector<Index> dims;
  std::vector<cmat> bases;  // measurement bases as unitary columns, when the relation has any
  std::optional<std::uint64_t> seed;
};

struct UcrReport {
  std::string relation;
  double lhs_bits = 0;
  double rhs_bits = 0;
  double margin_bits = 0;  // lhs − rhs
  double tolerance = 1e-9;
  // Informational reports are computed outside the proven regime and never fail.
  bool asserted = true;
  UcrInstance instance;

  bool pass() const { return !asserted || margin_bits >= -tolerance; }
};

// max |⟨x_i|z_j⟩|² over the columns of two unitaries.
double max_overlap(const cmat& x_basis, const cmat& z_basis);
// Throws NotUnbiased unless every squared overlap is 1/d within kUnbiasedTol.
void require_unbiased(const cmat& x_basis, const cmat& z_basis);

// H(X|B) + H(Z|B) ≥ log₂ d + H(A|B) for unbiased bases on the first factor of ρ_AB (A = ℂ^d).
// The margin is the generalised mutual information of X_A⊗B and Z_A⊗B inside A⊗B.
UcrReport memory_ucr(Index d, const cmat& rho_ab, const cmat& x_basis, const cmat& z_basis);
// Same relation with log₂(1/c) for arbitrary bases; reported but not asserted.
UcrReport memory_ucr_general(Index d, const cmat& rho_ab, const cmat& x_basis, const cmat& z_basis);

// H(E_S^c|B) + H(T|C) ≥ H(S ∩ T|C) for a commuting square S, T on A and ρ on A⊗B⊗C.
UcrReport maassen_uffink_general(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho_abc, Index b_dim,
                                 Index c_dim);

// C_r^X(ρ) + C_r^Z(ρ) ≥ log₂ d − H(ρ) for unbiased bases; the margin is I(X:Z ⊂ M_d).
UcrReport coherence_ucr(const cmat& x_basis, const cmat& z_basis, const cmat& rho);

}  // namespace vnlab
