#pragma once

// Generalised conditional mutual information of a square [A M; C B]:
// I = H(A) + H(B) − H(M) − H(C), with H(N) = H(E_N ρ).

#include <optional>
#include <string>

#include "vnlab/entropy.hpp"

namespace vnlab {

struct SquareTerms {
  double first = 0;   // H(A)
  double second = 0;  // H(B)
  double within = 0;  // H(M)
  double meet = 0;    // H(C)
};

struct SquareReport {
  double value_bits = 0;
  SquareTerms terms;
  std::string state_hash;
  bool commuting = false;
  double commuting_defect = 0;
  double tolerance = kSquareTol;
  // value ≥ −tolerance; guaranteed for commuting squares.
  bool nonnegative = false;
  std::optional<double> recovery_gap;
};

// Any nested quadruple C ⊆ A, B ⊆ M; throws NotNested otherwise.
SquareReport square_info(const VnAlgebra& first, const VnAlgebra& within, const VnAlgebra& meet,
                         const VnAlgebra& second, const cmat& rho, double tol = kSquareTol);

// I(S:T ⊂ M) with C = S ∩ T; throws NotCommutingSquare unless the square commutes.
// With `certify`, also records the Petz recovery gap.
SquareReport gen_cmi(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, const cmat& rho,
                     double tol = kSquareTol, bool certify = false);

struct ChainRuleReport {
  double total = 0;  // I[A M; C B]
  double upper = 0;  // I[A M; T S]
  double lower = 0;  // I[T S; C B]
  double additivity_defect = 0;
  bool lower_commuting = false;
};

ChainRuleReport chain_rule(const VnAlgebra& first, const VnAlgebra& within, const VnAlgebra& meet,
                           const VnAlgebra& second, const VnAlgebra& mid_within, const VnAlgebra& mid_meet,
                           const cmat& rho, double tol = kSquareTol);

// −2 log₂ F(ω, R ∘ E_T(ω)) with ω = E_M(ρ) and R the Petz map of E_T at E_S(ω).
// `swap_roles` exchanges S and T.
double recovery_gap(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, const cmat& rho,
                    bool swap_roles = false);

struct ConverseResult {
  bool found = false;
  double value_bits = 0;
  cmat state;
  int evaluations = 0;
};

// Searches pure states for I(S:T ⊂ M) < −tol on a non-commuting square.
ConverseResult ssa_converse_search(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within,
                                   int budget = 10000, std::uint64_t seed = 0, double tol = kSquareTol);

struct DualityReport {
  double lhs_bits = 0;  // I(S:T ⊂ ST) at E_ST(ψ)
  double rhs_bits = 0;  // I(S':T' ⊂ S'T') at ψ
  double gap() const { return lhs_bits - rhs_bits; }
};

// Commutants are taken inside the factor `within`; ψ must be pure.
DualityReport duality_check(const VnAlgebra& s, const VnAlgebra& t, const VnAlgebra& within, const cmat& psi,
                            double tol = kSquareTol);

}  // namespace vnlab
