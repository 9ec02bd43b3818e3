#pragma once

// Entropies in bits: von Neumann, Umegaki relative, sandwiched Rényi, and the
// algebra-restricted entropies H(N)_ρ = H(E_N ρ) with their asymmetry measures.

#include <cstdint>
#include <limits>
#include <vector>

#include "vnlab/algebra.hpp"

namespace vnlab {

class EntropyValue {
 public:
  static EntropyValue finite(double bits) { return EntropyValue(bits, true); }
  static EntropyValue infinite() { return EntropyValue(std::numeric_limits<double>::infinity(), false); }

  bool is_finite() const noexcept { return finite_; }
  // +∞ when infinite.
  double bits() const noexcept { return bits_; }

 private:
  EntropyValue(double bits, bool finite) : bits_(bits), finite_(finite) {}
  double bits_;
  bool finite_;
};

// −Σ λ log₂ λ over eigenvalues above the relative zero cutoff; no validation.
double entropy_bits(const cmat& hermitian);
double binary_entropy(double p);

EntropyValue vn_entropy(const cmat& rho);
// Infinite iff supp ρ ⊄ supp σ.
EntropyValue rel_entropy(const cmat& rho, const cmat& sigma);
// α ∈ [1/2, ∞]; α = 1 is the relative entropy and α = ∞ the max-divergence.
EntropyValue sandwiched_renyi(const cmat& rho, const cmat& sigma, double alpha);

EntropyValue algebra_entropy(const VnAlgebra& n, const cmat& rho);
// H((E_N ⊗ id)ρ) − H(ρ_aux), with N acting on the first tensor factor.
EntropyValue algebra_cond_entropy(const VnAlgebra& n, const std::vector<Index>& aux_dims,
                                  const cmat& rho_joint);

struct AsymmetryEstimate {
  EntropyValue value = EntropyValue::finite(0);
  bool exact = true;
  int restarts = 0;
  std::uint64_t seed = 0;
  cmat minimizer;
};

// D^N_α(ρ) = inf_{σ ∈ S(N)} D_α(ρ‖σ). Exact for α = 1; otherwise a multistart
// simplex search over σ = XX†/tr(XX†), X ∈ N, that never exceeds D_α(ρ‖E_N ρ).
AsymmetryEstimate asymmetry_estimate(const VnAlgebra& n, const cmat& rho, double alpha,
                                     int restarts = 16, std::uint64_t seed = 0);
EntropyValue asymmetry(const VnAlgebra& n, const cmat& rho, double alpha);

}  // namespace vnlab
