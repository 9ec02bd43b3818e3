#pragma once

// Squashed and convex-roof versions of the generalised mutual information,
// the square-calculus extension measure, and their closed-form companions.
// Away from the exact pure path every estimate is an upper bound.

#include <cstdint>
#include <optional>
#include <vector>

#include "vnlab/algebra.hpp"
#include "vnlab/optimize.hpp"

namespace vnlab {

enum class Exactness { exact_pure_path, upper_bound };

struct MeasureEstimate {
  double value_bits = 0;
  Exactness exactness = Exactness::upper_bound;
  // Extension dimension (squashed, extension measures) or decomposition length (convex roof).
  Index size = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  // Best extension state on ℂ^D ⊗ ℂ^size, or a D × size matrix whose columns are
  // the unnormalised pure components of the best decomposition.
  cmat witness;
  std::vector<double> restart_values;
  int evaluations = 0;
};

struct MeasureOptions {
  Index size = 0;  // 0 selects the default
  int restarts = 8;
  std::uint64_t seed = 0;
  StiefelOptions descent;
};

// E_N(ρ) is a normalised minimal projection of N (a pure state of the algebra).
bool algebraically_pure(const VnAlgebra& n, const cmat& rho, double tol = 1e-8);

// ½ inf I(S⊗C : T⊗C ⊂ ST⊗C) over extensions of E_{ST}(ρ). Default size min(D², 16).
// Requires a commuting square with S ∩ T = ℂ1.
MeasureEstimate isq_estimate(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho,
                             const MeasureOptions& options = {});
// ½ inf Σ p_x I(S:T)_{ψ_x} over pure decompositions of E_{ST}(ρ). Default length rank².
MeasureEstimate iconv_estimate(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho,
                               const MeasureOptions& options = {});

// inf over extensions σ of ρ of I(x ⊗ y)_σ with x the tensor product of `squares`
// and y = [C C; C C], C a full factor of dimension at most `ext_budget`.
MeasureEstimate iext_estimate(const std::vector<Square>& squares, const cmat& joint_rho, Index ext_budget = 4,
                              const MeasureOptions& options = {});

enum class ContinuityVariant { squashed, convex_roof };

// c √ε log|M| + 3(1 + 2√ε) h(1/(1 + 2√ε)) with c = 12 (squashed) or 6 (convex roof).
double continuity_bound(double epsilon, Index dim, ContinuityVariant variant);

struct MaxIsqWitness {
  VnAlgebra first;
  VnAlgebra second;
  cmat state;
};

struct MaxIsq {
  double value_bits = 0;
  Index block_dim = 0;
  std::optional<MaxIsqWitness> witness;
};

// ½ log₂ n for the largest block M_n of m. A witness is built for prime n and
// checked on the exact pure path; other n > 1 raise WitnessUnavailable.
MaxIsq max_isq(const VnAlgebra& m);

}  // namespace vnlab
