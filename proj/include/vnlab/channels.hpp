#pragma once

// Quantum channels in Kraus form, Petz recovery, and the predicates of the
// side-private resource theory (bimodule, T-preserving, validated operations).

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vnlab/algebra.hpp"

namespace vnlab {

// Completeness Σ K†K = 1 is checked to this tolerance.
inline constexpr double kChannelTol = 1e-9;
// Trace distance below which a factor counts as completely mixed.
inline constexpr double kMixtureTol = 1e-8;

class Channel {
 public:
  // Each Kraus operator maps ℂ^in → ℂ^out; throws NotChannel unless trace preserving.
  explicit Channel(std::vector<cmat> kraus);

  static Channel identity(Index d);
  static Channel unitary(const cmat& u);
  static Channel conditional_expectation(const VnAlgebra& n);
  // Complement of E_N with output ⊕_i ℂ^{m_i} ⊗ ℂ^{m_i}.
  static Channel complement(const VnAlgebra& n);
  // Channel Σ w_i Φ_i; weights must form a probability vector.
  static Channel mixture(const std::vector<double>& weights, const std::vector<Channel>& parts);
  // Choi matrix indexed (i, o) ↦ i·out + o; must be PSD with tr_out J = 1.
  static Channel from_choi(const cmat& choi, Index in_dim, Index out_dim);

  Index in_dim() const noexcept { return in_; }
  Index out_dim() const noexcept { return out_; }
  const std::vector<cmat>& kraus() const noexcept { return kraus_; }

  cmat apply(const cmat& rho) const;
  cmat adjoint_apply(const cmat& x) const;
  cmat choi() const;
  // Matrix on column-major vectorisations: vec Φ(X) = S vec X.
  cmat superoperator() const;
  // `next` ∘ this.
  Channel then(const Channel& next) const;
  bool is_unital(double tol = kChannelTol) const;

 private:
  Index in_;
  Index out_;
  std::vector<cmat> kraus_;
};

// Frobenius distance of the Choi matrices; the canonical channel comparison.
double choi_distance(const Channel& a, const Channel& b);

// σ^{1/2} Φ†(Φ(σ)^{-1/2} · Φ(σ)^{-1/2}) σ^{1/2}; SingularDefault if Φ(σ) is rank deficient.
Channel petz_map(const Channel& phi, const cmat& sigma);

// a Φ†(b) c = Φ†(abc) for a, c ∈ n and b ∈ m. A positive answer is
// cross-checked against E_N ∘ Φ = E_N, and against Φ ∘ E_N = E_N ∘ Φ when Φ is unital.
bool is_bimodule(const Channel& phi, const VnAlgebra& n, const VnAlgebra& m, double tol = kChannelTol);

struct IsometryCertificate {
  cmat isometry;      // ℂ^d → ℂ^{d'}
  VnAlgebra target;   // T̃ on ℂ^{d'}
};

// Strict: E_T ∘ Φ = E_T. With a certificate: E_{T̃} ∘ Φ = Ad_U ∘ E_T.
bool is_t_preserving(const Channel& phi, const VnAlgebra& t, const std::optional<IsometryCertificate>& iso = {},
                     double tol = kChannelTol);

// ---- operations ------------------------------------------------------------

// A state together with the two party algebras; the ambient algebra is S ∨ T.
struct Configuration {
  VnAlgebra s;
  VnAlgebra t;
  cmat rho;
};

double configuration_cmi(const Configuration& c);

namespace step {
// S → S ⊗ M_c, T → T ⊗ ℂ1, ρ → ρ ⊗ |0⟩⟨0|.
struct Extend {
  Index aux_dim;
};
// Bimodule over S, commuting with E_S and E_{ST}, and T-preserving (up to the certificate).
struct ApplyChannel {
  Channel channel;
  std::optional<IsometryCertificate> certificate;
};
// U ∈ S ∩ (S ∩ T)′; in the Heisenberg picture the state becomes U†ρU.
struct HeisenbergUnitary {
  cmat unitary;
};
// ρ, S and T all conjugated by U.
struct Rename {
  cmat unitary;
};
// S̃ ⊆ S with S̃ ∩ T = S ∩ T.
struct ShrinkS {
  VnAlgebra algebra;
};
// T ⊆ T̃ with S ∨ T̃ = S ∨ T.
struct EnlargeT {
  VnAlgebra algebra;
};
// ρ → E_{ST}(ρ); a positive `drop_dim` also removes a trailing factor of that
// size, which must carry no part of S ∨ T.
struct Restrict {
  Index drop_dim = 0;
};
}  // namespace step

using OperationStep = std::variant<step::Extend, step::ApplyChannel, step::HeisenbergUnitary, step::Rename,
                                   step::ShrinkS, step::EnlargeT, step::Restrict>;

enum class Party { S, T };

// Steps are phrased for an S-operation; a T-operation exchanges the two algebras.
struct OperationPlan {
  Party party = Party::S;
  std::vector<OperationStep> steps;
};

std::string step_name(const OperationStep& s);

// Only obtainable from build_operation, so execution never sees an unchecked plan.
class ValidatedOperation {
 public:
  const OperationPlan& plan() const noexcept { return plan_; }
  // Algebras before the first step and after each step, in the caller's labelling.
  const std::vector<std::pair<VnAlgebra, VnAlgebra>>& stages() const noexcept { return stages_; }
  // Every intermediate configuration, starting with the input.
  std::vector<Configuration> trace(const cmat& rho) const;
  Configuration apply(const cmat& rho) const;

 private:
  friend ValidatedOperation build_operation(const OperationPlan&, const Square&, double);
  ValidatedOperation(OperationPlan plan, std::vector<std::pair<VnAlgebra, VnAlgebra>> stages)
      : plan_(std::move(plan)), stages_(std::move(stages)) {}
  OperationPlan plan_;
  std::vector<std::pair<VnAlgebra, VnAlgebra>> stages_;
};

// Checks every step's predicate against the evolving algebras; throws StepRejected.
ValidatedOperation build_operation(const OperationPlan& plan, const Square& square, double tol = kSquareTol);

struct WeightedUnitary {
  double weight;
  cmat unitary;
};

struct AveragedSquare {
  cmat rho;
  Square square;
  VnAlgebra invariant;  // R, the fixed-point algebra of the average
};

// ρ → Σ w UρU† with S, T replaced by S̃, T̃.
AveragedSquare covariant_average(const std::vector<WeightedUnitary>& unitaries, const Square& square,
                                 const cmat& rho, const VnAlgebra& new_s, const VnAlgebra& new_t,
                                 double tol = kSquareTol);

struct SwappedSquare {
  cmat rho;
  Square square;
  double before_bits;
  double after_bits;
};

// (ρ, S, T) → (E_R ρ, S̃, T) under the swap conditions; the CMI must not increase.
SwappedSquare picture_swap(const Square& square, const VnAlgebra& r, const VnAlgebra& new_s, const cmat& rho,
                           double tol = kSquareTol);

}  // namespace vnlab
