#pragma once

// Worked constructions: mutually unbiased bases, Pauli-frame tracking of
// controlled gates, the entanglement/uncertainty conversion and the table of
// squashed values between unbiased bases.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vnlab/algebra.hpp"

namespace vnlab {

inline constexpr double kPhaseTol = 1e-9;

struct MubFamily {
  Index dim = 0;
  std::vector<cmat> bases;  // dim + 1 unitaries; basis 0 is computational
};

// Prime p ≤ 13. For odd p, basis 1 + m has vectors ω^{m k² + j k}/√p; for p = 2
// bases 1 and 2 are the X and Y eigenbases. Throws NotPrime.
MubFamily mub_family(Index p);

// i^phase · P_0 ⊗ P_1 ⊗ …; qubit 0 is the leftmost (outermost) tensor factor.
class PauliWord {
 public:
  enum Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

  PauliWord() = default;
  PauliWord(std::vector<Letter> letters, int phase = 0);
  static PauliWord identity(Index qubits);
  static PauliWord single(Index qubits, Index qubit, Letter letter);
  // "XZ", "-IY", "+iZZ", "-iXI"; throws DomainError on anything else.
  static PauliWord parse(std::string_view text);

  Index qubits() const { return static_cast<Index>(letters_.size()); }
  Letter at(Index q) const { return letters_[static_cast<std::size_t>(q)]; }
  int phase() const { return phase_; }  // exponent of i, in [0, 4)
  std::string str() const;
  cmat matrix() const;
  bool commutes_with(const PauliWord& other) const;

  friend PauliWord operator*(const PauliWord& a, const PauliWord& b);
  friend bool operator==(const PauliWord&, const PauliWord&) = default;

 private:
  std::vector<Letter> letters_;
  int phase_ = 0;
};

// Applies `target` on its qubit when `control` reads −1 on its qubit.
struct ControlledGate {
  Index control_qubit = 0;
  PauliWord::Letter control = PauliWord::Z;
  Index target_qubit = 1;
  PauliWord::Letter target = PauliWord::X;
};

cmat gate_matrix(const ControlledGate& gate, Index qubits);

struct PauliFrame {
  Index qubits = 0;
  std::vector<PauliWord> first;   // generators of S
  std::vector<PauliWord> second;  // generators of T
};

VnAlgebra word_algebra(const std::vector<PauliWord>& words, Index qubits);

// W ↦ C W C for the controlled gate C. A control letter anticommuting with the
// control observable picks up the target Pauli, and a target letter
// anticommuting with the target Pauli picks up the control observable.
// Cross-checked against explicit conjugation up to 6 qubits (ToleranceFailure).
// Throws MalformedGate for identical qubits, identity letters or out-of-range qubits.
PauliWord conjugate_word(const PauliWord& word, const ControlledGate& gate);
PauliFrame pauli_frame_step(const PauliFrame& frame, const ControlledGate& gate);

// max_φ |⟨ψ|e^{iφ}χ⟩| ≥ 1 − kPhaseTol for unit vectors.
bool equal_up_to_phase(const cvec& psi, const cvec& chi);

struct TranscriptStep {
  std::string name;
  std::vector<std::string> first_words;
  std::vector<std::string> second_words;
  cmat state;
  std::optional<double> value_bits;
  bool pass = true;
  std::string detail;
};

struct Transcript {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<TranscriptStep> steps;

  bool pass() const;
};

// |↑Y↑Y⟩ with S = ⟨Z_A, Z_B⟩, T = ⟨X_A, X_B⟩ → covariant average over ⟨Y_A, Y_B⟩ →
// controlled gate C_{Z_B → X_A} → the local pair 𝒜, ℬ, then back. A failed
// check ends the transcript at a step with pass = false.
Transcript epr_ucr_demo(std::uint64_t seed);

struct MonogamyEntry {
  Index first_basis;
  Index second_basis;
  double value_bits;
};

struct MonogamyTable {
  Index dim = 0;
  Index state_basis = 0;
  std::vector<MonogamyEntry> entries;  // ordered pairs of distinct remaining bases
  double unordered_sum_bits = 0;       // pairs i < j
  double ordered_sum_bits = 0;         // pairs i ≠ j
  double closed_form_bits = 0;         // (p + 1) · ½ log₂ p
  double ceiling_bits = 0;             // ½ log₂ p
  bool exceeds_ceiling = false;        // ordered sum > ceiling
  // Doubled configuration ψ⊗ψ with S_i⊗S_i, T_j⊗T_j for the first remaining
  // pair, against twice the single-copy value. Only evaluated for p ≤ 5.
  std::optional<double> product_bits;
  double additive_bits = 0;
  bool additive = false;  // equal within 1e-7
};

// Exact pure-path squashed values between the remaining bases for the first
// vector of basis `state_basis`. Throws NotPrime.
MonogamyTable monogamy_table(Index p, Index state_basis);

}  // namespace vnlab
