#pragma once

// Seeded instance generators and the property scans built on them. Instance k
// of a scan draws from derive_seed(master, k), so any record can be replayed
// on its own and output order never depends on scheduling.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vnlab/algebra.hpp"

namespace vnlab {

enum class SquareFamily { tensor_split, mub_pair, block };

std::string family_name(SquareFamily f);
// Families that exist in dimension d: mub_pair needs a prime, tensor_split a composite.
std::vector<SquareFamily> families_for(Index d);

struct SquareInstance {
  SquareFamily family;
  std::string label;
  VnAlgebra first;
  VnAlgebra second;
  VnAlgebra within;
  VnAlgebra meet;
};

// A commuting square in dimension d, conjugated by a Haar unitary.
// tensor_split: M_a⊗1⊗M_c and 1⊗M_b⊗M_c for a random ordered factorisation.
// mub_pair: diagonal algebras of two distinct unbiased bases (prime d ≤ 13).
// block: two algebras of block-diagonal matrices over random coordinate partitions.
SquareInstance random_square(SquareFamily family, Index d, Rng& rng);
// ⊕_blocks M_{|block|} over the coordinate partition given by `labels`.
VnAlgebra coordinate_block_algebra(const std::vector<int>& labels);

// ssa records both the non-negativity and the recovery-gap checks; recovery only the latter.
enum class Suite { ssa, ucr, mono, duality, recovery };

std::string suite_name(Suite s);
// Throws DomainError for an unknown name.
Suite parse_suite(const std::string& name);

struct ScanCheck {
  std::string name;
  double margin_bits = 0;  // ≥ −tolerance passes
  double tolerance = 0;
  bool pass() const { return margin_bits >= -tolerance; }
};

struct ScanRecord {
  std::size_t index = 0;
  std::string instance;
  Index dim = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> values;
  std::vector<ScanCheck> checks;
  bool pass() const;
};

struct ScanOptions {
  std::vector<Index> dims;
  std::size_t samples = 100;      // instances (squares, operation sequences, states)
  std::size_t states_per_sample = 1;  // densities drawn per square in the ssa and recovery suites
  std::uint64_t seed = 0;
  // Replaces every per-check default when set.
  std::optional<double> tolerance;
};

struct CheckSummary {
  std::string name;
  std::size_t evaluated = 0;
  std::size_t failures = 0;
  double min_margin_bits = 0;
  double tolerance = 0;
};

struct ScanSummary {
  std::string suite;
  std::size_t records = 0;
  std::size_t failures = 0;
  std::vector<CheckSummary> checks;
  bool pass() const { return failures == 0; }
};

// Throws DomainError for an empty dimension list or a dimension the suite cannot use.
std::vector<ScanRecord> run_scan(Suite suite, const ScanOptions& options);
ScanSummary summarize(Suite suite, const std::vector<ScanRecord>& records);

}  // namespace vnlab
