#include "vnlab/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "mub.hpp"
#include "vnlab/channels.hpp"
#include "vnlab/entropy.hpp"
#include "vnlab/measures.hpp"
#include "vnlab/squares.hpp"
#include "vnlab/ucr.hpp"

namespace vnlab {

namespace {

constexpr double kSsaTol = 1e-9;
constexpr double kRecoveryTol = 1e-8;
constexpr double kDualityTol = 1e-7;
constexpr double kMaassenTol = 1e-8;

double tol_or(const ScanOptions& o, double fallback) { return o.tolerance.value_or(fallback); }

Index pick(Index n, Rng& rng) { return std::uniform_int_distribution<Index>(0, n - 1)(rng); }

// Ordered d = a·b·c with both parties nontrivial.
std::vector<std::array<Index, 3>> factorisations(Index d) {
  std::vector<std::array<Index, 3>> out;
  for (Index a = 2; a <= d; ++a)
    for (Index b = 2; a * b <= d; ++b)
      if (d % (a * b) == 0) out.push_back({a, b, d / (a * b)});
  return out;
}

std::string dims_label(const std::array<Index, 3>& f) {
  return std::to_string(f[0]) + "x" + std::to_string(f[1]) + "x" + std::to_string(f[2]);
}

// Densities of varying rank, pure ones included.
cmat scan_density(Index d, std::size_t k, std::uint64_t seed) {
  return sample(SampleKind::density, d, seed, static_cast<Index>(1 + k % static_cast<std::size_t>(d)));
}

void require_dims(const ScanOptions& o, const char* suite) {
  if (o.dims.empty()) throw DomainError(std::string(suite) + " scan: no dimensions given");
  for (Index d : o.dims)
    if (d < 2) throw DomainError(std::string(suite) + " scan: dimensions must be at least 2");
}

// Square k cycles through dimensions, then through the families available there.
SquareInstance scan_square(const ScanOptions& o, std::size_t k, Rng& rng) {
  const Index d = o.dims[k % o.dims.size()];
  const auto fams = families_for(d);
  return random_square(fams[(k / o.dims.size()) % fams.size()], d, rng);
}

std::vector<ScanRecord> square_scan(const ScanOptions& o, bool ssa_check, bool recovery_check) {
  std::vector<ScanRecord> out;
  for (std::size_t k = 0; k < o.samples; ++k) {
    const std::uint64_t square_seed = derive_seed(o.seed, k);
    Rng rng(square_seed);
    const SquareInstance sq = scan_square(o, k, rng);
    for (std::size_t j = 0; j < o.states_per_sample; ++j) {
      const std::uint64_t state_seed = derive_seed(square_seed, j);
      const Index d = sq.within.ambient_dim();
      const cmat rho = scan_density(d, j, state_seed);
      ScanRecord r{k * o.states_per_sample + j, sq.label, d, state_seed, {}, {}};
      const double value = square_info(sq.first, sq.within, sq.meet, sq.second, rho).value_bits;
      r.values.emplace_back("cmi_bits", value);
      if (ssa_check) r.checks.push_back({"ssa", value, tol_or(o, kSsaTol)});
      if (recovery_check) {
        const double gap = recovery_gap(sq.first, sq.second, sq.within, rho);
        r.values.emplace_back("recovery_gap_bits", gap);
        r.checks.push_back({"recovery", value - gap, tol_or(o, kRecoveryTol)});
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<ScanRecord> ucr_scan(const ScanOptions& o) {
  for (Index d : o.dims)
    if (d != 2 && d != 3) throw DomainError("ucr scan: dimensions must be 2 or 3");
  std::vector<ScanRecord> out;
  for (std::size_t k = 0; k < o.samples; ++k) {
    const Index d = o.dims[k % o.dims.size()];
    const std::uint64_t seed = derive_seed(o.seed, k);
    Rng rng(seed);
    const auto bases = std::pair{detail::mub_basis(d, 1), detail::mub_basis(d, 0)};
    ScanRecord r{k, "mub_d" + std::to_string(d), d, seed, {}, {}};

    const cmat rho_ab = random_density(2 * d, 1 + pick(2 * d, rng), rng);
    const UcrReport mem = memory_ucr(d, rho_ab, bases.first, bases.second);
    const VnAlgebra xb = tensor(VnAlgebra::diagonal_in(bases.first), VnAlgebra::full(2));
    const VnAlgebra zb = tensor(VnAlgebra::diagonal_in(bases.second), VnAlgebra::full(2));
    const double cmi = gen_cmi(xb, zb, VnAlgebra::full(2 * d), rho_ab).value_bits;
    r.values.emplace_back("memory_margin_bits", mem.margin_bits);
    r.values.emplace_back("memory_cmi_bits", cmi);
    r.checks.push_back({"memory", mem.margin_bits, tol_or(o, mem.tolerance)});
    r.checks.push_back({"memory_identity", -std::abs(mem.margin_bits - cmi), tol_or(o, kSsaTol)});

    const cmat rho_abc = random_density(4 * d, 1 + pick(4 * d, rng), rng);
    const UcrReport mu = maassen_uffink_general(VnAlgebra::diagonal_in(bases.first),
                                                VnAlgebra::diagonal_in(bases.second), rho_abc, 2, 2);
    r.values.emplace_back("maassen_uffink_margin_bits", mu.margin_bits);
    r.checks.push_back({"maassen_uffink", mu.margin_bits, tol_or(o, kMaassenTol)});

    const UcrReport coh = coherence_ucr(bases.first, bases.second, random_density(d, 1 + pick(d, rng), rng));
    r.values.emplace_back("coherence_margin_bits", coh.margin_bits);
    r.checks.push_back({"coherence", coh.margin_bits, tol_or(o, coh.tolerance)});
    out.push_back(std::move(r));
  }
  return out;
}

Channel random_mixture_in(const VnAlgebra& n, Rng& rng) {
  return Channel::mixture({0.5, 0.5}, {Channel::unitary(random_unitary_in(n, rng)),
                                       Channel::unitary(random_unitary_in(n, rng))});
}

// Sequences of two operations by alternating parties on A⊗B⊗E with S = A, T = B
// (rotated): channels on E, unitaries inside the acting party, an optional
// shrink to a maximal abelian subalgebra, then restriction to S ∨ T.
std::vector<ScanRecord> mono_scan(const ScanOptions& o) {
  for (Index a : o.dims)
    if (a != 2 && a != 3) throw DomainError("mono scan: party dimensions must be 2 or 3");
  std::vector<ScanRecord> out;
  const VnAlgebra qubit = VnAlgebra::full(2), one2 = VnAlgebra::trivial(2);
  for (std::size_t k = 0; k < o.samples; ++k) {
    const Index a = o.dims[k % o.dims.size()];
    const Index d = 4 * a;
    const std::uint64_t seed = derive_seed(o.seed, k);
    Rng rng(seed);
    const cmat g = haar_unitary(d, rng);
    auto rotate = [&](const VnAlgebra& n) { return conjugate(n, g); };
    VnAlgebra s = rotate(tensor({VnAlgebra::full(a), one2, one2}));
    VnAlgebra t = rotate(tensor({VnAlgebra::trivial(a), qubit, one2}));
    const VnAlgebra s_small = rotate(tensor({VnAlgebra::diagonal_in(haar_unitary(a, rng)), one2, one2}));
    const VnAlgebra t_small = rotate(tensor({VnAlgebra::trivial(a), VnAlgebra::diagonal_in(haar_unitary(2, rng)), one2}));
    cmat rho = k % 2 == 0 ? sample(SampleKind::pure, d, seed) : random_density(d, 1 + pick(d, rng), rng);

    ScanRecord r{k, "a" + std::to_string(a) + "_b2_e2", d, seed, {}, {}};
    double worst = std::numeric_limits<double>::infinity();
    double worst_pure = std::numeric_limits<double>::infinity();
    Party party = pick(2, rng) == 0 ? Party::S : Party::T;
    bool s_shrunk = false, t_shrunk = false;
    int steps_run = 0;
    for (int op = 0; op < 2; ++op) {
      const VnAlgebra& mine = party == Party::S ? s : t;
      const VnAlgebra& other = party == Party::S ? t : s;
      OperationPlan plan{party, {}};
      plan.steps.push_back(step::ApplyChannel{random_mixture_in(intersect(commutant(mine), commutant(other)), rng), {}});
      plan.steps.push_back(step::HeisenbergUnitary{random_unitary_in(intersect(mine, commutant(other)), rng)});
      bool& shrunk = party == Party::S ? s_shrunk : t_shrunk;
      if (!shrunk && pick(3, rng) == 0) {
        plan.steps.push_back(step::ShrinkS{party == Party::S ? s_small : t_small});
        shrunk = true;
      }
      plan.steps.push_back(step::Restrict{});
      const auto states = build_operation(plan, classify_square(s, t, VnAlgebra::full(d))).trace(rho);
      for (std::size_t i = 1; i < states.size(); ++i) {
        const double before = configuration_cmi(states[i - 1]), after = configuration_cmi(states[i]);
        worst = std::min(worst, before - after);
        ++steps_run;
        // Exact squashed values exist when both ends sit on the pure path.
        auto exact = [](const Configuration& c) -> std::optional<double> {
          if (intersect(c.s, c.t).dimension() != 1 || !algebraically_pure(join(c.s, c.t), c.rho)) return std::nullopt;
          return isq_estimate(c.s, c.t, c.rho).value_bits;
        };
        if (k % 2 == 0) {
          const auto x = exact(states[i - 1]), y = exact(states[i]);
          if (x && y) worst_pure = std::min(worst_pure, *x - *y);
        }
      }
      s = states.back().s;
      t = states.back().t;
      rho = states.back().rho;
      party = party == Party::S ? Party::T : Party::S;
    }
    r.values.emplace_back("steps", steps_run);
    r.values.emplace_back("final_cmi_bits", configuration_cmi({s, t, rho}));
    r.checks.push_back({"monotone", worst, tol_or(o, kSsaTol)});
    if (std::isfinite(worst_pure)) r.checks.push_back({"monotone_isq_pure", worst_pure, tol_or(o, kSsaTol)});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScanRecord> duality_scan(const ScanOptions& o) {
  std::vector<ScanRecord> out;
  for (std::size_t k = 0; k < o.samples; ++k) {
    const Index d = o.dims[k % o.dims.size()];
    const std::uint64_t seed = derive_seed(o.seed, k);
    Rng rng(seed);
    // Block algebras over coordinate partitions are generally not co-commuting.
    const SquareFamily fam = detail::is_prime(d) ? SquareFamily::mub_pair : SquareFamily::tensor_split;
    const SquareInstance sq = random_square(fam, d, rng);
    const DualityReport rep = duality_check(sq.first, sq.second, sq.within, random_pure(d, rng));
    ScanRecord r{k, sq.label, d, seed, {{"lhs_bits", rep.lhs_bits}, {"rhs_bits", rep.rhs_bits}}, {}};
    r.checks.push_back({"duality", -std::abs(rep.gap()), tol_or(o, kDualityTol)});
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string family_name(SquareFamily f) {
  switch (f) {
    case SquareFamily::tensor_split: return "tensor_split";
    case SquareFamily::mub_pair: return "mub_pair";
    case SquareFamily::block: return "block";
  }
  return "unknown";
}

std::vector<SquareFamily> families_for(Index d) {
  std::vector<SquareFamily> out;
  if (!factorisations(d).empty()) out.push_back(SquareFamily::tensor_split);
  if (detail::is_prime(d) && d <= 13) out.push_back(SquareFamily::mub_pair);
  out.push_back(SquareFamily::block);
  return out;
}

VnAlgebra coordinate_block_algebra(const std::vector<int>& labels) {
  const auto d = static_cast<Index>(labels.size());
  std::vector<std::pair<Index, Index>> units;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) units.emplace_back(i, j);
  cmat basis = cmat::Zero(d * d, static_cast<Index>(units.size()));
  for (std::size_t c = 0; c < units.size(); ++c)
    basis(units[c].second * d + units[c].first, static_cast<Index>(c)) = 1;
  return VnAlgebra(d, basis);
}

SquareInstance random_square(SquareFamily family, Index d, Rng& rng) {
  VnAlgebra first = VnAlgebra::trivial(d), second = VnAlgebra::trivial(d);
  std::string label = family_name(family) + "_d" + std::to_string(d);
  switch (family) {
    case SquareFamily::tensor_split: {
      const auto fs = factorisations(d);
      if (fs.empty()) throw DomainError("random_square: no tensor split in dimension " + std::to_string(d));
      const auto f = fs[static_cast<std::size_t>(pick(static_cast<Index>(fs.size()), rng))];
      first = tensor({VnAlgebra::full(f[0]), VnAlgebra::trivial(f[1]), VnAlgebra::full(f[2])});
      second = tensor({VnAlgebra::trivial(f[0]), VnAlgebra::full(f[1]), VnAlgebra::full(f[2])});
      label += "_" + dims_label(f);
      break;
    }
    case SquareFamily::mub_pair: {
      if (!detail::is_prime(d) || d > 13) throw DomainError("random_square: unbiased pairs need a prime ≤ 13");
      const Index i = pick(d + 1, rng);
      Index j = pick(d, rng);
      if (j >= i) ++j;
      first = VnAlgebra::diagonal_in(detail::mub_basis(d, i));
      second = VnAlgebra::diagonal_in(detail::mub_basis(d, j));
      label += "_" + std::to_string(i) + "_" + std::to_string(j);
      break;
    }
    case SquareFamily::block: {
      auto partition = [&] {
        const int parts = 1 + static_cast<int>(pick(d, rng));
        std::vector<int> labels(static_cast<std::size_t>(d));
        for (auto& l : labels) l = static_cast<int>(pick(parts, rng));
        return labels;
      };
      first = coordinate_block_algebra(partition());
      second = coordinate_block_algebra(partition());
      break;
    }
  }
  const cmat g = haar_unitary(d, rng);
  SquareInstance out{family, label, conjugate(first, g), conjugate(second, g), VnAlgebra::full(d),
                     VnAlgebra::trivial(d)};
  out.meet = intersect(out.first, out.second);
  if (commuting_defect(out.first, out.second, out.meet) > kSquareTol)
    throw ToleranceFailure("random_square: generated square does not commute (" + label + ")");
  return out;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::ssa: return "ssa";
    case Suite::ucr: return "ucr";
    case Suite::mono: return "mono";
    case Suite::duality: return "duality";
    case Suite::recovery: return "recovery";
  }
  return "unknown";
}

Suite parse_suite(const std::string& name) {
  for (Suite s : {Suite::ssa, Suite::ucr, Suite::mono, Suite::duality, Suite::recovery})
    if (suite_name(s) == name) return s;
  throw DomainError("unknown suite '" + name + "'");
}

bool ScanRecord::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ScanCheck& c) { return c.pass(); });
}

std::vector<ScanRecord> run_scan(Suite suite, const ScanOptions& options) {
  require_dims(options, suite_name(suite).c_str());
  switch (suite) {
    case Suite::ssa: return square_scan(options, true, true);
    case Suite::recovery: return square_scan(options, false, true);
    case Suite::ucr: return ucr_scan(options);
    case Suite::mono: return mono_scan(options);
    case Suite::duality: return duality_scan(options);
  }
  throw DomainError("run_scan: unknown suite");
}

ScanSummary summarize(Suite suite, const std::vector<ScanRecord>& records) {
  ScanSummary s{suite_name(suite), records.size(), 0, {}};
  std::map<std::string, std::size_t> slot;
  for (const auto& r : records) {
    if (!r.pass()) ++s.failures;
    for (const auto& c : r.checks) {
      auto [it, fresh] = slot.try_emplace(c.name, s.checks.size());
      if (fresh) s.checks.push_back({c.name, 0, 0, std::numeric_limits<double>::infinity(), c.tolerance});
      auto& cs = s.checks[it->second];
      ++cs.evaluated;
      if (!c.pass()) ++cs.failures;
      cs.min_margin_bits = std::min(cs.min_margin_bits, c.margin_bits);
    }
  }
  return s;
}

}  // namespace vnlab
