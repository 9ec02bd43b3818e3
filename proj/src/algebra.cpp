#include "vnlab/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <optional>

#include "span.hpp"

namespace vnlab {

namespace detail {
struct BlockCache {
  std::once_flag once;
  std::optional<BlockStructure> value;
};
}  // namespace detail

namespace {

constexpr std::uint64_t kBlockSeed = 0x6a09e667f3bcc908ULL;
constexpr std::uint64_t kCommutantSeed = 0xbb67ae8584caa73bULL;
constexpr int kBlockAttempts = 8;
constexpr double kEigenGap = 1e-7;
// Above this many commutator rows the commutant uses random generators of n.
constexpr Index kCommutantRowBudget = 4096;

void require_same_dim(const VnAlgebra& a, const VnAlgebra& b, const char* where) {
  if (a.ambient_dim() != b.ambient_dim())
    throw ShapeMismatch(std::string(where) + ": algebras act on different spaces");
}

// Groups descending eigenvalues into runs separated by gaps above `gap`.
std::vector<std::pair<Index, Index>> eigen_groups(const rvec& values, double gap) {
  std::vector<std::pair<Index, Index>> groups;
  Index start = 0;
  for (Index i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i - 1) - values(i) > gap) {
      groups.emplace_back(start, i - start);
      start = i;
    }
  }
  return groups;
}

cmat random_element_coefficients(const cmat& basis, Rng& rng, bool hermitian, Index d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  cvec coeff(basis.cols());
  for (Index k = 0; k < coeff.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    coeff(k) = cplx(re, hermitian ? 0.0 : im);
  }
  cmat x = unvec(basis * coeff, d);
  if (hermitian) x = hermitian_part(x);
  return x;
}

std::optional<BlockStructure> try_blocks(const VnAlgebra& n, const VnAlgebra& z, Rng& rng) {
  const Index d = n.ambient_dim();
  const cmat h = random_element_coefficients(z.basis(), rng, true, d);
  const auto spec = eig_hermitian(h);
  const auto groups = eigen_groups(spec.values, kEigenGap);
  if (static_cast<Index>(groups.size()) != z.dimension()) return std::nullopt;

  BlockStructure out;
  for (const auto& [start, rank] : groups) {
    const cmat range = spec.vectors.middleCols(start, rank);
    // Compress the algebra to the central summand.
    std::vector<cmat> compressed;
    detail::SpanBuilder span(rank * rank, kRankCutoff);
    for (Index k = 0; k < n.dimension(); ++k) {
      cmat c = range.adjoint() * n.element(k) * range;
      if (span.add(vec(c), 1.0)) compressed.push_back(unvec(span.column(span.size() - 1), rank));
    }
    const Index block_dim = span.size();
    const Index factor = static_cast<Index>(std::llround(std::sqrt(double(block_dim))));
    if (factor * factor != block_dim || factor == 0 || rank % factor != 0) return std::nullopt;
    const Index mult = rank / factor;

    // Spectral projections of a random Hermitian block element are minimal.
    std::normal_distribution<double> normal(0.0, 1.0);
    cmat hb = cmat::Zero(rank, rank);
    for (const auto& c : compressed) hb += normal(rng) * (c + c.adjoint());
    const auto bspec = eig_hermitian(hb);
    const auto bgroups = eigen_groups(bspec.values, kEigenGap);
    if (static_cast<Index>(bgroups.size()) != factor) return std::nullopt;
    for (const auto& g : bgroups)
      if (g.second != mult) return std::nullopt;

    cmat x = cmat::Zero(rank, rank);
    for (const auto& c : compressed) x += cplx(normal(rng), normal(rng)) * c;
    const cmat first = bspec.vectors.middleCols(bgroups[0].first, mult);
    const cmat p1 = first * first.adjoint();
    cmat frame(rank, rank);
    for (Index k = 0; k < factor; ++k) {
      const cmat ek = bspec.vectors.middleCols(bgroups[static_cast<std::size_t>(k)].first, mult);
      cmat v = k == 0 ? p1 : cmat(ek * ek.adjoint() * x * p1);
      const double c = v.squaredNorm() / double(mult);
      if (c < 1e-12) return std::nullopt;
      if (k > 0) v /= std::sqrt(c);
      frame.middleCols(k * mult, mult) = v * first;
    }
    Block block;
    block.factor_dim = factor;
    block.multiplicity = mult;
    block.projector = range * range.adjoint();
    block.frame = range * frame;
    out.blocks.push_back(std::move(block));
  }
  std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const Block& a, const Block& b) {
    return a.factor_dim != b.factor_dim ? a.factor_dim > b.factor_dim
                                        : a.multiplicity > b.multiplicity;
  });
  out.alignment = cmat(d, d);
  Index col = 0;
  for (const auto& b : out.blocks) {
    out.alignment.middleCols(col, b.frame.cols()) = b.frame;
    col += b.frame.cols();
  }
  if (col != d) return std::nullopt;
  if ((out.alignment.adjoint() * out.alignment - cmat::Identity(d, d)).norm() > 1e-8)
    return std::nullopt;
  // Every element must read A_i ⊗ 1_{m_i} on each block and vanish off the diagonal blocks.
  for (Index k = 0; k < n.dimension(); ++k) {
    const cmat a = out.alignment.adjoint() * n.element(k) * out.alignment;
    cmat model = cmat::Zero(d, d);
    Index off = 0;
    for (const auto& b : out.blocks) {
      const Index size = b.factor_dim * b.multiplicity;
      const cmat sub = a.block(off, off, size, size);
      const cmat reduced =
          partial_trace(sub, {b.factor_dim, b.multiplicity}, {0}) / double(b.multiplicity);
      model.block(off, off, size, size) = tensor(reduced, cmat::Identity(b.multiplicity, b.multiplicity));
      off += size;
    }
    if ((a - model).norm() > 1e-8) return std::nullopt;
  }
  return out;
}

}  // namespace

// ---- VnAlgebra ------------------------------------------------------------

VnAlgebra::VnAlgebra(Index ambient_dim, cmat basis)
    : dim_(ambient_dim), basis_(std::move(basis)), cache_(std::make_shared<detail::BlockCache>()) {
  if (ambient_dim <= 0) throw ShapeMismatch("VnAlgebra: ambient dimension must be positive");
  if (basis_.rows() != ambient_dim * ambient_dim)
    throw ShapeMismatch("VnAlgebra: basis vectors must have length d^2");
}

VnAlgebra VnAlgebra::full(Index d) {
  return VnAlgebra(d, cmat::Identity(d * d, d * d));
}

VnAlgebra VnAlgebra::trivial(Index d) {
  return VnAlgebra(d, vec(cmat::Identity(d, d) / std::sqrt(double(d))));
}

VnAlgebra VnAlgebra::diagonal(Index d) { return diagonal_in(cmat::Identity(d, d)); }

VnAlgebra VnAlgebra::diagonal_in(const cmat& unitary) {
  const Index d = unitary.rows();
  if (unitary.cols() != d) throw ShapeMismatch("diagonal_in: basis matrix is not square");
  if ((unitary.adjoint() * unitary - cmat::Identity(d, d)).norm() > 1e-9)
    throw DomainError("diagonal_in: basis vectors are not orthonormal");
  cmat basis(d * d, d);
  for (Index j = 0; j < d; ++j) basis.col(j) = vec(unitary.col(j) * unitary.col(j).adjoint());
  return VnAlgebra(d, basis);
}

std::vector<cmat> VnAlgebra::elements() const {
  std::vector<cmat> out;
  out.reserve(static_cast<std::size_t>(dimension()));
  for (Index k = 0; k < dimension(); ++k) out.push_back(element(k));
  return out;
}

cmat VnAlgebra::expectation(const cmat& x) const {
  if (x.rows() != dim_ || x.cols() != dim_)
    throw ShapeMismatch("expectation: operator does not act on the algebra's space");
  return unvec(basis_ * (basis_.adjoint() * vec(x)), dim_);
}

cmat VnAlgebra::expectation(const cmat& x, Index aux_dim) const {
  if (aux_dim == 1) return expectation(x);
  const Index d = dim_;
  const Index big = d * aux_dim;
  if (x.rows() != big || x.cols() != big)
    throw ShapeMismatch("expectation: joint operator has the wrong size");
  cmat w(d * d, aux_dim * aux_dim);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i)
      for (Index b = 0; b < aux_dim; ++b)
        for (Index a = 0; a < aux_dim; ++a)
          w(i + j * d, a + b * aux_dim) = x(i * aux_dim + a, j * aux_dim + b);
  const cmat p = basis_ * (basis_.adjoint() * w);
  cmat out(big, big);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i)
      for (Index b = 0; b < aux_dim; ++b)
        for (Index a = 0; a < aux_dim; ++a)
          out(i * aux_dim + a, j * aux_dim + b) = p(i + j * d, a + b * aux_dim);
  return out;
}

double VnAlgebra::residual(const cmat& x) const {
  const cvec v = vec(x);
  return (v - basis_ * (basis_.adjoint() * v)).norm();
}

bool VnAlgebra::contains(const cmat& x, double tol) const {
  return residual(x) <= tol * std::max(1.0, x.norm());
}

bool VnAlgebra::contains(const VnAlgebra& sub, double tol) const {
  if (sub.ambient_dim() != dim_) return false;
  const cmat rest = sub.basis() - basis_ * (basis_.adjoint() * sub.basis());
  return rest.colwise().norm().maxCoeff() <= tol;
}

const BlockStructure& VnAlgebra::blocks() const {
  std::call_once(cache_->once, [this] {
    const VnAlgebra z = center(*this);
    for (int attempt = 0; attempt < kBlockAttempts; ++attempt) {
      Rng rng(derive_seed(kBlockSeed, static_cast<std::uint64_t>(attempt)));
      if (auto found = try_blocks(*this, z, rng)) {
        cache_->value = std::move(found);
        return;
      }
    }
    throw DecompositionFailed("block_structure: no consistent decomposition after retries");
  });
  return *cache_->value;
}

bool VnAlgebra::is_commutative() const {
  for (const auto& b : blocks().blocks)
    if (b.factor_dim != 1) return false;
  return true;
}

bool same_algebra(const VnAlgebra& a, const VnAlgebra& b, double tol) {
  return a.dimension() == b.dimension() && a.contains(b, tol) && b.contains(a, tol);
}

// ---- constructions --------------------------------------------------------

VnAlgebra direct_sum_algebra(const std::vector<BlockShape>& shape) {
  Index d = 0;
  Index k = 0;
  for (const auto& b : shape) {
    if (b.factor_dim <= 0 || b.multiplicity <= 0) throw DomainError("direct_sum_algebra: empty block");
    d += b.factor_dim * b.multiplicity;
    k += b.factor_dim * b.factor_dim;
  }
  cmat basis = cmat::Zero(d * d, k);
  Index off = 0;
  Index col = 0;
  for (const auto& b : shape) {
    const Index m = b.multiplicity;
    for (Index r = 0; r < b.factor_dim; ++r)
      for (Index c = 0; c < b.factor_dim; ++c) {
        cmat unit = cmat::Zero(b.factor_dim, b.factor_dim);
        unit(r, c) = 1;
        cmat e = cmat::Zero(d, d);
        e.block(off, off, b.factor_dim * m, b.factor_dim * m) =
            tensor(unit, cmat::Identity(m, m)) / std::sqrt(double(m));
        basis.col(col++) = vec(e);
      }
    off += b.factor_dim * m;
  }
  return VnAlgebra(d, basis);
}

VnAlgebra generate(Index d, const std::vector<cmat>& generators) {
  std::vector<cmat> gens;
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) throw ShapeMismatch("generate: generator has the wrong size");
    gens.push_back(g);
    if ((g - g.adjoint()).norm() > 1e-14 * std::max(1.0, g.norm())) gens.push_back(g.adjoint());
  }
  detail::SpanBuilder span(d * d, kRankCutoff);
  span.add(vec(cmat::Identity(d, d)));
  for (const auto& g : gens) span.add(vec(g));
  for (Index i = 0; i < span.size() && span.size() < d * d; ++i) {
    const cmat q = unvec(span.column(i), d);
    for (const auto& g : gens) {
      span.add(vec(g * q), g.norm());
      if (span.size() == d * d) break;
    }
  }
  if (span.size() == d * d) return VnAlgebra::full(d);
  return VnAlgebra(d, span.basis());
}

VnAlgebra join(const VnAlgebra& a, const VnAlgebra& b) {
  require_same_dim(a, b, "join");
  if (a.contains(b)) return a;
  if (b.contains(a)) return b;
  const Index d = a.ambient_dim();
  // Two generic elements of each side generate it; the full bases are the
  // fallback should the draw be degenerate.
  Rng rng(kCommutantSeed);
  std::vector<cmat> gens;
  for (const VnAlgebra* side : {&a, &b})
    for (int i = 0; i < 2; ++i) gens.push_back(random_element_coefficients(side->basis(), rng, false, d));
  VnAlgebra joined = generate(d, gens);
  if (joined.contains(a) && joined.contains(b)) return joined;
  gens = a.elements();
  for (auto& e : b.elements()) gens.push_back(std::move(e));
  return generate(d, gens);
}

VnAlgebra intersect(const VnAlgebra& a, const VnAlgebra& b) {
  require_same_dim(a, b, "intersect");
  const cmat rest = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  const cmat null = detail::null_space(rest, kRankCutoff);
  return VnAlgebra(a.ambient_dim(), a.basis() * null);
}

VnAlgebra commutant(const VnAlgebra& n, const VnAlgebra& within) {
  require_same_dim(n, within, "commutant");
  if (!within.contains(n)) throw NotSubalgebra("commutant: algebra is not contained in the ambient algebra");
  const Index d = n.ambient_dim();
  std::vector<cmat> probes;
  if (n.dimension() * d * d <= kCommutantRowBudget) {
    probes = n.elements();
  } else {
    // Three random elements and their adjoints generate n for generic draws.
    Rng rng(kCommutantSeed);
    for (int i = 0; i < 3; ++i) {
      const cmat x = random_element_coefficients(n.basis(), rng, false, d);
      probes.push_back(x);
      probes.push_back(x.adjoint());
    }
  }
  const Index rows = static_cast<Index>(probes.size()) * d * d;
  cmat l(rows, within.dimension());
  for (Index j = 0; j < within.dimension(); ++j) {
    const cmat w = within.element(j);
    for (std::size_t k = 0; k < probes.size(); ++k)
      l.block(static_cast<Index>(k) * d * d, j, d * d, 1) = vec(w * probes[k] - probes[k] * w);
  }
  const cmat null = detail::null_space(l, kRankCutoff);
  return VnAlgebra(d, within.basis() * null);
}

VnAlgebra commutant(const VnAlgebra& n) { return commutant(n, VnAlgebra::full(n.ambient_dim())); }

VnAlgebra center(const VnAlgebra& n) { return commutant(n, n); }

VnAlgebra tensor(const VnAlgebra& a, const VnAlgebra& b) {
  const Index da = a.ambient_dim();
  const Index db = b.ambient_dim();
  cmat basis(da * da * db * db, a.dimension() * b.dimension());
  Index col = 0;
  for (Index i = 0; i < a.dimension(); ++i) {
    const cmat x = a.element(i);
    for (Index j = 0; j < b.dimension(); ++j) basis.col(col++) = vec(tensor(x, b.element(j)));
  }
  return VnAlgebra(da * db, basis);
}

VnAlgebra tensor(const std::vector<VnAlgebra>& factors) {
  if (factors.empty()) return VnAlgebra::trivial(1);
  VnAlgebra out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

VnAlgebra conjugate(const VnAlgebra& n, const cmat& unitary) {
  const Index d = n.ambient_dim();
  if (unitary.rows() != d || unitary.cols() != d) throw ShapeMismatch("conjugate: unitary has the wrong size");
  cmat basis(d * d, n.dimension());
  for (Index k = 0; k < n.dimension(); ++k) basis.col(k) = vec(unitary * n.element(k) * unitary.adjoint());
  return VnAlgebra(d, basis);
}

cmat random_hermitian_in(const VnAlgebra& n, Rng& rng) {
  return random_element_coefficients(n.basis(), rng, true, n.ambient_dim());
}

cmat random_unitary_in(const VnAlgebra& n, Rng& rng) {
  const cmat h = random_hermitian_in(n, rng);
  const auto spec = eig_hermitian(h);
  cvec phases(spec.values.size());
  for (Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, spec.values(i));
  return spec.vectors * phases.asDiagonal() * spec.vectors.adjoint();
}

// ---- block-frame maps -----------------------------------------------------

cmat cond_expectation_blockwise(const VnAlgebra& n, const cmat& rho) {
  const Index d = n.ambient_dim();
  cmat out = cmat::Zero(d, d);
  for (const auto& b : n.blocks().blocks) {
    const cmat local = b.frame.adjoint() * rho * b.frame;
    const cmat reduced = partial_trace(local, {b.factor_dim, b.multiplicity}, {0});
    const cmat mixed = cmat::Identity(b.multiplicity, b.multiplicity) / double(b.multiplicity);
    out += b.frame * tensor(reduced, mixed) * b.frame.adjoint();
  }
  return out;
}

cmat commutant_expectation_blockwise(const VnAlgebra& n, const cmat& rho) {
  const Index d = n.ambient_dim();
  cmat out = cmat::Zero(d, d);
  for (const auto& b : n.blocks().blocks) {
    const cmat local = b.frame.adjoint() * rho * b.frame;
    const cmat reduced = partial_trace(local, {b.factor_dim, b.multiplicity}, {1});
    const cmat mixed = cmat::Identity(b.factor_dim, b.factor_dim) / double(b.factor_dim);
    out += b.frame * tensor(mixed, reduced) * b.frame.adjoint();
  }
  return out;
}

Index complement_dim(const VnAlgebra& n) {
  Index total = 0;
  for (const auto& b : n.blocks().blocks) total += b.multiplicity * b.multiplicity;
  return total;
}

cmat complement_apply(const VnAlgebra& n, const cmat& rho_joint, Index aux_dim) {
  const Index d = n.ambient_dim();
  if (aux_dim <= 0 || rho_joint.rows() != d * aux_dim || rho_joint.cols() != d * aux_dim)
    throw ShapeMismatch("complement_apply: joint state has the wrong size");
  const Index env = complement_dim(n);
  cmat out = cmat::Zero(env * aux_dim, env * aux_dim);
  const cmat aux_id = cmat::Identity(aux_dim, aux_dim);
  Index off = 0;
  for (const auto& b : n.blocks().blocks) {
    const cmat frame = tensor(b.frame, aux_id);
    const cmat local = frame.adjoint() * rho_joint * frame;
    const cmat reduced = partial_trace(local, {b.factor_dim, b.multiplicity, aux_dim}, {1, 2});
    const cmat mixed = cmat::Identity(b.multiplicity, b.multiplicity) / double(b.multiplicity);
    const Index size = b.multiplicity * b.multiplicity * aux_dim;
    out.block(off, off, size, size) = tensor(mixed, reduced);
    off += size;
  }
  return out;
}

cmat stinespring(const VnAlgebra& n) {
  const Index d = n.ambient_dim();
  const Index env = complement_dim(n);
  cmat v = cmat::Zero(d * env, d);
  Index env_off = 0;
  for (const auto& b : n.blocks().blocks) {
    const Index m = b.multiplicity;
    const double w = 1.0 / std::sqrt(double(m));
    for (Index k = 0; k < b.factor_dim; ++k)
      for (Index j = 0; j < m; ++j) {
        const cvec in = b.frame.col(k * m + j);
        for (Index jp = 0; jp < m; ++jp) {
          cvec e = cvec::Zero(env);
          e(env_off + jp * m + j) = 1.0;
          v += w * tensor(cmat(b.frame.col(k * m + jp)), cmat(e)) * in.adjoint();
        }
      }
    env_off += m * m;
  }
  return v;
}

// ---- squares --------------------------------------------------------------

double commuting_defect(const VnAlgebra& a, const VnAlgebra& b, const VnAlgebra& meet) {
  const cmat pa = a.superoperator();
  const cmat pb = b.superoperator();
  const cmat pc = meet.superoperator();
  return std::max((pa * pb - pc).norm(), (pb * pa - pc).norm());
}

Square classify_square(const VnAlgebra& first, const VnAlgebra& second, const VnAlgebra& within,
                       double tol) {
  require_same_dim(first, second, "classify_square");
  require_same_dim(first, within, "classify_square");
  if (!within.contains(first) || !within.contains(second))
    throw NotSubalgebra("classify_square: algebras are not contained in the ambient algebra");
  Square sq{first, second, intersect(first, second), within};
  sq.commuting_defect = commuting_defect(first, second, sq.meet);
  sq.commuting = sq.commuting_defect <= tol;
  const VnAlgebra first_c = commutant(first, within);
  const VnAlgebra second_c = commutant(second, within);
  sq.co_commuting_defect = commuting_defect(first_c, second_c, intersect(first_c, second_c));
  sq.co_commuting = sq.co_commuting_defect <= tol;
  return sq;
}

}  // namespace vnlab
