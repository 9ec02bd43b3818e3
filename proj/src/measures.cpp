#include "vnlab/measures.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "mub.hpp"
#include "vnlab/entropy.hpp"
#include "vnlab/squares.hpp"

namespace vnlab {

namespace {

constexpr Index kMaxExtension = 16;
constexpr Index kMaxEnvironment = 16;

struct Term {
  const VnAlgebra* algebra;
  double coeff;
};

// c · h(E ω) with the homogeneous entropy h(ω) = −tr ω log ω + tr ω log tr ω.
// Adds c · (−log₂ E ω) to `grad`; the log₂(tr ω) parts cancel across a square
// because the coefficients sum to zero.
double homogeneous_term(const Term& term, const cmat& omega, Index aux, cmat* grad) {
  const auto spec = eig_hermitian(hermitian_part(term.algebra->expectation(omega, aux)));
  const double thr = spectral_threshold(spec.values, kZeroCutoff);
  double h = 0;
  double total = 0;
  rvec logs = rvec::Zero(spec.values.size());
  for (Index i = 0; i < spec.values.size(); ++i) {
    const double lam = spec.values(i);
    if (lam <= thr || lam <= 0) continue;
    logs(i) = -std::log2(lam);
    h += lam * logs(i);
    total += lam;
  }
  if (total > 0) h += total * std::log2(total);
  if (grad) *grad += term.coeff * (spec.vectors * logs.cast<cplx>().asDiagonal() * spec.vectors.adjoint());
  return term.coeff * h;
}

std::array<Term, 4> square_terms(const VnAlgebra& first, const VnAlgebra& second, const VnAlgebra& within,
                                 const VnAlgebra& meet, double scale) {
  return {Term{&first, scale}, Term{&second, scale}, Term{&within, -scale}, Term{&meet, -scale}};
}

// Columns √λ_j e_j over the support, so that ρ = Ψ Ψ†.
cmat purification_columns(const cmat& rho) {
  const auto spec = eig_hermitian(rho);
  const double thr = spectral_threshold(spec.values, kZeroCutoff);
  Index r = 0;
  while (r < spec.values.size() && spec.values(r) > thr) ++r;
  cmat psi(rho.rows(), r);
  for (Index j = 0; j < r; ++j) psi.col(j) = std::sqrt(spec.values(j)) * spec.vectors.col(j);
  return psi;
}

cmat ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  cmat g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = cplx(n(rng), n(rng));
  return g;
}

// σ = tr_K |Φ⟩⟨Φ| on ℂ^D ⊗ ℂ^ext with Φ = Ψ Vᵀ ∈ ℂ^D ⊗ ℂ^ext ⊗ ℂ^K, i.e. the
// purifying system pushed through the Stinespring isometry V.
struct ExtensionProblem {
  std::array<Term, 4> terms;
  cmat psi;
  Index ext;
  Index env;

  cmat stacked(const cmat& v) const {
    const cmat phi = psi * v.transpose();
    const Index dim = psi.rows();
    cmat m(dim * ext, env);
    for (Index i = 0; i < dim; ++i)
      for (Index c = 0; c < ext; ++c) m.row(i * ext + c) = phi.row(i).segment(c * env, env);
    return m;
  }

  cmat state(const cmat& v) const {
    const cmat m = stacked(v);
    return m * m.adjoint();
  }

  double operator()(const cmat& v, cmat& grad) const {
    const cmat m = stacked(v);
    const cmat sigma = m * m.adjoint();
    cmat g = cmat::Zero(sigma.rows(), sigma.cols());
    double value = 0;
    for (const auto& t : terms) value += homogeneous_term(t, sigma, ext, &g);
    const cmat gm = g * m;
    const Index dim = psi.rows();
    cmat y(dim, ext * env);
    for (Index i = 0; i < dim; ++i)
      for (Index c = 0; c < ext; ++c) y.row(i).segment(c * env, env) = gm.row(i * ext + c);
    grad = 2.0 * y.transpose() * psi.conjugate();
    return value;
  }
};

// Pure components φ_x = column x of Ψ Vᵀ; Σ_x φ_x φ_x† = ΨΨ† for every isometry V.
struct DecompositionProblem {
  std::array<Term, 4> terms;
  cmat psi;

  cmat components(const cmat& v) const { return psi * v.transpose(); }

  double operator()(const cmat& v, cmat& grad) const {
    const cmat phi = components(v);
    cmat y(phi.rows(), phi.cols());
    double value = 0;
    for (Index x = 0; x < phi.cols(); ++x) {
      const cmat omega = phi.col(x) * phi.col(x).adjoint();
      cmat g = cmat::Zero(phi.rows(), phi.rows());
      for (const auto& t : terms) value += homogeneous_term(t, omega, 1, &g);
      y.col(x) = g * phi.col(x);
    }
    grad = 2.0 * y.transpose() * psi.conjugate();
    return value;
  }
};

template <class Problem>
cmat run_restarts(const Problem& problem, const std::vector<cmat>& fixed_starts, Index rows, Index cols,
                  const MeasureOptions& options, MeasureEstimate& est) {
  est.value_bits = std::numeric_limits<double>::infinity();
  cmat best;
  const int total = std::max<int>(options.restarts, static_cast<int>(fixed_starts.size()));
  for (int i = 0; i < total; ++i) {
    cmat start;
    if (static_cast<std::size_t>(i) < fixed_starts.size()) {
      start = fixed_starts[static_cast<std::size_t>(i)];
    } else {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(i)));
      start = ginibre(rows, cols, rng);
    }
    const auto res = stiefel_descent(problem, start, options.descent);
    est.evaluations += res.evaluations;
    est.restart_values.push_back(res.value);
    if (res.value < est.value_bits) {
      est.value_bits = res.value;
      best = res.point;
    }
  }
  est.restarts = total;
  est.seed = options.seed;
  return best;
}

struct Prepared {
  VnAlgebra joint;
  VnAlgebra meet;
  cmat reduced;
};

Prepared prepare_square(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho, const char* where) {
  if (s.ambient_dim() != t.ambient_dim() || rho.rows() != s.ambient_dim())
    throw ShapeMismatch(std::string(where) + ": dimensions differ");
  require_density(rho, where);
  VnAlgebra meet = intersect(s, t);
  if (meet.dimension() != 1) throw NontrivialIntersection(std::string(where) + ": S ∩ T is not ℂ1");
  if (commuting_defect(s, t, meet) > kSquareTol)
    throw NotCommutingSquare(std::string(where) + ": square does not commute");
  VnAlgebra joint = join(s, t);
  cmat reduced = hermitian_part(joint.expectation(rho));
  return {std::move(joint), std::move(meet), std::move(reduced)};
}

double square_value(const VnAlgebra& first, const VnAlgebra& second, const VnAlgebra& within,
                    const VnAlgebra& meet, const cmat& rho) {
  return entropy_bits(first.expectation(rho)) + entropy_bits(second.expectation(rho)) -
         entropy_bits(within.expectation(rho)) - entropy_bits(meet.expectation(rho));
}

MeasureEstimate exact_estimate(double value, const cmat& reduced) {
  MeasureEstimate est;
  est.value_bits = value;
  est.exactness = Exactness::exact_pure_path;
  est.witness = reduced;
  return est;
}

// Decomposition search shared by the convex roof and the squashed seed.
cmat decomposition_search(const DecompositionProblem& problem, Index length, const MeasureOptions& options,
                          MeasureEstimate& est) {
  const Index r = problem.psi.cols();
  cmat spectral = cmat::Zero(length, r);
  spectral.topRows(r) = cmat::Identity(r, r);
  return run_restarts(problem, {spectral}, length, r, options, est);
}

}  // namespace

bool algebraically_pure(const VnAlgebra& n, const cmat& rho, double tol) {
  const cmat reduced = n.expectation(rho);
  double weight_seen = 0;
  int occupied = 0;
  for (const auto& b : n.blocks().blocks) {
    const cmat local = b.frame.adjoint() * reduced * b.frame;
    const cmat factor = partial_trace(local, {b.factor_dim, b.multiplicity}, {0});
    const double w = factor.trace().real();
    weight_seen += w;
    if (w <= tol) continue;
    ++occupied;
    if (1.0 - (factor * factor).trace().real() / (w * w) > tol) return false;
  }
  return occupied == 1 && std::abs(weight_seen - 1.0) <= 1e-6;
}

MeasureEstimate iconv_estimate(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho,
                               const MeasureOptions& options) {
  const Prepared p = prepare_square(s, t, rho, "iconv_estimate");
  if (algebraically_pure(p.joint, rho))
    return exact_estimate(0.5 * square_value(s, t, p.joint, p.meet, p.reduced), p.reduced);
  DecompositionProblem problem{square_terms(s, t, p.joint, p.meet, 0.5), purification_columns(p.reduced)};
  const Index r = problem.psi.cols();
  const Index length = options.size > 0 ? options.size : r * r;
  if (length < r) throw DomainError("iconv_estimate: decomposition shorter than the rank");
  MeasureEstimate est;
  est.size = length;
  const cmat best = decomposition_search(problem, length, options, est);
  est.witness = problem.components(best);
  return est;
}

MeasureEstimate isq_estimate(const VnAlgebra& s, const VnAlgebra& t, const cmat& rho,
                             const MeasureOptions& options) {
  const Prepared p = prepare_square(s, t, rho, "isq_estimate");
  if (algebraically_pure(p.joint, rho))
    return exact_estimate(0.5 * square_value(s, t, p.joint, p.meet, p.reduced), p.reduced);
  const Index dim = s.ambient_dim();
  const Index ext = options.size > 0 ? options.size : std::min(dim * dim, kMaxExtension);
  const cmat psi = purification_columns(p.reduced);
  const Index r = psi.cols();
  const Index env = std::max(r, std::min(ext * r, kMaxEnvironment));

  const VnAlgebra ext_full = VnAlgebra::full(ext);
  ExtensionProblem problem{square_terms(s, t, p.joint, p.meet, 0.5), psi, ext, env};
  std::vector<cmat> starts;
  // Copy of the eigenvector label into C, then the trivial extension ρ ⊗ |0⟩⟨0|.
  cmat copy = cmat::Zero(ext * env, r);
  cmat trivial = cmat::Zero(ext * env, r);
  for (Index j = 0; j < r; ++j) {
    copy((j % ext) * env + j, j) = 1;
    trivial(j, j) = 1;
  }
  starts.push_back(copy);
  starts.push_back(trivial);
  // The classical extension induced by the best pure decomposition, when it fits.
  MeasureEstimate conv;
  if (r * r <= ext && r * r <= env) {
    DecompositionProblem dp{square_terms(s, t, p.joint, p.meet, 0.5), psi};
    const cmat v = decomposition_search(dp, r * r, options, conv);
    cmat induced = cmat::Zero(ext * env, r);
    for (Index x = 0; x < r * r; ++x) induced.row(x * env + x) = v.row(x);
    starts.push_back(induced);
  }
  MeasureEstimate est;
  est.size = ext;
  const cmat best = run_restarts(problem, starts, ext * env, r, options, est);
  est.evaluations += conv.evaluations;
  est.witness = problem.state(best);
  return est;
}

MeasureEstimate iext_estimate(const std::vector<Square>& squares, const cmat& joint_rho, Index ext_budget,
                              const MeasureOptions& options) {
  if (squares.empty()) throw ShapeMismatch("iext_estimate: no squares");
  std::vector<VnAlgebra> firsts, seconds, withins, meets;
  for (const auto& sq : squares) {
    if (commuting_defect(sq.first, sq.second, sq.meet) > kSquareTol)
      throw NotCommutingSquare("iext_estimate: a listed square does not commute");
    firsts.push_back(sq.first);
    seconds.push_back(sq.second);
    withins.push_back(sq.within);
    meets.push_back(sq.meet);
  }
  const VnAlgebra a = tensor(firsts), b = tensor(seconds), m = tensor(withins), c = tensor(meets);
  if (joint_rho.rows() != a.ambient_dim()) throw ShapeMismatch("iext_estimate: state has the wrong dimension");
  require_density(joint_rho, "iext_estimate");
  const double plain = square_value(a, b, m, c, joint_rho);
  if (algebraically_pure(m, joint_rho)) return exact_estimate(plain, joint_rho);

  MeasureEstimate est;
  est.size = 1;
  est.value_bits = plain;
  est.witness = joint_rho;
  est.restart_values.push_back(plain);
  if (ext_budget <= 1) return est;

  const Index ext = ext_budget;
  const cmat psi = purification_columns(joint_rho);
  const Index r = psi.cols();
  const Index env = std::max(r, std::min(ext * r, kMaxEnvironment));
  ExtensionProblem problem{square_terms(a, b, m, c, 1.0), psi, ext, env};
  cmat copy = cmat::Zero(ext * env, r);
  for (Index j = 0; j < r; ++j) copy((j % ext) * env + j, j) = 1;
  MeasureEstimate run;
  const cmat best = run_restarts(problem, {copy}, ext * env, r, options, run);
  est.restarts = run.restarts;
  est.seed = run.seed;
  est.evaluations = run.evaluations;
  est.restart_values.insert(est.restart_values.end(), run.restart_values.begin(), run.restart_values.end());
  if (run.value_bits < plain) {
    est.value_bits = run.value_bits;
    est.size = ext;
    est.witness = problem.state(best);
  }
  return est;
}

double continuity_bound(double epsilon, Index dim, ContinuityVariant variant) {
  if (!(epsilon >= 0) || epsilon >= 1) throw DomainError("continuity_bound: epsilon must lie in [0, 1)");
  if (dim < 1) throw DomainError("continuity_bound: dimension must be positive");
  const double root = std::sqrt(epsilon);
  const double lead = variant == ContinuityVariant::squashed ? 12.0 : 6.0;
  const double spread = 1 + 2 * root;
  return lead * root * std::log2(double(dim)) + 3 * spread * binary_entropy(1 / spread);
}

MaxIsq max_isq(const VnAlgebra& m) {
  const Block& top = m.blocks().blocks.front();
  const Index n = top.factor_dim;
  MaxIsq out;
  out.block_dim = n;
  out.value_bits = 0.5 * std::log2(double(n));
  if (n == 1) return out;
  if (!detail::is_prime(n)) throw WitnessUnavailable(out.value_bits, static_cast<std::size_t>(n));

  const Index d = m.ambient_dim();
  const Index mult = top.multiplicity;
  const cmat rest = cmat::Identity(d, d) - top.frame * top.frame.adjoint();
  const bool has_rest = rest.norm() > 1e-9;
  auto diagonal_algebra = [&](const cmat& u) {
    cmat basis(d * d, n + (has_rest ? 1 : 0));
    for (Index k = 0; k < n; ++k) {
      const cmat proj = top.frame * tensor(cmat(u.col(k) * u.col(k).adjoint()), cmat::Identity(mult, mult)) *
                        top.frame.adjoint();
      basis.col(k) = vec(proj) / proj.norm();
    }
    if (has_rest) basis.col(n) = vec(rest) / rest.norm();
    return VnAlgebra(d, basis);
  };
  VnAlgebra first = diagonal_algebra(detail::mub_basis(n, 1));
  VnAlgebra second = diagonal_algebra(detail::mub_basis(n, 0));
  cvec local = cvec::Zero(n * mult);
  const cmat third = detail::mub_basis(n, 2);
  for (Index k = 0; k < n; ++k) local(k * mult) = third(k, 0);
  const cmat state = ket_to_density(cvec(top.frame * local));
  const double achieved = 0.5 * gen_cmi(first, second, join(first, second), state).value_bits;
  if (std::abs(achieved - out.value_bits) > 1e-9)
    throw ToleranceFailure("max_isq: witness does not reach the block value");
  out.witness = MaxIsqWitness{std::move(first), std::move(second), state};
  return out;
}

}  // namespace vnlab
