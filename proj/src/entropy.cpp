#include "vnlab/entropy.hpp"

#include <cmath>
#include <numeric>

#include "vnlab/optimize.hpp"

namespace vnlab {

namespace {

constexpr double kSupportLeak = 1e-10;
// Objective value standing in for +∞ inside the simplex search.
constexpr double kInfinitePenalty = 1e6;

void require_pair(const cmat& rho, const cmat& sigma, const char* where) {
  require_density(rho, where);
  require_density(sigma, where);
  if (rho.rows() != sigma.rows()) throw ShapeMismatch(std::string(where) + ": dimension mismatch");
}

// Weight of ρ outside the support of σ.
double support_leak(const cmat& rho, const Spectrum<double>& sigma) {
  const double thr = spectral_threshold(sigma.values, kZeroCutoff);
  double leak = 0;
  for (Index i = 0; i < sigma.values.size(); ++i)
    if (sigma.values(i) <= thr) leak += sigma.vectors.col(i).dot(rho * sigma.vectors.col(i)).real();
  return leak;
}

cmat spectral_power(const Spectrum<double>& spec, double exponent) {
  const double thr = spectral_threshold(spec.values, kZeroCutoff);
  rvec mapped(spec.values.size());
  for (Index i = 0; i < mapped.size(); ++i)
    mapped(i) = spec.values(i) > thr ? std::pow(spec.values(i), exponent) : 0.0;
  return spec.vectors * mapped.cast<cplx>().asDiagonal() * spec.vectors.adjoint();
}

double renyi_bits(const cmat& rho, const cmat& sigma, double alpha) {
  const auto ss = eig_hermitian(sigma);
  const bool contained = support_leak(rho, ss) <= kSupportLeak;
  if (std::isinf(alpha)) {
    if (!contained) return std::numeric_limits<double>::infinity();
    const cmat w = spectral_power(ss, -0.5);
    return std::log2(eig_hermitian(cmat(w * rho * w)).values(0));
  }
  if (alpha > 1 && !contained) return std::numeric_limits<double>::infinity();
  const cmat w = spectral_power(ss, (1 - alpha) / (2 * alpha));
  const auto spec = eig_hermitian(cmat(w * rho * w));
  const double thr = spectral_threshold(spec.values, kZeroCutoff);
  double q = 0;
  for (Index i = 0; i < spec.values.size(); ++i)
    if (spec.values(i) > thr) q += std::pow(spec.values(i), alpha);
  if (q <= 0) return std::numeric_limits<double>::infinity();
  return std::log2(q) / (alpha - 1);
}

double relative_bits(const cmat& rho, const cmat& sigma) {
  const auto ss = eig_hermitian(sigma);
  if (support_leak(rho, ss) > kSupportLeak) return std::numeric_limits<double>::infinity();
  const double thr = spectral_threshold(ss.values, kZeroCutoff);
  rvec logs(ss.values.size());
  for (Index i = 0; i < logs.size(); ++i) logs(i) = ss.values(i) > thr ? std::log2(ss.values(i)) : 0.0;
  const cmat log_sigma = ss.vectors * logs.cast<cplx>().asDiagonal() * ss.vectors.adjoint();
  return -entropy_bits(rho) - (rho * log_sigma).trace().real();
}

}  // namespace

double entropy_bits(const cmat& hermitian) {
  Eigen::SelfAdjointEigenSolver<cmat> solver(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  const rvec& values = solver.eigenvalues();
  const double thr = spectral_threshold(values, kZeroCutoff);
  double h = 0;
  for (Index i = 0; i < values.size(); ++i)
    if (values(i) > thr) h -= values(i) * std::log2(values(i));
  return h;
}

double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

EntropyValue vn_entropy(const cmat& rho) {
  require_density(rho, "vn_entropy");
  return EntropyValue::finite(entropy_bits(rho));
}

EntropyValue rel_entropy(const cmat& rho, const cmat& sigma) {
  require_pair(rho, sigma, "rel_entropy");
  const double d = relative_bits(rho, sigma);
  return std::isinf(d) ? EntropyValue::infinite() : EntropyValue::finite(d);
}

EntropyValue sandwiched_renyi(const cmat& rho, const cmat& sigma, double alpha) {
  if (!(alpha >= 0.5)) throw DomainError("sandwiched_renyi: alpha must lie in [1/2, inf]");
  if (alpha == 1) return rel_entropy(rho, sigma);
  require_pair(rho, sigma, "sandwiched_renyi");
  const double d = renyi_bits(rho, sigma, alpha);
  return std::isinf(d) ? EntropyValue::infinite() : EntropyValue::finite(d);
}

EntropyValue algebra_entropy(const VnAlgebra& n, const cmat& rho) {
  require_density(rho, "algebra_entropy");
  return EntropyValue::finite(entropy_bits(n.expectation(rho)));
}

EntropyValue algebra_cond_entropy(const VnAlgebra& n, const std::vector<Index>& aux_dims,
                                  const cmat& rho_joint) {
  require_density(rho_joint, "algebra_cond_entropy");
  const Index aux = std::accumulate(aux_dims.begin(), aux_dims.end(), Index{1}, std::multiplies<>());
  if (rho_joint.rows() != n.ambient_dim() * aux)
    throw ShapeMismatch("algebra_cond_entropy: joint state has the wrong size");
  const double joint = entropy_bits(n.expectation(rho_joint, aux));
  const double marginal = entropy_bits(partial_trace(rho_joint, {n.ambient_dim(), aux}, {1}));
  return EntropyValue::finite(joint - marginal);
}

AsymmetryEstimate asymmetry_estimate(const VnAlgebra& n, const cmat& rho, double alpha, int restarts,
                                     std::uint64_t seed) {
  require_density(rho, "asymmetry");
  if (!(alpha >= 0.5)) throw DomainError("asymmetry: alpha must lie in [1/2, inf]");
  const cmat projected = n.expectation(rho);
  AsymmetryEstimate out;
  out.seed = seed;
  if (alpha == 1) {
    out.value = EntropyValue::finite(entropy_bits(projected) - entropy_bits(rho));
    out.minimizer = projected;
    return out;
  }
  out.exact = false;
  const Index k = n.dimension();
  const Index d = n.ambient_dim();
  auto state_of = [&](const rvec& p) {
    cvec c(k);
    for (Index i = 0; i < k; ++i) c(i) = cplx(p(2 * i), p(2 * i + 1));
    const cmat x = unvec(n.basis() * c, d);
    cmat s = x * x.adjoint();
    const double tr = s.trace().real();
    return tr > 0 ? cmat(s / tr) : cmat(cmat::Identity(d, d) / double(d));
  };
  auto objective = [&](const rvec& p) {
    const double v = renyi_bits(rho, hermitian_part(state_of(p)), alpha);
    return std::isfinite(v) ? v : kInfinitePenalty;
  };
  // σ = E_N(ρ) is reachable with X = √E_N(ρ), so the estimate never exceeds D_α(ρ‖E_N ρ).
  const cvec c0 = n.basis().adjoint() * vec(psd_sqrt(projected));
  rvec start(2 * k);
  for (Index i = 0; i < k; ++i) {
    start(2 * i) = c0(i).real();
    start(2 * i + 1) = c0(i).imag();
  }
  const int total = std::max(1, restarts);
  NelderMeadOptions opts;
  opts.max_evaluations = static_cast<int>(std::min<Index>(400 * 2 * k, 6000));
  double best = std::numeric_limits<double>::infinity();
  rvec best_point = start;
  for (int r = 0; r < total; ++r) {
    rvec init = start;
    if (r > 0) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      std::normal_distribution<double> normal(0.0, 0.3);
      for (Index i = 0; i < init.size(); ++i) init(i) += normal(rng);
    }
    const auto res = nelder_mead(objective, init, opts);
    if (res.value < best) {
      best = res.value;
      best_point = res.point;
    }
  }
  out.restarts = total;
  out.minimizer = hermitian_part(state_of(best_point));
  out.value = best >= kInfinitePenalty ? EntropyValue::infinite() : EntropyValue::finite(best);
  return out;
}

EntropyValue asymmetry(const VnAlgebra& n, const cmat& rho, double alpha) {
  return asymmetry_estimate(n, rho, alpha).value;
}

}  // namespace vnlab
