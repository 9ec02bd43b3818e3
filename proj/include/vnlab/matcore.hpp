#pragma once

// Dense complex linear algebra shared by every other module: Hermitian
// spectra, spectral functions, tensor products, partial traces, state
// distances, sampling and reproducible seeding.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "vnlab/errors.hpp"

namespace vnlab {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;
using cplx = std::complex<double>;
using cmat = CMatrix<double>;
using cvec = CVector<double>;
using rvec = RVector<double>;
using Rng = std::mt19937_64;

template <class Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

// Eigenvalues at or below this fraction of the largest magnitude count as zero.
inline constexpr double kZeroCutoff = 1e-12;
// Relative anti-Hermitian part tolerated by eig_hermitian.
inline constexpr double kHermitianTol = 1e-8;
// Absolute tolerance of the density-matrix predicate.
inline constexpr double kDensityTol = 1e-10;

// Eigenpairs sorted by descending eigenvalue; columns of `vectors` are orthonormal.
template <class Real>
struct Spectrum {
  RVector<Real> values;
  CMatrix<Real> vectors;
};

template <class Derived>
CMatrix<RealOf<Derived>> hermitian_part(const Eigen::MatrixBase<Derived>& h) {
  CMatrix<RealOf<Derived>> m = h;
  return (m + m.adjoint()) / RealOf<Derived>(2);
}

template <class Derived>
Spectrum<RealOf<Derived>> eig_hermitian(const Eigen::MatrixBase<Derived>& h) {
  using Real = RealOf<Derived>;
  if (h.rows() != h.cols()) throw ShapeMismatch("eig_hermitian: matrix is not square");
  CMatrix<Real> m = h;
  const Real scale = m.norm();
  if ((m - m.adjoint()).norm() > Real(kHermitianTol) * std::max(scale, Real(1e-300)))
    throw NotHermitian("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver((m + m.adjoint()) / Real(2));
  if (solver.info() != Eigen::Success) throw DecompositionFailed("eig_hermitian: solver failed");
  Spectrum<Real> out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

template <class Real>
Real spectral_threshold(const RVector<Real>& values, Real cutoff) {
  const Real top = values.size() ? values.cwiseAbs().maxCoeff() : Real(0);
  return cutoff * top;
}

// f(h) = Σ f(λ)|v⟩⟨v| over eigenvalues with |λ| above cutoff·max|λ|; the rest map to 0.
template <class Derived, class F>
CMatrix<RealOf<Derived>> apply_spectral_function(const Eigen::MatrixBase<Derived>& h, F&& f,
                                                 RealOf<Derived> cutoff = RealOf<Derived>(kZeroCutoff)) {
  using Real = RealOf<Derived>;
  const Spectrum<Real> spec = eig_hermitian(h);
  const Real thr = spectral_threshold(spec.values, cutoff);
  RVector<Real> mapped(spec.values.size());
  for (Index i = 0; i < spec.values.size(); ++i) {
    const Real lam = spec.values(i);
    if (std::abs(lam) <= thr) {
      mapped(i) = Real(0);
      continue;
    }
    const Real v = f(lam);
    if (!std::isfinite(v)) throw DomainError("apply_spectral_function: function undefined on spectrum");
    mapped(i) = v;
  }
  return spec.vectors * mapped.template cast<std::complex<Real>>().asDiagonal() *
         spec.vectors.adjoint();
}

// Power of a positive semidefinite matrix on its support. Eigenvalues below
// the cutoff are treated as zero, so negative exponents act as pseudo-inverses.
template <class Derived>
CMatrix<RealOf<Derived>> psd_power(const Eigen::MatrixBase<Derived>& h, RealOf<Derived> exponent) {
  using Real = RealOf<Derived>;
  return apply_spectral_function(h, [exponent](Real x) {
    return x > 0 ? std::pow(x, exponent) : std::numeric_limits<Real>::quiet_NaN();
  });
}

template <class Derived>
CMatrix<RealOf<Derived>> psd_sqrt(const Eigen::MatrixBase<Derived>& h) {
  return psd_power(h, RealOf<Derived>(0.5));
}

template <class Derived>
CMatrix<RealOf<Derived>> support_projector(const Eigen::MatrixBase<Derived>& h,
                                           RealOf<Derived> cutoff = RealOf<Derived>(kZeroCutoff)) {
  using Real = RealOf<Derived>;
  return apply_spectral_function(h, [](Real) { return Real(1); }, cutoff);
}

template <class DA, class DB>
CMatrix<RealOf<DA>> tensor(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  CMatrix<RealOf<DA>> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class Real>
CMatrix<Real> tensor(const std::vector<CMatrix<Real>>& factors) {
  CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

namespace detail {

// Offsets of the composite index restricted to the subsystems flagged in `mask`.
inline std::vector<Index> subsystem_offsets(const std::vector<Index>& dims,
                                            const std::vector<bool>& mask) {
  const std::size_t n = dims.size();
  std::vector<Index> strides(n, 1);
  for (std::size_t k = n; k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  std::vector<Index> offsets{0};
  for (std::size_t k = 0; k < n; ++k) {
    if (!mask[k]) continue;
    std::vector<Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(dims[k]));
    for (Index base : offsets)
      for (Index i = 0; i < dims[k]; ++i) next.push_back(base + i * strides[k]);
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace detail

// Trace over every subsystem not listed in `keep`; kept subsystems retain their order.
template <class Derived>
CMatrix<RealOf<Derived>> partial_trace(const Eigen::MatrixBase<Derived>& m,
                                       const std::vector<Index>& dims,
                                       const std::vector<Index>& keep) {
  using Real = RealOf<Derived>;
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  if (m.rows() != total || m.cols() != total)
    throw ShapeMismatch("partial_trace: matrix size does not match subsystem dimensions");
  std::vector<bool> kept(dims.size(), false);
  for (Index k : keep) {
    if (k < 0 || k >= static_cast<Index>(dims.size()))
      throw ShapeMismatch("partial_trace: subsystem index out of range");
    kept[static_cast<std::size_t>(k)] = true;
  }
  std::vector<bool> traced(kept.size());
  std::transform(kept.begin(), kept.end(), traced.begin(), [](bool b) { return !b; });
  const auto keep_off = detail::subsystem_offsets(dims, kept);
  const auto trace_off = detail::subsystem_offsets(dims, traced);
  const Index n = static_cast<Index>(keep_off.size());
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      std::complex<Real> acc(0);
      for (Index t : trace_off) acc += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

template <class Derived>
bool is_density(const Eigen::MatrixBase<Derived>& m, double tol = kDensityTol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  CMatrix<RealOf<Derived>> h = m;
  if ((h - h.adjoint()).norm() > tol) return false;
  if (std::abs(h.trace() - std::complex<RealOf<Derived>>(1)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix<RealOf<Derived>>> solver(hermitian_part(h),
                                                                 Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

// Throws InvalidDensity unless m is a density matrix within kDensityTol.
void require_density(const cmat& m, const char* where);

// Σ √λ(√ρ σ √ρ), clamped to [0, 1].
template <class DA, class DB>
RealOf<DA> fidelity(const Eigen::MatrixBase<DA>& rho, const Eigen::MatrixBase<DB>& sigma) {
  using Real = RealOf<DA>;
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ShapeMismatch("fidelity: dimension mismatch");
  const CMatrix<Real> root = psd_sqrt(rho);
  const CMatrix<Real> s = sigma;
  const auto spec = eig_hermitian(CMatrix<Real>(root * s * root));
  // Noise eigenvalues of a rank-deficient product would contribute ~√ε each.
  const Real thr = spectral_threshold(spec.values, Real(kZeroCutoff));
  Real f = 0;
  for (Index i = 0; i < spec.values.size(); ++i)
    if (spec.values(i) > thr) f += std::sqrt(spec.values(i));
  return std::clamp(f, Real(0), Real(1));
}

// ‖ρ − σ‖₁ (no factor of one half).
template <class DA, class DB>
RealOf<DA> trace_distance(const Eigen::MatrixBase<DA>& rho, const Eigen::MatrixBase<DB>& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ShapeMismatch("trace_distance: dimension mismatch");
  const auto spec = eig_hermitian(CMatrix<RealOf<DA>>(rho - sigma));
  return spec.values.cwiseAbs().sum();
}

template <class Derived>
CMatrix<RealOf<Derived>> ket_to_density(const Eigen::MatrixBase<Derived>& psi) {
  CVector<RealOf<Derived>> v = psi;
  v /= v.norm();
  return v * v.adjoint();
}

// Column-major vectorisation and its inverse.
inline cvec vec(const cmat& m) { return Eigen::Map<const cvec>(m.data(), m.size()); }
inline cmat unvec(const cvec& v, Index d) { return Eigen::Map<const cmat>(v.data(), d, d); }

// ---- sampling -------------------------------------------------------------

cvec random_ket(Index d, Rng& rng);
cmat random_pure(Index d, Rng& rng);
// Haar unitary via phase-fixed QR of a complex Ginibre matrix.
cmat haar_unitary(Index d, Rng& rng);
// GG†/tr(GG†) with G a d×rank Ginibre matrix; rank 0 means full rank.
cmat random_density(Index d, Index rank, Rng& rng);
cmat random_hermitian(Index d, Rng& rng);

enum class SampleKind { haar_unitary, density, pure };
cmat sample(SampleKind kind, Index dim, std::uint64_t seed, Index rank = 0);

// Counter-mode seed derivation so that instance i never depends on instance i−1.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

// FNV-1a digest of the raw entries, as 16 hex digits.
std::string state_hash(const cmat& m);

}  // namespace vnlab
