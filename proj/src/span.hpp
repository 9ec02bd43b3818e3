#pragma once

// Internal helpers for growing orthonormal spans and extracting null spaces.

#include <algorithm>
#include <cmath>

#include "vnlab/errors.hpp"
#include "vnlab/matcore.hpp"

namespace vnlab::detail {

// Orthonormal basis grown one candidate at a time by modified Gram–Schmidt
// with one reorthogonalisation pass.
class SpanBuilder {
 public:
  SpanBuilder(Index length, double cutoff) : q_(length, length), cutoff_(cutoff) {}

  // Returns true when x contributed a new direction. The residual is compared
  // against `scale`, which callers set to the size x would have without
  // cancellation so that rounding noise is never promoted to a direction.
  bool add(const cvec& x) { return add(x, x.norm()); }
  bool add(const cvec& x, double scale) {
    if (scale == 0 || size_ == q_.cols()) return false;
    cvec r = x;
    for (int pass = 0; pass < 2; ++pass)
      for (Index j = 0; j < size_; ++j) r -= q_.col(j) * q_.col(j).dot(r);
    const double rest = r.norm();
    if (rest <= cutoff_ * scale) return false;
    q_.col(size_++) = r / rest;
    return true;
  }

  Index size() const noexcept { return size_; }
  cvec column(Index j) const { return q_.col(j); }
  cmat basis() const { return q_.leftCols(size_); }

 private:
  cmat q_;
  Index size_ = 0;
  double cutoff_;
};

// Orthonormal columns spanning {c : a c ≈ 0}; singular values at or below
// cutoff · max(1, σ_max) count as zero.
inline cmat null_space(const cmat& a, double cutoff) {
  const Index cols = a.cols();
  if (cols == 0) return cmat(0, 0);
  if (a.rows() == 0) return cmat::Identity(cols, cols);
  // The Gram spectrum resolves σ only down to about √ε σ_max, so it just selects
  // candidates: directions with σ above 1e-5 σ_max are never null at any cutoff
  // used here. The rank decision is made by the SVD of a restricted to the
  // candidates, which shares a's small singular values.
  const cmat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<cmat> eig(gram);
  if (eig.info() != Eigen::Success) throw DecompositionFailed("null_space: Gram eigensolver did not converge");
  const rvec& lambda = eig.eigenvalues();  // ascending
  const double lambda_max = std::max(lambda(cols - 1), 0.0);
  Index candidates = 0;
  while (candidates < cols && lambda(candidates) <= 1e-10 * std::max(1.0, lambda_max)) ++candidates;
  if (candidates == 0) return cmat(cols, 0);
  const cmat basis = eig.eigenvectors().leftCols(candidates);
  const cmat restricted = a * basis;
  const double thr = cutoff * std::max(1.0, std::sqrt(lambda_max));
  // The Frobenius norm bounds every singular value.
  if (restricted.norm() <= thr) return basis;
  // JacobiSVD with its QR preconditioner: BDCSVD in Eigen 3.4 returned NaNs on
  // some exactly rank-deficient complex inputs.
  Eigen::JacobiSVD<cmat> svd(restricted, Eigen::ComputeFullV);
  const rvec& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  return basis * svd.matrixV().rightCols(candidates - rank);
}

}  // namespace vnlab::detail
