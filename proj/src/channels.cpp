#include "vnlab/channels.hpp"

#include <cmath>
#include <numeric>

namespace vnlab {

namespace {

constexpr double kDropKraus = 1e-14;

double frob_gap(const cmat& a, const cmat& b) { return (a - b).norm(); }

}  // namespace

Channel::Channel(std::vector<cmat> kraus) {
  if (kraus.empty()) throw NotChannel("channel: no Kraus operators");
  out_ = kraus.front().rows();
  in_ = kraus.front().cols();
  cmat completeness = cmat::Zero(in_, in_);
  for (const auto& k : kraus) {
    if (k.rows() != out_ || k.cols() != in_) throw ShapeMismatch("channel: Kraus operators differ in shape");
    completeness += k.adjoint() * k;
  }
  if (frob_gap(completeness, cmat::Identity(in_, in_)) > kChannelTol)
    throw NotChannel("channel: Kraus operators are not trace preserving");
  for (auto& k : kraus)
    if (k.norm() > kDropKraus) kraus_.push_back(std::move(k));
  if (kraus_.empty()) throw NotChannel("channel: all Kraus operators vanish");
}

Channel Channel::identity(Index d) { return Channel({cmat::Identity(d, d)}); }

Channel Channel::unitary(const cmat& u) {
  if (u.rows() != u.cols()) throw ShapeMismatch("unitary channel: matrix is not square");
  return Channel({u});
}

Channel Channel::conditional_expectation(const VnAlgebra& n) {
  const cmat v = stinespring(n);
  const Index d = n.ambient_dim();
  const Index env = complement_dim(n);
  std::vector<cmat> kraus;
  for (Index e = 0; e < env; ++e) {
    cmat k(d, d);
    for (Index s = 0; s < d; ++s) k.row(s) = v.row(s * env + e);
    kraus.push_back(std::move(k));
  }
  return Channel(std::move(kraus));
}

Channel Channel::complement(const VnAlgebra& n) {
  const cmat v = stinespring(n);
  const Index d = n.ambient_dim();
  const Index env = complement_dim(n);
  std::vector<cmat> kraus;
  for (Index s = 0; s < d; ++s) kraus.push_back(v.middleRows(s * env, env));
  return Channel(std::move(kraus));
}

Channel Channel::mixture(const std::vector<double>& weights, const std::vector<Channel>& parts) {
  if (weights.size() != parts.size() || parts.empty()) throw ShapeMismatch("mixture: weights and channels differ");
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw DomainError("mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kChannelTol) throw DomainError("mixture: weights do not sum to one");
  std::vector<cmat> kraus;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].in_dim() != parts[0].in_dim() || parts[i].out_dim() != parts[0].out_dim())
      throw ShapeMismatch("mixture: channels differ in shape");
    for (const auto& k : parts[i].kraus()) kraus.push_back(std::sqrt(weights[i]) * k);
  }
  return Channel(std::move(kraus));
}

Channel Channel::from_choi(const cmat& choi, Index in_dim, Index out_dim) {
  if (choi.rows() != in_dim * out_dim || choi.cols() != in_dim * out_dim)
    throw ShapeMismatch("from_choi: Choi matrix has the wrong size");
  const auto spec = eig_hermitian(choi);
  const double scale = std::max(1.0, spec.values.cwiseAbs().maxCoeff());
  if (spec.values.minCoeff() < -kChannelTol * scale) throw NotChannel("from_choi: Choi matrix is not PSD");
  std::vector<cmat> kraus;
  for (Index j = 0; j < spec.values.size(); ++j) {
    if (spec.values(j) <= kZeroCutoff * scale) continue;
    cmat k(out_dim, in_dim);
    for (Index i = 0; i < in_dim; ++i)
      for (Index o = 0; o < out_dim; ++o) k(o, i) = spec.vectors(i * out_dim + o, j);
    kraus.push_back(std::sqrt(spec.values(j)) * k);
  }
  return Channel(std::move(kraus));
}

cmat Channel::apply(const cmat& rho) const {
  if (rho.rows() != in_ || rho.cols() != in_) throw ShapeMismatch("channel: input has the wrong size");
  cmat out = cmat::Zero(out_, out_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

cmat Channel::adjoint_apply(const cmat& x) const {
  if (x.rows() != out_ || x.cols() != out_) throw ShapeMismatch("channel adjoint: input has the wrong size");
  cmat out = cmat::Zero(in_, in_);
  for (const auto& k : kraus_) out += k.adjoint() * x * k;
  return out;
}

cmat Channel::choi() const {
  cmat j = cmat::Zero(in_ * out_, in_ * out_);
  cvec w(in_ * out_);
  for (const auto& k : kraus_) {
    for (Index i = 0; i < in_; ++i) w.segment(i * out_, out_) = k.col(i);
    j += w * w.adjoint();
  }
  return j;
}

cmat Channel::superoperator() const {
  cmat s = cmat::Zero(out_ * out_, in_ * in_);
  for (const auto& k : kraus_) s += tensor(cmat(k.conjugate()), k);
  return s;
}

Channel Channel::then(const Channel& next) const {
  if (next.in_dim() != out_) throw ShapeMismatch("then: output and input dimensions differ");
  std::vector<cmat> kraus;
  for (const auto& b : next.kraus())
    for (const auto& a : kraus_) kraus.push_back(b * a);
  Channel composed(std::move(kraus));
  // Keep the Kraus rank bounded by the Choi rank.
  if (static_cast<Index>(composed.kraus().size()) > in_ * next.out_dim())
    return from_choi(composed.choi(), in_, next.out_dim());
  return composed;
}

bool Channel::is_unital(double tol) const {
  return in_ == out_ && frob_gap(apply(cmat::Identity(in_, in_)), cmat::Identity(out_, out_)) <= tol;
}

double choi_distance(const Channel& a, const Channel& b) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim()) throw ShapeMismatch("choi_distance: shapes differ");
  return frob_gap(a.choi(), b.choi());
}

Channel petz_map(const Channel& phi, const cmat& sigma) {
  if (sigma.rows() != phi.in_dim() || sigma.cols() != phi.in_dim())
    throw ShapeMismatch("petz_map: default state has the wrong size");
  require_density(sigma, "petz_map");
  const cmat image = hermitian_part(phi.apply(sigma));
  const auto spec = eig_hermitian(image);
  if (spec.values.minCoeff() <= kZeroCutoff * spec.values.maxCoeff())
    throw SingularDefault("petz_map: image of the default state is rank deficient");
  const cmat root = psd_sqrt(sigma);
  const cmat inv_root = psd_power(image, -0.5);
  std::vector<cmat> kraus;
  for (const auto& k : phi.kraus()) kraus.push_back(root * k.adjoint() * inv_root);
  return Channel(std::move(kraus));
}

bool is_bimodule(const Channel& phi, const VnAlgebra& n, const VnAlgebra& m, double tol) {
  const Index d = m.ambient_dim();
  if (phi.in_dim() != d || phi.out_dim() != d || n.ambient_dim() != d)
    throw ShapeMismatch("is_bimodule: channel and algebras act on different spaces");
  if (!m.contains(n)) throw NotNested("is_bimodule: n is not contained in m");
  // With 1 ∈ n, the two-sided identity splits into left and right module laws.
  const auto left = n.elements();
  for (const auto& b : m.elements()) {
    const cmat image = phi.adjoint_apply(b);
    for (const auto& a : left) {
      if (frob_gap(phi.adjoint_apply(a * b), a * image) > tol) return false;
      if (frob_gap(phi.adjoint_apply(b * a), image * a) > tol) return false;
    }
  }
  // Φ†(x) = xΦ†(1) = x on n, so E_N ∘ Φ = E_N. Φ ∘ E_N = E_N ∘ Φ needs Φ(1) = 1 as
  // well, and the Schrödinger-picture law only sees m, so m must be everything.
  const cmat sp = phi.superoperator();
  const cmat pn = n.superoperator();
  const double slack = tol * double(d * d);
  if (frob_gap(pn * sp, pn) > slack) throw ToleranceFailure("is_bimodule: E_N ∘ Φ differs from E_N");
  if (phi.is_unital(tol) && m.dimension() == d * d && frob_gap(pn * sp, sp * pn) > slack)
    throw ToleranceFailure("is_bimodule: unital bimodule channel does not commute with E_N");
  return true;
}

bool is_t_preserving(const Channel& phi, const VnAlgebra& t, const std::optional<IsometryCertificate>& iso,
                     double tol) {
  const Index d = t.ambient_dim();
  if (phi.in_dim() != d) throw ShapeMismatch("is_t_preserving: channel input does not match the algebra");
  const cmat sp = phi.superoperator();
  if (!iso) {
    if (phi.out_dim() != d) throw ShapeMismatch("is_t_preserving: strict mode needs an endomorphism");
    const cmat pt = t.superoperator();
    return frob_gap(pt * sp, pt) <= tol;
  }
  const cmat& u = iso->isometry;
  const Index out = phi.out_dim();
  if (u.cols() != d || u.rows() != out || iso->target.ambient_dim() != out)
    throw ShapeMismatch("is_t_preserving: certificate does not match the channel");
  if (frob_gap(u.adjoint() * u, cmat::Identity(d, d)) > tol)
    throw DomainError("is_t_preserving: certificate is not an isometry");
  const cmat ad = tensor(cmat(u.conjugate()), u);
  return frob_gap(iso->target.superoperator() * sp, ad * t.superoperator()) <= tol;
}

}  // namespace vnlab
