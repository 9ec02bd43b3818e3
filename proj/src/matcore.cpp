#include "vnlab/matcore.hpp"

#include <cstring>
#include <cstdio>

namespace vnlab {

void require_density(const cmat& m, const char* where) {
  if (m.rows() != m.cols()) throw ShapeMismatch(std::string(where) + ": state is not square");
  if (!is_density(m)) throw InvalidDensity(std::string(where) + ": not a density matrix");
}

namespace {

cmat ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  cmat g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  return g;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

cvec random_ket(Index d, Rng& rng) {
  cvec v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

cmat random_pure(Index d, Rng& rng) { return ket_to_density(random_ket(d, rng)); }

cmat haar_unitary(Index d, Rng& rng) {
  const cmat z = ginibre(d, d, rng);
  Eigen::HouseholderQR<cmat> qr(z);
  cmat q = qr.householderQ() * cmat::Identity(d, d);
  const cmat r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

cmat random_density(Index d, Index rank, Rng& rng) {
  if (rank <= 0 || rank > d) rank = d;
  const cmat g = ginibre(d, rank, rng);
  cmat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

cmat random_hermitian(Index d, Rng& rng) {
  const cmat g = ginibre(d, d, rng);
  return hermitian_part(g);
}

cmat sample(SampleKind kind, Index dim, std::uint64_t seed, Index rank) {
  Rng rng(seed);
  switch (kind) {
    case SampleKind::haar_unitary: return haar_unitary(dim, rng);
    case SampleKind::density: return random_density(dim, rank, rng);
    case SampleKind::pure: return random_pure(dim, rng);
  }
  throw DomainError("sample: unknown kind");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return splitmix64(master ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

std::string state_hash(const cmat& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t rows = m.rows();
  const std::int64_t cols = m.cols();
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      // +0.0 and -0.0 hash alike.
      const double parts[2] = {m(i, j).real() + 0.0, m(i, j).imag() + 0.0};
      mix(parts, sizeof parts);
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vnlab
