#include "doctest.h"

#include "vnlab/entropy.hpp"

using namespace vnlab;

namespace {

cmat diag(const std::vector<double>& p) {
  rvec v(static_cast<Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) v(static_cast<Index>(i)) = p[i];
  return v.cast<cplx>().asDiagonal();
}

// Classical oracles, written directly from the definitions.
double shannon(const std::vector<double>& p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) d += p[i] * std::log2(p[i] / q[i]);
  return d;
}

double classical_renyi(const std::vector<double>& p, const std::vector<double>& q, double a) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::pow(p[i], a) * std::pow(q[i], 1 - a);
  return std::log2(s) / (a - 1);
}

cmat bell() {
  cvec v = cvec::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("von Neumann entropy of simple states") {
  CHECK(vn_entropy(cmat::Identity(4, 4) / 4.0).bits() == doctest::Approx(2));
  Rng rng(1);
  CHECK(vn_entropy(random_pure(5, rng)).bits() == doctest::Approx(0).epsilon(1e-12));
  const std::vector<double> p{0.5, 0.3, 0.2};
  CHECK(vn_entropy(diag(p)).bits() == doctest::Approx(shannon(p)));
  CHECK(binary_entropy(0.25) == doctest::Approx(shannon({0.25, 0.75})));
  CHECK_THROWS_AS(vn_entropy(cmat::Identity(2, 2)), InvalidDensity);
}

TEST_CASE("entropy is unitarily invariant and bounded by log d") {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const cmat rho = random_density(4, 0, rng);
    const cmat u = haar_unitary(4, rng);
    const double h = vn_entropy(rho).bits();
    CHECK(h >= -1e-12);
    CHECK(h <= 2 + 1e-12);
    CHECK(vn_entropy(hermitian_part(cmat(u * rho * u.adjoint()))).bits() == doctest::Approx(h).epsilon(1e-10));
  }
}

TEST_CASE("relative entropy") {
  const std::vector<double> p{0.6, 0.3, 0.1};
  const std::vector<double> q{0.2, 0.5, 0.3};
  CHECK(rel_entropy(diag(p), diag(q)).bits() == doctest::Approx(kl(p, q)));
  CHECK(rel_entropy(diag(p), diag(p)).bits() == doctest::Approx(0).epsilon(1e-12));
  const auto inf = rel_entropy(diag({0.5, 0.5}), diag({1, 0}));
  CHECK_FALSE(inf.is_finite());
  CHECK(rel_entropy(diag({1, 0}), diag({0.5, 0.5})).bits() == doctest::Approx(1));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const cmat r = random_density(3, 0, rng);
    const cmat s = random_density(3, 0, rng);
    CHECK(rel_entropy(r, s).bits() >= -1e-12);
  }
}

TEST_CASE("sandwiched Renyi divergence") {
  const std::vector<double> p{0.7, 0.2, 0.1};
  const std::vector<double> q{0.3, 0.3, 0.4};
  for (double a : {0.5, 0.8, 1.5, 2.0, 3.0})
    CHECK(sandwiched_renyi(diag(p), diag(q), a).bits() == doctest::Approx(classical_renyi(p, q, a)));
  CHECK(sandwiched_renyi(diag(p), diag(q), INFINITY).bits() == doctest::Approx(std::log2(0.7 / 0.3)));

  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const cmat r = random_density(3, 0, rng);
    const cmat s = random_density(3, 0, rng);
    // Monotone non-decreasing in alpha, continuous at 1, and −log F² at 1/2.
    double prev = -INFINITY;
    for (double a : {0.5, 0.7, 0.9, 0.999, 1.0, 1.001, 1.5, 2.0, 5.0}) {
      const double v = sandwiched_renyi(r, s, a).bits();
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
    CHECK(sandwiched_renyi(r, s, INFINITY).bits() >= prev - 1e-9);
    CHECK(sandwiched_renyi(r, s, 1.0001).bits() == doctest::Approx(rel_entropy(r, s).bits()).epsilon(1e-3));
    const double f = fidelity(r, s);
    CHECK(sandwiched_renyi(r, s, 0.5).bits() == doctest::Approx(-std::log2(f * f)).epsilon(1e-8));
  }
  CHECK_FALSE(sandwiched_renyi(diag({0.5, 0.5}), diag({1, 0}), 2.0).is_finite());
  CHECK(sandwiched_renyi(diag({0.5, 0.5}), diag({1, 0}), 0.5).is_finite());
  CHECK_THROWS_AS(sandwiched_renyi(diag(p), diag(q), 0.3), DomainError);
}

TEST_CASE("algebra entropies") {
  Rng rng(2);
  const cmat rho = random_density(3, 0, rng);
  CHECK(algebra_entropy(VnAlgebra::trivial(3), rho).bits() == doctest::Approx(std::log2(3.0)));
  CHECK(algebra_entropy(VnAlgebra::full(3), rho).bits() == doctest::Approx(vn_entropy(rho).bits()));
  CHECK(algebra_cond_entropy(VnAlgebra::full(2), {2}, bell()).bits() == doctest::Approx(-1));
  CHECK(algebra_cond_entropy(VnAlgebra::trivial(2), {2}, bell()).bits() == doctest::Approx(1));
  // Entropy is monotone under inclusion: N ⊆ M implies H(N) ≥ H(M).
  const cmat big = random_density(4, 0, rng);
  const VnAlgebra small = tensor(VnAlgebra::full(2), VnAlgebra::trivial(2));
  CHECK(algebra_entropy(small, big).bits() >= algebra_entropy(VnAlgebra::full(4), big).bits() - 1e-12);
}

TEST_CASE("asymmetry") {
  cvec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const cmat rho = plus * plus.adjoint();
  CHECK(asymmetry(VnAlgebra::diagonal(2), rho, 1).bits() == doctest::Approx(1));

  // Pure qubit state against diagonal σ = diag(q, 1−q): one-dimensional oracle.
  const double th = 0.4;
  cvec psi(2);
  psi << std::cos(th), std::sin(th);
  const double alpha = 2.0;
  const double beta = (1 - alpha) / alpha;
  double oracle = INFINITY;
  for (int i = 1; i < 200000; ++i) {
    const double q = i / 200000.0;
    const double inner = std::pow(std::cos(th), 2) * std::pow(q, beta) + std::pow(std::sin(th), 2) * std::pow(1 - q, beta);
    oracle = std::min(oracle, alpha / (alpha - 1) * std::log2(inner));
  }
  const auto est = asymmetry_estimate(VnAlgebra::diagonal(2), psi * psi.adjoint(), alpha, 8, 5);
  CHECK_FALSE(est.exact);
  CHECK(est.restarts == 8);
  CHECK(est.value.bits() == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(est.value.bits() <=
        sandwiched_renyi(psi * psi.adjoint(), VnAlgebra::diagonal(2).expectation(psi * psi.adjoint()), alpha).bits() + 1e-12);
}
