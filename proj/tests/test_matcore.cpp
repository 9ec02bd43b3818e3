#include "doctest.h"

#include "vnlab/matcore.hpp"

using namespace vnlab;

namespace {

cmat diag(std::initializer_list<double> values) {
  rvec v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

cvec basis_ket(Index d, Index i) {
  cvec v = cvec::Zero(d);
  v(i) = 1;
  return v;
}

}  // namespace

TEST_CASE("eig_hermitian sorts descending and reconstructs") {
  const auto spec = eig_hermitian(diag({3, 1, 2}));
  CHECK(spec.values(0) == doctest::Approx(3));
  CHECK(spec.values(1) == doctest::Approx(2));
  CHECK(spec.values(2) == doctest::Approx(1));

  Rng rng(7);
  const cmat h = random_hermitian(5, rng);
  const auto s = eig_hermitian(h);
  const cmat back = s.vectors * s.values.cast<cplx>().asDiagonal() * s.vectors.adjoint();
  CHECK((back - h).norm() < 1e-12);
  CHECK((s.vectors.adjoint() * s.vectors - cmat::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  cmat m = cmat::Zero(2, 2);
  m(0, 1) = 1;
  CHECK_THROWS_AS(eig_hermitian(m), NotHermitian);
  CHECK_THROWS_AS(eig_hermitian(cmat::Zero(2, 3)), ShapeMismatch);
}

TEST_CASE("eig_hermitian is generic over the scalar") {
  CMatrix<float> m = CMatrix<float>::Zero(2, 2);
  m(0, 0) = 2.0f;
  m(1, 1) = -1.0f;
  const auto spec = eig_hermitian(m);
  CHECK(spec.values(0) == doctest::Approx(2.0f));
}

TEST_CASE("spectral functions act on the support only") {
  const cmat inv_sqrt = apply_spectral_function(diag({4, 0}), [](double x) { return 1 / std::sqrt(x); });
  CHECK((inv_sqrt - diag({0.5, 0})).norm() < 1e-14);
  CHECK_THROWS_AS(apply_spectral_function(diag({1, -0.5}), [](double x) { return std::log(x); }),
                  DomainError);
  // Spectral theorem: f(U D U†) = U f(D) U†.
  Rng rng(3);
  const cmat u = haar_unitary(3, rng);
  const cmat h = u * diag({0.5, 0.3, 0.2}) * u.adjoint();
  const cmat sq = apply_spectral_function(h, [](double x) { return x * x; });
  CHECK((sq - h * h).norm() < 1e-13);
  CHECK((psd_sqrt(h) * psd_sqrt(h) - h).norm() < 1e-13);
}

TEST_CASE("tensor follows the Kronecker convention") {
  cmat a(2, 2);
  a << 1, 2, 3, 4;
  const cmat b = cmat::Identity(2, 2);
  const cmat t = tensor(a, b);
  CHECK(t(0, 2) == cplx(2));
  CHECK(t(1, 3) == cplx(2));
  CHECK(t(2, 0) == cplx(3));
  CHECK(t(0, 1) == cplx(0));
}

TEST_CASE("partial trace of GHZ over the last qubit") {
  cvec ghz = (basis_ket(8, 0) + basis_ket(8, 7)) / std::sqrt(2.0);
  const cmat rho = ghz * ghz.adjoint();
  cmat expected = cmat::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = 0.5;
  CHECK((partial_trace(rho, {2, 2, 2}, {0, 1}) - expected).norm() < 1e-15);
  CHECK_THROWS_AS(partial_trace(rho, {2, 3}, {0}), ShapeMismatch);
}

TEST_CASE("partial trace of product operators") {
  Rng rng(11);
  const cmat x = random_density(2, 0, rng);
  const cmat y = random_density(3, 0, rng);
  const cmat z = random_density(2, 0, rng);
  const cmat xyz = tensor(tensor(x, y), z);
  CHECK((partial_trace(xyz, {2, 3, 2}, {1}) - y).norm() < 1e-13);
  CHECK((partial_trace(xyz, {2, 3, 2}, {0, 2}) - tensor(x, z)).norm() < 1e-13);
  CHECK((partial_trace(xyz, {2, 3, 2}, {0, 1, 2}) - xyz).norm() < 1e-15);
  CHECK(std::abs(partial_trace(xyz, {2, 3, 2}, {})(0, 0) - cplx(1)) < 1e-13);
}

TEST_CASE("fidelity and trace distance on pure states") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const cvec a = random_ket(4, rng);
    const cvec b = random_ket(4, rng);
    const double overlap = std::abs(a.dot(b));
    const cmat pa = a * a.adjoint();
    const cmat pb = b * b.adjoint();
    CHECK(fidelity(pa, pb) == doctest::Approx(overlap).epsilon(1e-7));
    CHECK(trace_distance(pa, pb) ==
          doctest::Approx(2 * std::sqrt(1 - overlap * overlap)).epsilon(1e-9));
  }
  const cmat up = basis_ket(2, 0) * basis_ket(2, 0).adjoint();
  const cmat down = basis_ket(2, 1) * basis_ket(2, 1).adjoint();
  CHECK(fidelity(up, up) == doctest::Approx(1));
  CHECK(fidelity(up, down) == doctest::Approx(0));
}

TEST_CASE("Fuchs-van de Graaf holds on random mixed pairs") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const cmat r = random_density(3, 0, rng);
    const cmat s = random_density(3, 2, rng);
    const double f = fidelity(r, s);
    const double half_td = 0.5 * trace_distance(r, s);
    CHECK(f >= 0);
    CHECK(f <= 1);
    CHECK(1 - f <= half_td + 1e-10);
    CHECK(half_td <= std::sqrt(std::max(0.0, 1 - f * f)) + 1e-10);
    CHECK(fidelity(r, s) == doctest::Approx(fidelity(s, r)).epsilon(1e-9));
  }
}

TEST_CASE("samplers produce valid and reproducible objects") {
  const cmat u = sample(SampleKind::haar_unitary, 4, 99);
  CHECK((u.adjoint() * u - cmat::Identity(4, 4)).norm() < 1e-12);
  const cmat rho = sample(SampleKind::density, 5, 99, 2);
  CHECK(is_density(rho));
  CHECK(eig_hermitian(rho).values(2) < 1e-12);
  CHECK(sample(SampleKind::density, 5, 99, 2) == rho);
  const cmat pure = sample(SampleKind::pure, 3, 4);
  CHECK(std::abs((pure * pure).trace() - cplx(1)) < 1e-12);
  CHECK_THROWS_AS(require_density(cmat::Identity(2, 2), "test"), InvalidDensity);
}

TEST_CASE("seed derivation and state hashes are deterministic") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  const cmat rho = sample(SampleKind::density, 3, 1);
  CHECK(state_hash(rho) == state_hash(cmat(rho)));
  CHECK(state_hash(rho).size() == 16);
  CHECK(state_hash(rho) != state_hash(sample(SampleKind::density, 3, 2)));
}
