#include "doctest.h"

#include "vnlab/channels.hpp"
#include "vnlab/squares.hpp"

using namespace vnlab;

namespace {

VnAlgebra full(Index d) { return VnAlgebra::full(d); }
VnAlgebra triv(Index d) { return VnAlgebra::trivial(d); }

const cmat kX = (cmat(2, 2) << 0, 1, 1, 0).finished();
const cmat kY = (cmat(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
const cmat kZ = (cmat(2, 2) << 1, 0, 0, -1).finished();
const cmat kI = cmat::Identity(2, 2);

VnAlgebra rotated(const std::vector<BlockShape>& shape, Rng& rng) {
  const VnAlgebra base = direct_sum_algebra(shape);
  return conjugate(base, haar_unitary(base.ambient_dim(), rng));
}

// Mixture of random unitaries from n.
Channel random_mixture_in(const VnAlgebra& n, int count, Rng& rng) {
  std::vector<double> w;
  std::vector<Channel> parts;
  for (int i = 0; i < count; ++i) {
    w.push_back(1.0 / count);
    parts.push_back(Channel::unitary(random_unitary_in(n, rng)));
  }
  return Channel::mixture(w, parts);
}

// Reset to |0⟩: trace preserving but not unital.
Channel reset_qubit() {
  return Channel({(cmat(2, 2) << 1, 0, 0, 0).finished(), (cmat(2, 2) << 0, 1, 0, 0).finished()});
}

Channel depolarizing(double p) {
  return Channel({std::sqrt(1 - 3 * p / 4) * kI, std::sqrt(p / 4) * kX, std::sqrt(p / 4) * kY, std::sqrt(p / 4) * kZ});
}

cmat ket_density(std::initializer_list<cplx> amps) {
  cvec v(static_cast<Index>(amps.size()));
  Index i = 0;
  for (auto a : amps) v(i++) = a;
  return ket_to_density(cvec(v / v.norm()));
}

}  // namespace

TEST_CASE("channel representations agree") {
  Rng rng(3);
  CHECK_THROWS_AS(Channel({cmat::Identity(2, 2) * 2.0}), NotChannel);
  const VnAlgebra n = rotated({{2, 1}, {1, 2}}, rng);
  const Channel e = Channel::conditional_expectation(n);
  const Channel ec = Channel::complement(n);
  for (int i = 0; i < 5; ++i) {
    const cmat rho = random_density(4, 0, rng);
    CHECK((e.apply(rho) - n.expectation(rho)).norm() < 1e-12);
    CHECK((ec.apply(rho) - complement_apply(n, rho)).norm() < 1e-12);
    CHECK((unvec(cvec(e.superoperator() * vec(rho)), 4) - e.apply(rho)).norm() < 1e-12);
  }
  CHECK((e.superoperator() - n.superoperator()).norm() < 1e-10);
  const Channel back = Channel::from_choi(ec.choi(), ec.in_dim(), ec.out_dim());
  CHECK(choi_distance(back, ec) < 1e-10);
  // Adjoint: tr(x Φ(ρ)) = tr(Φ†(x) ρ).
  const cmat x = random_hermitian(ec.out_dim(), rng);
  const cmat rho = random_density(4, 0, rng);
  CHECK(std::abs((x * ec.apply(rho)).trace() - (ec.adjoint_apply(x) * rho).trace()) < 1e-12);
  const Channel twice = e.then(e);
  CHECK(choi_distance(twice, e) < 1e-10);
  CHECK(static_cast<Index>(twice.kraus().size()) <= 16);
}

TEST_CASE("Petz recovery") {
  Rng rng(8);
  const cmat u = haar_unitary(3, rng);
  const Channel inv = petz_map(Channel::unitary(u), random_density(3, 0, rng));
  CHECK(choi_distance(inv, Channel::unitary(u.adjoint())) < 1e-9);

  for (const auto& shape : std::vector<std::vector<BlockShape>>{{{2, 2}}, {{2, 1}, {1, 2}}, {{1, 2}, {1, 1}}}) {
    const VnAlgebra n = rotated(shape, rng);
    const Index d = n.ambient_dim();
    const Channel ec = Channel::complement(n);
    const cmat flat = cmat::Identity(d, d) / double(d);
    const Channel rec = petz_map(ec, flat);
    CHECK(choi_distance(ec.then(rec), Channel::conditional_expectation(commutant(n))) < 1e-9);
    // The recovery of the recovery is the complement again.
    CHECK(choi_distance(petz_map(rec, ec.apply(flat)), ec) < 1e-9);
    // R ∘ Φ fixes the default state.
    const cmat sigma = random_density(d, 0, rng);
    CHECK((petz_map(ec, sigma).apply(ec.apply(sigma)) - sigma).norm() < 1e-9);
  }
  CHECK_THROWS_AS(petz_map(reset_qubit(), cmat::Identity(2, 2) / 2.0), SingularDefault);
}

TEST_CASE("bimodule channels") {
  Rng rng(21);
  const VnAlgebra n = rotated({{2, 1}, {1, 2}}, rng);
  const VnAlgebra m = full(4);
  CHECK(is_bimodule(Channel::unitary(random_unitary_in(commutant(n), rng)), n, m));
  CHECK(is_bimodule(random_mixture_in(commutant(n), 3, rng), n, m));
  // Conditional expectations onto larger algebras.
  const VnAlgebra k = join(n, VnAlgebra::diagonal_in(n.blocks().alignment));
  REQUIRE(k.contains(n));
  CHECK(is_bimodule(Channel::conditional_expectation(k), n, m));
  CHECK(is_bimodule(Channel::conditional_expectation(n), n, m));
  // Conjugation by X on the diagonal qubit algebra: a = Z, b = 1 breaks it.
  CHECK_FALSE(is_bimodule(Channel::unitary(kX), VnAlgebra::diagonal(2), full(2)));
  CHECK_THROWS_AS(is_bimodule(Channel::identity(2), full(2), triv(2)), NotNested);
  CHECK_THROWS_AS(is_bimodule(Channel::identity(3), full(2), full(2)), ShapeMismatch);

  // Every channel is a bimodule over ℂ1, yet a non-unital one fails to commute with E_ℂ.
  const Channel reset = reset_qubit();
  CHECK(is_bimodule(reset, triv(2), full(2)));
  const cmat pc = triv(2).superoperator();
  CHECK((pc * reset.superoperator() - pc).norm() < 1e-12);
  CHECK((pc * reset.superoperator() - reset.superoperator() * pc).norm() > 0.5);
}

TEST_CASE("bimodule law in the Schrodinger picture") {
  Rng rng(5);
  const VnAlgebra n = rotated({{1, 2}, {1, 1}}, rng);
  const Channel phi = random_mixture_in(commutant(n), 4, rng);
  REQUIRE(is_bimodule(phi, n, full(3)));
  for (int i = 0; i < 20; ++i) {
    const cmat rho = random_density(3, 0, rng);
    const cmat a = random_hermitian_in(n, rng) + cplx(0, 1) * random_hermitian_in(n, rng);
    const cmat c = random_hermitian_in(n, rng) + cplx(0, 1) * random_hermitian_in(n, rng);
    const cmat b = cmat::Random(3, 3);
    const cplx lhs = (c * phi.apply(rho) * a * b).trace();
    const cplx rhs = (phi.apply(cmat(c * rho * a)) * b).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("T-preserving channels") {
  Rng rng(6);
  const VnAlgebra z = VnAlgebra::diagonal(2);
  CHECK(is_t_preserving(Channel::identity(2), z));
  CHECK(is_t_preserving(Channel::unitary(random_unitary_in(commutant(z), rng)), z));
  const Channel dep = depolarizing(0.3);
  CHECK_FALSE(is_t_preserving(dep, z));
  const cmat zero = ket_density({1, 0});
  CHECK((z.expectation(dep.apply(zero)) - z.expectation(zero)).norm() > 0.1);
  // Conjugation by X moves E_Z but is preserving up to the isometry X itself.
  CHECK_FALSE(is_t_preserving(Channel::unitary(kX), z));
  CHECK(is_t_preserving(Channel::unitary(kX), z, IsometryCertificate{kX, z}));
  // An embedding ℂ² → ℂ³ with the matching target.
  cmat v = cmat::Zero(3, 2);
  v(0, 0) = v(2, 1) = 1;
  const VnAlgebra target = VnAlgebra::diagonal(3);
  CHECK(is_t_preserving(Channel({v}), z, IsometryCertificate{v, target}));
  CHECK_THROWS_AS(is_t_preserving(Channel({v}), z), ShapeMismatch);
}

TEST_CASE("validated operations") {
  Rng rng(13);
  // Two qubits: S = A ⊗ 1, T = 1 ⊗ B.
  const VnAlgebra s = tensor(full(2), triv(2));
  const VnAlgebra t = tensor(triv(2), full(2));
  const Square sq = classify_square(s, t, full(4));
  REQUIRE(sq.commuting);
  const cmat rho = random_density(4, 0, rng);

  SUBCASE("unitary in S ∩ T' acting on the state") {
    const cmat u = random_unitary_in(intersect(s, commutant(t)), rng);
    const auto op = build_operation({Party::S, {step::HeisenbergUnitary{u}}}, sq);
    const auto states = op.trace(rho);
    REQUIRE(states.size() == 2);
    CHECK(configuration_cmi(states[1]) == doctest::Approx(configuration_cmi(states[0])));
  }
  SUBCASE("shrinking S keeps the intersection") {
    const VnAlgebra smaller = tensor(VnAlgebra::diagonal(2), triv(2));
    const auto op = build_operation({Party::S, {step::ShrinkS{smaller}}}, sq);
    const auto states = op.trace(rho);
    CHECK(configuration_cmi(states[1]) <= configuration_cmi(states[0]) + 1e-9);
    CHECK_THROWS_AS(build_operation({Party::S, {step::ShrinkS{t}}}, sq), StepRejected);
  }
  SUBCASE("a unitary that moves the T marginal is rejected") {
    const cmat u = tensor(kI, kX);
    try {
      build_operation({Party::S, {step::ApplyChannel{Channel::unitary(u), {}}}}, sq);
      FAIL("expected rejection");
    } catch (const StepRejected& e) {
      CHECK(e.step() == 0);
    }
  }
  SUBCASE("extend, local unitary, restrict with the ancilla dropped") {
    // The ancilla is swapped with nothing: a unitary on A ⊗ C, then C is traced out.
    const cmat local = tensor(std::vector<cmat>{haar_unitary(2, rng), kI, cmat::Identity(2, 2)});
    OperationPlan plan{Party::S, {step::Extend{2}, step::Rename{local}, step::ShrinkS{tensor(s, triv(2))}, step::Restrict{2}}};
    const auto op = build_operation(plan, sq);
    const auto states = op.trace(rho);
    for (std::size_t i = 1; i < states.size(); ++i)
      CHECK(configuration_cmi(states[i]) <= configuration_cmi(states[i - 1]) + 1e-9);
    CHECK(states.back().rho.rows() == 4);
  }
  SUBCASE("T-operations exchange the roles") {
    const cmat u = random_unitary_in(intersect(t, commutant(s)), rng);
    const auto op = build_operation({Party::T, {step::HeisenbergUnitary{u}}}, sq);
    CHECK(same_algebra(op.stages().back().first, s));
    CHECK_THROWS_AS(build_operation({Party::S, {step::HeisenbergUnitary{u}}}, sq), StepRejected);
  }
}

TEST_CASE("restrict drops a completely mixed ancilla") {
  Rng rng(17);
  const VnAlgebra s = tensor(std::vector<VnAlgebra>{full(2), triv(2), triv(2)});
  const VnAlgebra t = tensor(std::vector<VnAlgebra>{triv(2), full(2), triv(2)});
  const Square sq = classify_square(s, t, full(8));
  const auto op = build_operation({Party::S, {step::Restrict{2}}}, sq);
  const cmat rho = random_density(8, 0, rng);
  const auto out = op.apply(rho);
  CHECK(out.rho.rows() == 4);
  CHECK(configuration_cmi(out) == doctest::Approx(configuration_cmi({s, t, rho})));
  const Square wide = classify_square(tensor(full(2), full(4)), tensor(triv(2), full(4)), full(8));
  CHECK_THROWS_AS(build_operation({Party::S, {step::Restrict{2}}}, wide), StepRejected);
}

TEST_CASE("random validated sequences never increase the CMI") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const cmat g = haar_unitary(4, rng);
    const Square sq = classify_square(conjugate(tensor(full(2), triv(2)), g), conjugate(tensor(triv(2), full(2)), g), full(4));
    OperationPlan plan{trial % 2 ? Party::T : Party::S, {}};
    const VnAlgebra& mine = trial % 2 ? sq.second : sq.first;
    const VnAlgebra& other = trial % 2 ? sq.first : sq.second;
    plan.steps.push_back(step::ApplyChannel{random_mixture_in(intersect(commutant(mine), commutant(other)), 2, rng), {}});
    plan.steps.push_back(step::HeisenbergUnitary{random_unitary_in(intersect(mine, commutant(other)), rng)});
    plan.steps.push_back(step::Restrict{});
    const auto states = build_operation(plan, sq).trace(random_density(4, 0, rng));
    for (std::size_t i = 1; i < states.size(); ++i)
      CHECK(configuration_cmi(states[i]) <= configuration_cmi(states[i - 1]) + 1e-9);
  }
}

TEST_CASE("covariant averaging on the EPR example") {
  // |↑Y↑Y⟩ with S = ⟨Z_A, Z_B⟩, T = ⟨X_A, X_B⟩ replaced by ⟨X_A, Z_A Z_B⟩ and ⟨X_A X_B, Z_B⟩.
  const cmat up = ket_density({1, cplx(0, 1)});
  const cmat rho = tensor(up, up);
  const VnAlgebra s = generate(4, {tensor(kZ, kI), tensor(kI, kZ)});
  const VnAlgebra t = generate(4, {tensor(kX, kI), tensor(kI, kX)});
  const VnAlgebra new_s = generate(4, {tensor(kX, kI), tensor(kZ, kZ)});
  const VnAlgebra new_t = generate(4, {tensor(kX, kX), tensor(kI, kZ)});
  const Square sq = classify_square(s, t, full(4));
  REQUIRE(sq.commuting);
  const std::vector<WeightedUnitary> group{
      {0.25, cmat::Identity(4, 4)}, {0.25, tensor(kY, kI)}, {0.25, tensor(kI, kY)}, {0.25, tensor(kY, kY)}};
  const auto out = covariant_average(group, sq, rho, new_s, new_t);
  CHECK((out.rho - rho).norm() < 1e-12);
  CHECK(out.square.commuting);
  CHECK(same_algebra(out.invariant, generate(4, {tensor(kY, kI), tensor(kI, kY)})));
  CHECK(gen_cmi(new_s, new_t, full(4), out.rho).value_bits >= gen_cmi(s, t, full(4), rho).value_bits - 1e-9);

  const auto same = covariant_average({{1.0, cmat::Identity(4, 4)}}, sq, rho, s, t);
  CHECK((same.rho - rho).norm() < 1e-14);
  // With R = everything, S cannot be replaced by a different algebra.
  CHECK_THROWS_AS(covariant_average({{1.0, cmat::Identity(4, 4)}}, sq, rho, new_s, new_t), ConstraintViolated);
  // A Hadamard on A exchanges Z_A and X_A, so it does not commute with E_S.
  const cmat hadamard = (kX + kZ) / std::sqrt(2.0);
  try {
    covariant_average({{0.5, cmat::Identity(4, 4)}, {0.5, tensor(hadamard, kI)}}, sq, rho, s, t);
    FAIL("expected NotCovariant");
  } catch (const NotCovariant& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("picture swaps") {
  Rng rng(31);
  const VnAlgebra s = tensor(VnAlgebra::diagonal(2), triv(2));
  const VnAlgebra t = tensor(triv(2), full(2));
  const Square sq = classify_square(s, t, full(4));
  const cmat rho = random_density(4, 0, rng);

  const auto same = picture_swap(sq, full(4), s, rho);
  CHECK((same.rho - rho).norm() < 1e-14);
  CHECK(same.after_bits == doctest::Approx(same.before_bits));

  // Enlarge S to the whole first qubit while dephasing it.
  const VnAlgebra r = tensor(VnAlgebra::diagonal(2), full(2));
  const auto swapped = picture_swap(sq, r, tensor(full(2), triv(2)), rho);
  CHECK(swapped.after_bits <= swapped.before_bits + 1e-9);
  CHECK((swapped.rho - r.expectation(rho)).norm() < 1e-14);

  // A rotated S~ does not commute with E_S.
  const VnAlgebra tilted = tensor(VnAlgebra::diagonal_in(haar_unitary(2, rng)), triv(2));
  CHECK_THROWS_AS(picture_swap(sq, r, tilted, rho), ConstraintViolated);
  CHECK_THROWS_AS(picture_swap(sq, s, s, rho), ConstraintViolated);
}
