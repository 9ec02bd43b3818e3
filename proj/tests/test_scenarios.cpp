#include "doctest.h"

#include <cmath>

#include "vnlab/scenarios.hpp"

using namespace vnlab;

namespace {

double worst_bias(const MubFamily& f) {
  double worst = 0;
  const double target = 1.0 / double(f.dim);
  for (std::size_t a = 0; a < f.bases.size(); ++a)
    for (std::size_t b = a + 1; b < f.bases.size(); ++b)
      worst = std::max(worst, ((f.bases[a].adjoint() * f.bases[b]).cwiseAbs2().array() - target).abs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("mutually unbiased families") {
  const auto qubit = mub_family(2);
  REQUIRE(qubit.bases.size() == 3);
  const cmat x = PauliWord::parse("X").matrix(), y = PauliWord::parse("Y").matrix();
  // Columns are eigenvectors of X and Y respectively.
  for (Index j = 0; j < 2; ++j) {
    const cvec vx = qubit.bases[1].col(j), vy = qubit.bases[2].col(j);
    CHECK((x * vx - vx.dot(x * vx) * vx).norm() < 1e-12);
    CHECK((y * vy - vy.dot(y * vy) * vy).norm() < 1e-12);
  }
  for (Index p : {3, 5, 7, 13}) {
    const auto f = mub_family(p);
    CHECK(f.bases.size() == static_cast<std::size_t>(p + 1));
    CHECK(worst_bias(f) < 1e-10);
    for (const auto& u : f.bases) CHECK((u.adjoint() * u - cmat::Identity(p, p)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(mub_family(4), NotPrime);
  CHECK_THROWS_AS(mub_family(1), NotPrime);
  CHECK_THROWS_AS(mub_family(17), DomainError);
}

TEST_CASE("Pauli words") {
  const auto w = PauliWord::parse("-iXZ");
  CHECK(w.str() == "-iXZ");
  CHECK(w.phase() == 3);
  CHECK((PauliWord::parse("XI") * PauliWord::parse("YI")).str() == "+iZI");
  CHECK((PauliWord::parse("YI") * PauliWord::parse("XI")).str() == "-iZI");
  CHECK(PauliWord::parse("XX").commutes_with(PauliWord::parse("ZZ")));
  CHECK_FALSE(PauliWord::parse("XI").commutes_with(PauliWord::parse("ZZ")));
  CHECK_THROWS_AS(PauliWord::parse("XQ"), DomainError);
  CHECK_THROWS_AS(PauliWord::parse("-"), DomainError);

  Rng rng(4);
  std::uniform_int_distribution<int> letter(0, 3), phase(0, 3);
  for (int k = 0; k < 50; ++k) {
    std::vector<PauliWord::Letter> la, lb;
    for (int q = 0; q < 3; ++q) {
      la.push_back(static_cast<PauliWord::Letter>(letter(rng)));
      lb.push_back(static_cast<PauliWord::Letter>(letter(rng)));
    }
    const PauliWord a(la, phase(rng)), b(lb, phase(rng));
    CHECK(((a * b).matrix() - a.matrix() * b.matrix()).norm() < 1e-12);
    const cmat comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    CHECK(a.commutes_with(b) == (comm.norm() < 1e-12));
  }
}

TEST_CASE("controlled gate rewrites") {
  const ControlledGate cz_x{0, PauliWord::Z, 1, PauliWord::X};
  CHECK(conjugate_word(PauliWord::parse("IZ"), cz_x).str() == "+ZZ");
  CHECK(conjugate_word(PauliWord::parse("ZI"), cz_x).str() == "+ZI");
  CHECK(conjugate_word(PauliWord::parse("XI"), cz_x).str() == "+XX");
  CHECK(conjugate_word(PauliWord::parse("IX"), cz_x).str() == "+IX");
  // The controlled-not.
  cmat cnot = cmat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  CHECK((gate_matrix(cz_x, 2) - cnot).norm() < 1e-12);

  CHECK_THROWS_AS(conjugate_word(PauliWord::parse("XI"), ControlledGate{0, PauliWord::Z, 0, PauliWord::X}),
                  MalformedGate);
  CHECK_THROWS_AS(conjugate_word(PauliWord::parse("XI"), ControlledGate{0, PauliWord::I, 1, PauliWord::X}),
                  MalformedGate);
  CHECK_THROWS_AS(conjugate_word(PauliWord::parse("XI"), ControlledGate{0, PauliWord::Z, 2, PauliWord::X}),
                  MalformedGate);

  // Symbolic images agree with explicit conjugation for every gate and word.
  Rng rng(8);
  std::uniform_int_distribution<int> letter(0, 3), pauli(1, 3), qubit(0, 2);
  for (int k = 0; k < 200; ++k) {
    ControlledGate g{qubit(rng), static_cast<PauliWord::Letter>(pauli(rng)), qubit(rng),
                     static_cast<PauliWord::Letter>(pauli(rng))};
    if (g.control_qubit == g.target_qubit) continue;
    std::vector<PauliWord::Letter> letters;
    for (int q = 0; q < 3; ++q) letters.push_back(static_cast<PauliWord::Letter>(letter(rng)));
    const PauliWord w(letters, k);
    const cmat c = gate_matrix(g, 3);
    CHECK((conjugate_word(w, g).matrix() - c * w.matrix() * c.adjoint()).norm() < 1e-10);
  }
}

TEST_CASE("Pauli frames track algebras through a gate") {
  const PauliFrame frame{2, {PauliWord::parse("XI"), PauliWord::parse("ZZ")},
                         {PauliWord::parse("XX"), PauliWord::parse("IZ")}};
  const PauliFrame next = pauli_frame_step(frame, ControlledGate{1, PauliWord::Z, 0, PauliWord::X});
  CHECK(next.first[0].str() == "+XI");
  CHECK(next.first[1].str() == "+ZI");
  CHECK(next.second[0].str() == "+IX");
  CHECK(next.second[1].str() == "+IZ");
  CHECK(same_algebra(word_algebra(next.first, 2), tensor(VnAlgebra::full(2), VnAlgebra::trivial(2))));
}

TEST_CASE("entanglement and uncertainty conversion") {
  const Transcript t = epr_ucr_demo(3);
  for (const auto& s : t.steps) {
    CAPTURE(s.name);
    CAPTURE(s.detail);
    CHECK(s.pass);
  }
  REQUIRE(t.pass());
  REQUIRE(t.steps.size() == 7);
  CHECK(t.steps[0].value_bits.value() == doctest::Approx(1.0));
  CHECK(t.steps[2].name == "controlled_gate");
  CHECK(t.steps[2].value_bits.value() == doctest::Approx(1.0));
  CHECK(t.steps[2].first_words == std::vector<std::string>{"+XI", "+ZI"});
  CHECK(t.steps[1].first_words == std::vector<std::string>{"+XI", "+ZZ"});

  // Deterministic in the seed.
  const Transcript again = epr_ucr_demo(3);
  for (std::size_t k = 0; k < t.steps.size(); ++k) CHECK(t.steps[k].state == again.steps[k].state);

  cvec a(2), b(2);
  a << 1, 0;
  b << cplx(0, 1), 0;
  CHECK(equal_up_to_phase(a, b));
  b << 0, 1;
  CHECK_FALSE(equal_up_to_phase(a, b));
}

TEST_CASE("monogamy table") {
  const auto qubit = monogamy_table(2, 2);
  REQUIRE(qubit.entries.size() == 2);
  for (const auto& e : qubit.entries) CHECK(e.value_bits == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qubit.ordered_sum_bits == doctest::Approx(1.0));
  CHECK(qubit.unordered_sum_bits == doctest::Approx(0.5));
  CHECK(qubit.closed_form_bits == doctest::Approx(1.5));
  CHECK(qubit.exceeds_ceiling);
  REQUIRE(qubit.product_bits.has_value());
  CHECK(qubit.additive);
  CHECK(*qubit.product_bits == doctest::Approx(1.0).epsilon(1e-9));

  const auto qutrit = monogamy_table(3, 0);
  CHECK(qutrit.entries.size() == 6);
  for (const auto& e : qutrit.entries) CHECK(e.value_bits == doctest::Approx(std::log2(3.0) / 2).epsilon(1e-9));
  CHECK(qutrit.additive);

  CHECK_THROWS_AS(monogamy_table(6, 0), NotPrime);
  CHECK_THROWS_AS(monogamy_table(3, 4), DomainError);
}
