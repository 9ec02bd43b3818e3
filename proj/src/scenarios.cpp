#include "vnlab/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "mub.hpp"
#include "vnlab/channels.hpp"
#include "vnlab/measures.hpp"

namespace vnlab {

namespace {

constexpr Index kMaxMubDim = 13;
constexpr Index kMaxCheckedQubits = 6;

const cmat& letter_matrix(PauliWord::Letter l) {
  static const std::array<cmat, 4> m = {
      cmat::Identity(2, 2),
      (cmat(2, 2) << 0, 1, 1, 0).finished(),
      (cmat(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
      (cmat(2, 2) << 1, 0, 0, -1).finished(),
  };
  return m[l];
}

// a·b = i^phase · c for single letters.
std::pair<PauliWord::Letter, int> multiply_letters(PauliWord::Letter a, PauliWord::Letter b) {
  if (a == PauliWord::I) return {b, 0};
  if (b == PauliWord::I) return {a, 0};
  if (a == b) return {PauliWord::I, 0};
  const auto c = static_cast<PauliWord::Letter>(6 - a - b);
  // XY = iZ, YZ = iX, ZX = iY; reversed order gives −i.
  const bool cyclic = (b - a + 3) % 3 == 1;
  return {c, cyclic ? 1 : 3};
}

bool letters_commute(PauliWord::Letter a, PauliWord::Letter b) {
  return a == PauliWord::I || b == PauliWord::I || a == b;
}

void require_gate(const ControlledGate& g, Index qubits) {
  if (g.control_qubit == g.target_qubit) throw MalformedGate("control and target share a qubit");
  if (g.control == PauliWord::I || g.target == PauliWord::I) throw MalformedGate("gate letters must be X, Y or Z");
  if (g.control_qubit < 0 || g.target_qubit < 0 || g.control_qubit >= qubits || g.target_qubit >= qubits)
    throw MalformedGate("gate qubit out of range");
}

std::vector<std::string> word_strings(const std::vector<PauliWord>& words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(w.str());
  return out;
}

// Ket of the single column of a rank-one density.
cvec leading_vector(const cmat& rho) { return eig_hermitian(rho).vectors.col(0); }

}  // namespace

MubFamily mub_family(Index p) {
  if (!detail::is_prime(p)) throw NotPrime("mub_family: dimension " + std::to_string(p) + " is not prime");
  if (p > kMaxMubDim) throw DomainError("mub_family: dimension above 13");
  MubFamily f;
  f.dim = p;
  for (Index b = 0; b <= p; ++b) f.bases.push_back(detail::mub_basis(p, b));
  for (std::size_t a = 0; a < f.bases.size(); ++a)
    for (std::size_t b = a + 1; b < f.bases.size(); ++b) {
      const double worst = ((f.bases[a].adjoint() * f.bases[b]).cwiseAbs2().array() - 1.0 / double(p)).abs().maxCoeff();
      if (worst > 1e-10) throw ToleranceFailure("mub_family: bases are not unbiased");
    }
  return f;
}

PauliWord::PauliWord(std::vector<Letter> letters, int phase) : letters_(std::move(letters)), phase_(((phase % 4) + 4) % 4) {}

PauliWord PauliWord::identity(Index qubits) { return PauliWord(std::vector<Letter>(static_cast<std::size_t>(qubits), I)); }

PauliWord PauliWord::single(Index qubits, Index qubit, Letter letter) {
  PauliWord w = identity(qubits);
  w.letters_.at(static_cast<std::size_t>(qubit)) = letter;
  return w;
}

PauliWord PauliWord::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  std::vector<Letter> letters;
  for (; pos < text.size(); ++pos) {
    switch (text[pos]) {
      case 'I': letters.push_back(I); break;
      case 'X': letters.push_back(X); break;
      case 'Y': letters.push_back(Y); break;
      case 'Z': letters.push_back(Z); break;
      default: throw DomainError("malformed Pauli word '" + std::string(text) + "'");
    }
  }
  if (letters.empty()) throw DomainError("empty Pauli word");
  return PauliWord(std::move(letters), phase);
}

std::string PauliWord::str() const {
  static constexpr std::array<const char*, 4> prefix = {"+", "+i", "-", "-i"};
  std::string s = prefix[static_cast<std::size_t>(phase_)];
  for (Letter l : letters_) s += "IXYZ"[l];
  return s;
}

cmat PauliWord::matrix() const {
  std::vector<cmat> factors;
  for (Letter l : letters_) factors.push_back(letter_matrix(l));
  static constexpr std::array<cplx, 4> powers = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return powers[static_cast<std::size_t>(phase_)] * tensor(factors);
}

bool PauliWord::commutes_with(const PauliWord& other) const {
  if (other.qubits() != qubits()) throw ShapeMismatch("Pauli words act on different qubit counts");
  int anti = 0;
  for (Index q = 0; q < qubits(); ++q) anti += letters_commute(at(q), other.at(q)) ? 0 : 1;
  return anti % 2 == 0;
}

PauliWord operator*(const PauliWord& a, const PauliWord& b) {
  if (a.qubits() != b.qubits()) throw ShapeMismatch("Pauli words act on different qubit counts");
  std::vector<PauliWord::Letter> letters(static_cast<std::size_t>(a.qubits()));
  int phase = a.phase_ + b.phase_;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const auto [c, ph] = multiply_letters(a.letters_[q], b.letters_[q]);
    letters[q] = c;
    phase += ph;
  }
  return PauliWord(std::move(letters), phase);
}

cmat gate_matrix(const ControlledGate& gate, Index qubits) {
  require_gate(gate, qubits);
  const cmat o = PauliWord::single(qubits, gate.control_qubit, gate.control).matrix();
  const cmat v = PauliWord::single(qubits, gate.target_qubit, gate.target).matrix();
  const Index d = o.rows();
  const cmat one = cmat::Identity(d, d);
  return 0.5 * (one + o) + 0.5 * (one - o) * v;
}

VnAlgebra word_algebra(const std::vector<PauliWord>& words, Index qubits) {
  std::vector<cmat> gens;
  for (const auto& w : words) {
    if (w.qubits() != qubits) throw ShapeMismatch("word_algebra: word on the wrong number of qubits");
    gens.push_back(w.matrix());
  }
  return generate(Index{1} << qubits, gens);
}

PauliWord conjugate_word(const PauliWord& word, const ControlledGate& gate) {
  const Index n = word.qubits();
  require_gate(gate, n);
  const auto c = word.at(gate.control_qubit);
  const auto t = word.at(gate.target_qubit);
  std::vector<PauliWord::Letter> letters(static_cast<std::size_t>(n));
  for (Index q = 0; q < n; ++q) letters[static_cast<std::size_t>(q)] = word.at(q);
  letters[static_cast<std::size_t>(gate.control_qubit)] = PauliWord::I;
  letters[static_cast<std::size_t>(gate.target_qubit)] = PauliWord::I;
  PauliWord rest(std::move(letters), word.phase());

  PauliWord control_image = PauliWord::single(n, gate.control_qubit, c);
  if (!letters_commute(c, gate.control))
    control_image = control_image * PauliWord::single(n, gate.target_qubit, gate.target);
  PauliWord target_image = PauliWord::single(n, gate.target_qubit, t);
  if (!letters_commute(t, gate.target))
    target_image = PauliWord::single(n, gate.control_qubit, gate.control) * target_image;
  const PauliWord image = rest * control_image * target_image;

  if (n <= kMaxCheckedQubits) {
    const cmat g = gate_matrix(gate, n);
    if ((g * word.matrix() * g - image.matrix()).norm() > 1e-10)
      throw ToleranceFailure("conjugate_word: symbolic rule disagrees with matrix conjugation");
  }
  return image;
}

PauliFrame pauli_frame_step(const PauliFrame& frame, const ControlledGate& gate) {
  PauliFrame out{frame.qubits, {}, {}};
  for (const auto& w : frame.first) out.first.push_back(conjugate_word(w, gate));
  for (const auto& w : frame.second) out.second.push_back(conjugate_word(w, gate));
  return out;
}

bool equal_up_to_phase(const cvec& psi, const cvec& chi) {
  return psi.size() == chi.size() && std::abs(psi.dot(chi)) >= 1 - kPhaseTol;
}

bool Transcript::pass() const {
  for (const auto& s : steps)
    if (!s.pass) return false;
  return !steps.empty();
}

Transcript epr_ucr_demo(std::uint64_t seed) {
  Transcript tr{"epr_ucr", seed, {}};
  constexpr Index n = 2;
  auto words = [](std::initializer_list<const char*> list) {
    std::vector<PauliWord> out;
    for (const char* s : list) out.push_back(PauliWord::parse(s));
    return out;
  };
  const PauliFrame initial{n, words({"ZI", "IZ"}), words({"XI", "IX"})};
  const PauliFrame averaged{n, words({"XI", "ZZ"}), words({"XX", "IZ"})};
  const ControlledGate gate{1, PauliWord::Z, 0, PauliWord::X};

  auto record = [&](std::string name, const PauliFrame& f, const cmat& rho, bool pass, std::string detail) {
    TranscriptStep step{std::move(name), word_strings(f.first), word_strings(f.second), rho, std::nullopt, pass,
                        std::move(detail)};
    if (pass) {
      const auto est = isq_estimate(word_algebra(f.first, n), word_algebra(f.second, n), rho);
      step.value_bits = est.value_bits;
      if (est.exactness != Exactness::exact_pure_path || std::abs(est.value_bits - 1.0) > 1e-9) {
        step.pass = false;
        step.detail += "; squashed value is not one bit";
      }
    }
    tr.steps.push_back(std::move(step));
    return tr.steps.back().pass;
  };

  cvec up_y(2);
  up_y << 1 / std::sqrt(2.0), cplx(0, 1 / std::sqrt(2.0));
  const cmat rho0 = ket_to_density(cvec(tensor(up_y, up_y)));
  if (!record("initial", initial, rho0, true, "two Y eigenstates")) return tr;

  const cmat ya = PauliWord::parse("YI").matrix(), yb = PauliWord::parse("IY").matrix();
  const std::vector<WeightedUnitary> twirl = {
      {0.25, cmat::Identity(4, 4)}, {0.25, ya}, {0.25, yb}, {0.25, ya * yb}};
  auto average = [&](const PauliFrame& from, const PauliFrame& to, const cmat& rho, const char* name) {
    const VnAlgebra s = word_algebra(from.first, n), t = word_algebra(from.second, n);
    try {
      const auto out = covariant_average(twirl, classify_square(s, t, join(s, t)), rho, word_algebra(to.first, n),
                                         word_algebra(to.second, n));
      const bool invariant = (out.rho - rho).norm() <= 1e-9;
      record(name, to, out.rho, invariant, invariant ? "state fixed by the twirl; constraints hold" : "state moved");
      return out.rho;
    } catch (const Error& e) {
      record(name, to, rho, false, e.what());
      return rho;
    }
  };
  const cmat rho1 = average(initial, averaged, rho0, "covariant_average");
  if (!tr.pass()) return tr;

  const cmat g = gate_matrix(gate, n);
  const PauliFrame local = pauli_frame_step(averaged, gate);
  const cmat rho2 = g * rho1 * g.adjoint();
  cvec expected(4);
  const double h = 0.5;
  // (|0−⟩ + i|1+⟩)/√2
  expected << h, -h, cplx(0, h), cplx(0, h);
  const bool local_algebras =
      same_algebra(word_algebra(local.first, n), tensor(VnAlgebra::full(2), VnAlgebra::trivial(2))) &&
      same_algebra(word_algebra(local.second, n), tensor(VnAlgebra::trivial(2), VnAlgebra::full(2)));
  const bool state_ok = equal_up_to_phase(leading_vector(rho2), expected);
  std::string detail = "C_{Z_B->X_A}";
  if (!local_algebras) detail += "; algebras are not the local pair";
  if (!state_ok) detail += "; state differs from (|0-> + i|1+>)/sqrt2";
  if (!record("controlled_gate", local, rho2, local_algebras && state_ok, detail)) return tr;

  // Back: the gate is an involution, then the twirl maps the frame back.
  const PauliFrame undone = pauli_frame_step(local, gate);
  const cmat rho3 = g * rho2 * g.adjoint();
  const bool frame_back = word_strings(undone.first) == word_strings(averaged.first) &&
                          word_strings(undone.second) == word_strings(averaged.second);
  if (!record("inverse_gate", undone, rho3, frame_back && (rho3 - rho1).norm() <= 1e-9, "C_{Z_B->X_A} again"))
    return tr;
  const cmat rho4 = average(undone, initial, rho3, "inverse_average");
  if (!tr.pass()) return tr;
  const bool round_trip = (rho4 - rho0).norm() <= 1e-9;
  tr.steps.push_back({"round_trip", word_strings(initial.first), word_strings(initial.second), rho4, std::nullopt,
                      round_trip, round_trip ? "initial configuration recovered" : "round trip moved the state"});
  if (!round_trip) return tr;

  // The gate is self-inverse on an arbitrary input drawn from the seed.
  const cmat probe = sample(SampleKind::density, 4, seed);
  const bool involution = (g * g * probe * g.adjoint() * g.adjoint() - probe).norm() <= 1e-12;
  std::ostringstream note;
  note << "random probe " << state_hash(probe);
  tr.steps.push_back({"involution_check", {}, {}, probe, std::nullopt, involution, note.str()});
  return tr;
}

MonogamyTable monogamy_table(Index p, Index state_basis) {
  const MubFamily family = mub_family(p);
  if (state_basis < 0 || state_basis > p) throw DomainError("monogamy_table: no such basis");
  MonogamyTable out;
  out.dim = p;
  out.state_basis = state_basis;
  const cmat psi = ket_to_density(cvec(family.bases[static_cast<std::size_t>(state_basis)].col(0)));
  std::vector<VnAlgebra> algebras;
  std::vector<Index> remaining;
  for (Index b = 0; b <= p; ++b) {
    algebras.push_back(VnAlgebra::diagonal_in(family.bases[static_cast<std::size_t>(b)]));
    if (b != state_basis) remaining.push_back(b);
  }
  for (Index i : remaining)
    for (Index j : remaining) {
      if (i == j) continue;
      const auto est = isq_estimate(algebras[static_cast<std::size_t>(i)], algebras[static_cast<std::size_t>(j)], psi);
      out.entries.push_back({i, j, est.value_bits});
      out.ordered_sum_bits += est.value_bits;
      if (i < j) out.unordered_sum_bits += est.value_bits;
    }
  out.ceiling_bits = 0.5 * std::log2(double(p));
  out.closed_form_bits = double(p + 1) * out.ceiling_bits;
  out.exceeds_ceiling = out.ordered_sum_bits > out.ceiling_bits + 1e-12;

  if (p <= 5) {
    const auto& a = algebras[static_cast<std::size_t>(remaining[0])];
    const auto& b = algebras[static_cast<std::size_t>(remaining[1])];
    out.additive_bits = 2 * out.entries.front().value_bits;
    out.product_bits = isq_estimate(tensor(a, a), tensor(b, b), tensor(psi, psi)).value_bits;
    out.additive = std::abs(*out.product_bits - out.additive_bits) <= 1e-7;
  }
  return out;
}

}  // namespace vnlab
