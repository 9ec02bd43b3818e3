#include "vnlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace vnlab::io {

namespace {

using rmat = Eigen::MatrixXd;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long long to_int(const std::string& s, const std::string& where) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DomainError(where + ": '" + s + "' is not an integer");
  return v;
}

Index to_dim(const std::string& s, const std::string& where) {
  const long long v = to_int(s, where);
  if (v < 1 || v > 4096) throw DomainError(where + ": dimension out of range");
  return static_cast<Index>(v);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// name:arg:arg
std::vector<std::string> fields(const std::string& factor, std::size_t min_count, std::size_t max_count,
                                const std::string& where) {
  auto f = split(factor, ':');
  if (f.size() < min_count || f.size() > max_count) throw DomainError(where + ": malformed factor '" + factor + "'");
  return f;
}

cmat mub_member(const std::vector<std::string>& f, const std::string& where) {
  const Index p = to_dim(f[1], where);
  const long long i = to_int(f[2], where);
  const MubFamily fam = mub_family(p);
  if (i < 0 || i > p) throw DomainError(where + ": basis index out of range");
  return fam.bases[static_cast<std::size_t>(i)];
}

VnAlgebra algebra_factor(const std::string& factor) {
  const std::string where = "algebra spec";
  if (!factor.empty() && factor.front() == '@') {
    const json j = read_json_file(factor.substr(1));
    require_schema(j, "algebra", factor);
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw DomainError(factor + ": missing integer 'dim'");
    const Index d = j["dim"].get<Index>();
    if (d < 1) throw DomainError(factor + ": dimension must be positive");
    if (!j.contains("generators") || !j["generators"].is_array()) throw DomainError(factor + ": missing 'generators'");
    std::vector<cmat> gens;
    for (const auto& g : j["generators"]) {
      cmat m = matrix_from_json(g, factor);
      if (m.rows() != d || m.cols() != d) throw ShapeMismatch(factor + ": generator has the wrong size");
      gens.push_back(std::move(m));
    }
    return generate(d, gens);
  }
  const auto f = split(factor, ':');
  const std::string& name = f.empty() ? factor : f[0];
  if (name == "full" || name == "trivial" || name == "diag") {
    const Index d = to_dim(fields(factor, 2, 2, where)[1], where);
    return name == "full" ? VnAlgebra::full(d) : name == "trivial" ? VnAlgebra::trivial(d) : VnAlgebra::diagonal(d);
  }
  if (name == "pauli") {
    const auto g = fields(factor, 2, 2, where)[1];
    if (g != "X" && g != "Y" && g != "Z") throw DomainError(where + ": pauli takes X, Y or Z");
    return generate(2, {PauliWord::parse(g).matrix()});
  }
  if (name == "words") {
    std::vector<PauliWord> words;
    for (const auto& w : split(fields(factor, 2, 2, where)[1], ',')) words.push_back(PauliWord::parse(w));
    if (words.empty()) throw DomainError(where + ": no words");
    const Index n = words.front().qubits();
    return word_algebra(words, n);
  }
  if (name == "mub") return VnAlgebra::diagonal_in(mub_member(fields(factor, 3, 3, where), where));
  throw DomainError(where + ": unknown factor '" + factor + "'");
}

cmat ket(std::initializer_list<cplx> amps) {
  cvec v(static_cast<Index>(amps.size()));
  Index i = 0;
  for (cplx a : amps) v(i++) = a;
  return ket_to_density(cvec(v.normalized()));
}

cmat state_factor(const std::string& factor) {
  const std::string where = "state spec";
  if (!factor.empty() && factor.front() == '@') {
    const json j = read_json_file(factor.substr(1));
    require_schema(j, "state", factor);
    cmat rho;
    if (j.contains("ket")) {
      const cmat v = matrix_from_json(j["ket"], factor);
      if (v.cols() != 1 || v.norm() == 0) throw DomainError(factor + ": 'ket' must be a nonzero vector");
      rho = ket_to_density(cvec(v.col(0).normalized()));
    } else if (j.contains("matrix")) {
      rho = matrix_from_json(j["matrix"], factor);
    } else {
      throw DomainError(factor + ": needs 'ket' or 'matrix'");
    }
    require_density(rho, factor.c_str());
    return rho;
  }
  const auto f = split(factor, ':');
  const std::string& name = f.empty() ? factor : f[0];
  const double r = 1 / std::sqrt(2.0);
  if (name == "up_y" && f.size() == 1) return ket({r, cplx(0, r)});
  if (name == "bell" && f.size() == 1) return ket({r, 0, 0, r});
  if (name == "ghz" && f.size() == 1) return ket({r, 0, 0, 0, 0, 0, 0, r});
  if (name == "classical" && f.size() == 1) {
    cmat m = cmat::Zero(4, 4);
    m(0, 0) = m(3, 3) = 0.5;
    return m;
  }
  if (name == "mixed") {
    const Index d = to_dim(fields(factor, 2, 2, where)[1], where);
    return cmat::Identity(d, d) / double(d);
  }
  if (name == "basis") {
    const auto g = fields(factor, 3, 3, where);
    const Index d = to_dim(g[1], where);
    const long long k = to_int(g[2], where);
    if (k < 0 || k >= d) throw DomainError(where + ": basis index out of range");
    cmat m = cmat::Zero(d, d);
    m(k, k) = 1;
    return m;
  }
  if (name == "pure") {
    const auto g = fields(factor, 3, 3, where);
    return sample(SampleKind::pure, to_dim(g[1], where), static_cast<std::uint64_t>(to_int(g[2], where)));
  }
  if (name == "random") {
    const auto g = fields(factor, 3, 4, where);
    const Index d = to_dim(g[1], where);
    const Index rank = g.size() == 4 ? to_dim(g[3], where) : 0;
    if (rank > d) throw DomainError(where + ": rank exceeds the dimension");
    return sample(SampleKind::density, d, static_cast<std::uint64_t>(to_int(g[2], where)), rank);
  }
  throw DomainError(where + ": unknown factor '" + factor + "'");
}

template <class T, class F>
T tensor_spec(const std::string& spec, F&& factor, const char* what) {
  if (spec.empty()) throw DomainError(std::string("empty ") + what + " spec");
  std::vector<T> parts;
  for (const auto& s : split(spec, '*')) {
    if (s.empty()) throw DomainError(std::string("empty factor in ") + what + " spec '" + spec + "'");
    parts.push_back(factor(s));
  }
  T out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i]);
  return out;
}

}  // namespace

VnAlgebra parse_algebra(const std::string& spec) { return tensor_spec<VnAlgebra>(spec, algebra_factor, "algebra"); }

cmat parse_state(const std::string& spec) {
  cmat rho = tensor_spec<cmat>(spec, state_factor, "state");
  require_density(rho, "parse_state");
  return rho;
}

cmat parse_basis(const std::string& spec) {
  const std::string where = "basis spec";
  cmat u;
  if (!spec.empty() && spec.front() == '@') {
    const json j = read_json_file(spec.substr(1));
    require_schema(j, "basis", spec);
    if (!j.contains("matrix")) throw DomainError(spec + ": needs 'matrix'");
    u = matrix_from_json(j["matrix"], spec);
  } else {
    const auto f = split(spec, ':');
    if (f.empty()) throw DomainError(where + ": empty");
    if (f[0] == "identity") {
      const Index d = to_dim(fields(spec, 2, 2, where)[1], where);
      u = cmat::Identity(d, d);
    } else if (f[0] == "fourier") {
      const Index d = to_dim(fields(spec, 2, 2, where)[1], where);
      u.resize(d, d);
      for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k)
          u(k, j) = std::polar(1 / std::sqrt(double(d)), 2 * std::numbers::pi * double(j * k) / double(d));
    } else if (f[0] == "mub") {
      u = mub_member(fields(spec, 3, 3, where), where);
    } else {
      throw DomainError(where + ": unknown basis '" + spec + "'");
    }
  }
  if (u.rows() != u.cols() || (u.adjoint() * u - cmat::Identity(u.rows(), u.rows())).norm() > 1e-9)
    throw ShapeMismatch(where + ": basis matrix is not unitary");
  return u;
}

json matrix_to_json(const cmat& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"real", std::move(re)}, {"imag", std::move(im)}};
}

cmat matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("real")) throw DomainError(where + ": matrix needs a 'real' part");
  auto read = [&](const json& part, const char* name) {
    if (!part.is_array() || part.empty()) throw DomainError(where + ": '" + name + "' must be a nonempty array");
    // A flat array is a column vector.
    const bool flat = !part.front().is_array();
    const auto rows = static_cast<Index>(part.size());
    const Index cols = flat ? 1 : static_cast<Index>(part.front().size());
    rmat out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const json& row = part[static_cast<std::size_t>(i)];
      if (flat) {
        if (!row.is_number()) throw DomainError(where + ": non-numeric entry");
        out(i, 0) = row.get<double>();
        continue;
      }
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw DomainError(where + ": ragged rows");
      for (Index c = 0; c < cols; ++c) {
        const json& x = row[static_cast<std::size_t>(c)];
        if (!x.is_number()) throw DomainError(where + ": non-numeric entry");
        out(i, c) = x.get<double>();
      }
    }
    if (!out.allFinite()) throw DomainError(where + ": non-finite entry");
    return out;
  };
  const rmat re = read(j["real"], "real");
  rmat im = rmat::Zero(re.rows(), re.cols());
  if (j.contains("imag")) {
    im = read(j["imag"], "imag");
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw DomainError(where + ": real and imag shapes differ");
  }
  cmat m(re.rows(), re.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index c = 0; c < m.cols(); ++c) m(i, c) = cplx(re(i, c), im(i, c));
  return m;
}

void require_schema(const json& j, const std::string& kind, const std::string& where) {
  if (!j.is_object()) throw DomainError(where + ": expected a JSON object");
  if (!j.contains("schema") || j["schema"] != kSchema) throw DomainError(where + ": schema must be " + kSchema);
  if (!j.contains("kind") || j["kind"] != kind) throw DomainError(where + ": kind must be '" + kind + "'");
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

json to_json(const RunManifest& m) {
  json inputs = json::object();
  for (const auto& [name, d] : m.input_digests) inputs[name] = d;
  return json{{"schema", kSchema},   {"kind", "manifest"},  {"version", kVersion}, {"command", m.command},
              {"config", m.config}, {"inputs", inputs}, {"outputs", m.outputs}};
}

json to_json(const Square& sq) {
  return json{{"schema", kSchema},
              {"kind", "square"},
              {"dim", sq.within.ambient_dim()},
              {"first_dimension", sq.first.dimension()},
              {"second_dimension", sq.second.dimension()},
              {"meet_dimension", sq.meet.dimension()},
              {"within_dimension", sq.within.dimension()},
              {"meet_is_within", same_algebra(sq.meet, sq.within)},
              {"meet_is_full", sq.meet.dimension() == sq.within.ambient_dim() * sq.within.ambient_dim()},
              {"commuting", sq.commuting},
              {"commuting_defect", sq.commuting_defect},
              {"co_commuting", sq.co_commuting},
              {"co_commuting_defect", sq.co_commuting_defect},
              {"tolerance", kSquareTol}};
}

json to_json(const SquareReport& r) {
  json j{{"schema", kSchema},
         {"kind", "cmi"},
         {"value_bits", r.value_bits},
         {"terms", {{"first", r.terms.first}, {"second", r.terms.second}, {"within", r.terms.within}, {"meet", r.terms.meet}}},
         {"state_hash", r.state_hash},
         {"commuting", r.commuting},
         {"commuting_defect", r.commuting_defect},
         {"nonnegative", r.nonnegative},
         {"tolerance", r.tolerance}};
  if (r.recovery_gap) j["recovery_gap_bits"] = *r.recovery_gap;
  return j;
}

json to_json(const MeasureEstimate& e) {
  return json{{"schema", kSchema},
              {"kind", "measure"},
              {"exactness", e.exactness == Exactness::exact_pure_path ? "exact_pure_path" : "upper_bound"},
              {"value_bits", e.value_bits},
              {"size", e.size},
              {"restarts", e.restarts},
              {"seed", e.seed},
              {"evaluations", e.evaluations},
              {"restart_values", e.restart_values},
              {"witness", matrix_to_json(e.witness)}};
}

json to_json(const UcrReport& r) {
  json bases = json::array();
  for (const auto& b : r.instance.bases) bases.push_back(matrix_to_json(b));
  json j{{"schema", kSchema},         {"kind", "ucr"},           {"relation", r.relation},
         {"lhs_bits", r.lhs_bits},    {"rhs_bits", r.rhs_bits},  {"margin_bits", r.margin_bits},
         {"tolerance", r.tolerance},  {"asserted", r.asserted},  {"pass", r.pass()},
         {"dims", r.instance.dims},   {"bases", bases}};
  if (r.instance.seed) j["seed"] = *r.instance.seed;
  return j;
}

json to_json(const ScanRecord& r) {
  json values = json::object(), checks = json::array();
  for (const auto& [k, v] : r.values) values[k] = v;
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"margin_bits", c.margin_bits}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
  return json{{"schema", kSchema}, {"kind", "scan_record"}, {"index", r.index}, {"instance", r.instance},
              {"dim", r.dim},      {"seed", r.seed},        {"values", values}, {"checks", checks},
              {"pass", r.pass()}};
}

json to_json(const ScanSummary& s) {
  json checks = json::array();
  for (const auto& c : s.checks)
    checks.push_back({{"name", c.name},
                      {"evaluated", c.evaluated},
                      {"failures", c.failures},
                      {"min_margin_bits", c.min_margin_bits},
                      {"tolerance", c.tolerance}});
  return json{{"schema", kSchema}, {"kind", "scan_summary"}, {"suite", s.suite},   {"records", s.records},
              {"failures", s.failures}, {"checks", checks},  {"pass", s.pass()}};
}

json to_json(const Transcript& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json j{{"name", s.name},   {"first", s.first_words}, {"second", s.second_words},
           {"state", matrix_to_json(s.state)}, {"pass", s.pass}, {"detail", s.detail}};
    j["half_cmi_bits"] = s.value_bits ? json(*s.value_bits) : json(nullptr);
    steps.push_back(std::move(j));
  }
  return json{{"schema", kSchema}, {"kind", "transcript"}, {"scenario", t.scenario},
              {"seed", t.seed},    {"steps", steps},       {"pass", t.pass()}};
}

json to_json(const MonogamyTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"first_basis", e.first_basis}, {"second_basis", e.second_basis}, {"isq_bits", e.value_bits}});
  json j{{"schema", kSchema},
         {"kind", "monogamy_table"},
         {"dim", t.dim},
         {"state_basis", t.state_basis},
         {"entries", entries},
         {"unordered_sum_bits", t.unordered_sum_bits},
         {"ordered_sum_bits", t.ordered_sum_bits},
         {"closed_form_bits", t.closed_form_bits},
         {"ceiling_bits", t.ceiling_bits},
         {"exceeds_ceiling", t.exceeds_ceiling}};
  if (t.product_bits) {
    j["product_bits"] = *t.product_bits;
    j["additive_bits"] = t.additive_bits;
    j["additive"] = t.additive;
  }
  return j;
}

}  // namespace vnlab::io
