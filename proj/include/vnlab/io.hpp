#pragma once

// Text and JSON front end: spec strings for algebras, states and bases, the
// versioned report schema, and run manifests. Everything read here is
// validated before it is handed to the numerical core.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnlab/algebra.hpp"
#include "vnlab/measures.hpp"
#include "vnlab/scenarios.hpp"
#include "vnlab/squares.hpp"
#include "vnlab/suites.hpp"
#include "vnlab/ucr.hpp"

namespace vnlab::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "vnlab/1";
inline constexpr const char* kVersion = "0.1.0";

// Factors joined by '*' are tensored left to right. Algebra factors:
//   full:d  trivial:d  diag:d  pauli:X|Y|Z  words:XI,ZZ  mub:p:i  @file.json
// State factors:
//   up_y  bell  ghz  classical  mixed:d  basis:d:k  pure:d:seed  random:d:seed[:rank]  @file.json
// Bases (unitary columns): identity:d  fourier:d  mub:p:i  @file.json
// Malformed specs throw DomainError; invalid matrices throw the core's input errors.
VnAlgebra parse_algebra(const std::string& spec);
cmat parse_state(const std::string& spec);
cmat parse_basis(const std::string& spec);

// {"real": rows, "imag": rows}; "imag" may be omitted on input.
json matrix_to_json(const cmat& m);
cmat matrix_from_json(const json& j, const std::string& where);
// Checks "schema" == vnlab/1 and "kind" == `kind`.
void require_schema(const json& j, const std::string& kind, const std::string& where);

// FNV-1a over the bytes, as 16 hex digits.
std::string digest(const std::string& bytes);

struct RunManifest {
  std::string command;
  json config = json::object();
  std::vector<std::pair<std::string, std::string>> input_digests;
  std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);
json to_json(const Square& sq);
json to_json(const SquareReport& r);
json to_json(const MeasureEstimate& e);
json to_json(const UcrReport& r);
json to_json(const ScanRecord& r);
json to_json(const ScanSummary& s);
json to_json(const Transcript& t);
json to_json(const MonogamyTable& t);

}  // namespace vnlab::io
