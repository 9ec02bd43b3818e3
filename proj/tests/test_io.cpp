#include "doctest.h"

#include <cmath>
#include <fstream>

#include "vnlab/io.hpp"

using namespace vnlab;
using io::json;

TEST_CASE("algebra specs") {
  CHECK(same_algebra(io::parse_algebra("full:3"), VnAlgebra::full(3)));
  CHECK(same_algebra(io::parse_algebra("diag:4"), VnAlgebra::diagonal(4)));
  CHECK(io::parse_algebra("trivial:2*full:2").dimension() == 4);
  CHECK(io::parse_algebra("pauli:X").dimension() == 2);
  CHECK(same_algebra(io::parse_algebra("pauli:Z"), VnAlgebra::diagonal(2)));
  CHECK(same_algebra(io::parse_algebra("words:ZI,IZ"), VnAlgebra::diagonal(4)));
  CHECK(io::parse_algebra("mub:3:2").dimension() == 3);
  CHECK(io::parse_algebra("pauli:X*pauli:Z*full:2").ambient_dim() == 8);

  for (const char* bad : {"", "full", "full:x", "full:0", "full:2*", "pauli:W", "mub:4:0", "mub:3:4", "nope:2", "full:2:3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(io::parse_algebra(bad), InputError);
  }
}

TEST_CASE("state specs are densities") {
  const cmat up_y = io::parse_state("up_y");
  CHECK(std::abs(up_y(0, 1) - cplx(0, -0.5)) < 1e-15);
  CHECK(io::parse_state("bell").rows() == 4);
  CHECK(io::parse_state("ghz").rows() == 8);
  CHECK(std::abs(io::parse_state("mixed:3").trace() - 1.0) < 1e-15);
  CHECK(std::abs(io::parse_state("basis:3:2")(2, 2) - 1.0) < 1e-15);
  CHECK(io::parse_state("up_y*basis:2:1").rows() == 4);
  // Seeded specs replay.
  CHECK(io::parse_state("random:4:9:2").isApprox(io::parse_state("random:4:9:2")));
  CHECK(io::parse_state("pure:3:1").isApprox(io::parse_state("pure:3:1")));
  for (const char* bad : {"basis:2:2", "random:2:1:3", "bell:2", "mixed:-1", "pure:2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(io::parse_state(bad), InputError);
  }
}

TEST_CASE("bases are unitary") {
  const cmat f = io::parse_basis("fourier:3");
  CHECK((f.adjoint() * f).isIdentity(1e-12));
  CHECK(io::parse_basis("identity:2").isIdentity());
  CHECK_THROWS_AS(io::parse_basis("fourier"), InputError);
}

TEST_CASE("matrix JSON round trip and validation") {
  const cmat rho = io::parse_state("random:3:4");
  CHECK(io::matrix_from_json(io::matrix_to_json(rho), "t").isApprox(rho, 1e-15));
  const cmat col = io::matrix_from_json(json::parse(R"({"real": [1, 0]})"), "t");
  CHECK(col.cols() == 1);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"real": [[1, 0], [0]]})"), "t"), DomainError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"imag": [[1]]})"), "t"), DomainError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"real": [["a"]]})"), "t"), DomainError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"real": [[1, 0]], "imag": [[0]]})"), "t"), DomainError);
}

TEST_CASE("file specs are schema checked") {
  const std::string path = "vnlab_io_test_state.json";
  {
    std::ofstream out(path);
    out << R"({"schema": "vnlab/1", "kind": "state", "matrix": {"real": [[0.5, 0], [0, 0.5]]}})";
  }
  CHECK(io::parse_state("@" + path).isApprox(cmat::Identity(2, 2) / 2.0));
  CHECK_THROWS_AS(io::parse_algebra("@" + path), DomainError);
  {
    std::ofstream out(path);
    out << R"({"schema": "vnlab/1", "kind": "state", "matrix": {"real": [[1, 0], [0, 1]]}})";
  }
  CHECK_THROWS_AS(io::parse_state("@" + path), InputError);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK_THROWS_AS(io::parse_state("@" + path), DomainError);
  std::remove(path.c_str());
}

TEST_CASE("reports carry the schema tag") {
  const auto report = gen_cmi(io::parse_algebra("pauli:X"), io::parse_algebra("pauli:Z"), VnAlgebra::full(2),
                              io::parse_state("up_y"));
  const json j = io::to_json(report);
  CHECK(j["schema"] == io::kSchema);
  CHECK(j["value_bits"].get<double>() == doctest::Approx(1.0));
  CHECK(io::to_json(io::RunManifest{"scan"})["version"] == io::kVersion);
  CHECK(io::digest("") == "cbf29ce484222325");
  CHECK(io::digest("a") != io::digest("b"));
}
