#include "doctest.h"

#include "vnlab/squares.hpp"
#include "vnlab/suites.hpp"

using namespace vnlab;

TEST_CASE("generated squares commute in every family and dimension") {
  Rng rng(12);
  for (Index d = 2; d <= 8; ++d)
    for (SquareFamily f : families_for(d)) {
      const auto sq = random_square(f, d, rng);
      CAPTURE(sq.label);
      CHECK(commuting_defect(sq.first, sq.second, sq.meet) <= kSquareTol);
      CHECK(sq.within.ambient_dim() == d);
    }
  CHECK_THROWS_AS(random_square(SquareFamily::mub_pair, 4, rng), DomainError);
  CHECK_THROWS_AS(random_square(SquareFamily::tensor_split, 5, rng), DomainError);
  CHECK(families_for(4).front() == SquareFamily::tensor_split);
}

TEST_CASE("coordinate block algebras") {
  const VnAlgebra n = coordinate_block_algebra({0, 1, 0});
  CHECK(n.dimension() == 5);
  CHECK(n.blocks().blocks.size() == 2);
  CHECK(same_algebra(coordinate_block_algebra({0, 1, 2}), VnAlgebra::diagonal(3)));
}

TEST_CASE("small scans pass and replay") {
  ScanOptions o;
  o.dims = {2, 3, 4};
  o.samples = 6;
  o.states_per_sample = 3;
  o.seed = 17;
  for (Suite s : {Suite::ssa, Suite::recovery, Suite::duality}) {
    const auto records = run_scan(s, o);
    const auto summary = summarize(s, records);
    CAPTURE(suite_name(s));
    CHECK(summary.pass());
    CHECK(summary.records == records.size());
    const auto again = run_scan(s, o);
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(again[i].values == records[i].values);
  }
  ScanOptions small;
  small.dims = {2, 3};
  small.samples = 4;
  CHECK(summarize(Suite::ucr, run_scan(Suite::ucr, small)).pass());
  CHECK(summarize(Suite::mono, run_scan(Suite::mono, small)).pass());
  CHECK(run_scan(Suite::ssa, o).size() == 18);
}

TEST_CASE("scan validation") {
  ScanOptions o;
  CHECK_THROWS_AS(run_scan(Suite::ssa, o), DomainError);
  o.dims = {4};
  CHECK_THROWS_AS(run_scan(Suite::ucr, o), DomainError);
  CHECK_THROWS_AS(parse_suite("nope"), DomainError);
  CHECK(parse_suite("mono") == Suite::mono);

  // A tolerance override below zero turns every check into a failure.
  o.dims = {2};
  o.samples = 2;
  o.tolerance = -1.0;
  CHECK(summarize(Suite::ssa, run_scan(Suite::ssa, o)).failures == 2);
}
