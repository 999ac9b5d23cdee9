#include "doctest.h"
#include "grmapf/refine.hpp"
#include "grmapf/solvers.hpp"
#include "helpers.hpp"

using namespace grmapf;

TEST_CASE("a plan without idle steps is returned unchanged") {
  GridSpec g(1, 4);
  Instance inst(g, {{0, 0}, {0, 1}}, {{0, 2}, {0, 3}});
  Plan p{{{{0, 0}, {0, 1}, {0, 2}}, {{0, 1}, {0, 2}, {0, 3}}}};
  const auto r = refine(inst, p);
  CHECK(r.plan.paths == p.paths);
  CHECK(r.makespan_after == 2);
}

TEST_CASE("an agent idling behind a leader on a corridor starts early") {
  GridSpec g(1, 5);
  // A walks 1 -> 3; B waits three steps before following into column 1.
  Instance inst(g, {{0, 1}, {0, 0}}, {{0, 3}, {0, 1}});
  Plan p{{{{0, 1}, {0, 2}, {0, 3}}, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 1}}}};
  REQUIRE(validate_plan(inst, p).ok());
  const auto r = refine(inst, p);
  CHECK(validate_plan(inst, r.plan).ok());
  CHECK(r.makespan_before == 4);
  CHECK(r.makespan_after == 2);
  CHECK(r.plan.at(1, 1) == Vertex{0, 1});
}

TEST_CASE("rotation cycles advance together") {
  GridSpec g(2, 2);
  // Four agents rotate once around the square after a two-step pause.
  Instance inst(g, {{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {{0, 1}, {1, 1}, {1, 0}, {0, 0}});
  Plan p{{{{0, 0}, {0, 0}, {0, 0}, {0, 1}},
          {{0, 1}, {0, 1}, {0, 1}, {1, 1}},
          {{1, 1}, {1, 1}, {1, 1}, {1, 0}},
          {{1, 0}, {1, 0}, {1, 0}, {0, 0}}}};
  const auto r = refine(inst, p);
  CHECK(r.makespan_after == 1);
  CHECK(validate_plan(inst, r.plan).ok());
}

TEST_CASE("invalid input is rejected before refinement") {
  GridSpec g(1, 2);
  Instance inst(g, {{0, 0}, {0, 1}}, {{0, 1}, {0, 0}});
  Plan p{{{{0, 0}, {0, 1}}, {{0, 1}, {0, 0}}}};
  CHECK_THROWS_AS(refine(inst, p), PreconditionError);
}

TEST_CASE("refinement properties on solver output") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto inst = testing::random_instance(18, 18, 1.0 / 3.0, seed);
    const auto base = solve_grh(inst).plan;
    const auto once = refine(inst, base).plan;
    const auto twice = refine(inst, once).plan;
    REQUIRE(validate_plan(inst, once).ok());
    CHECK(once.makespan() <= base.makespan());
    CHECK(compute_metrics(inst, once).soc <= compute_metrics(inst, base).soc);
    CHECK(twice.paths == once.paths);
    CHECK(testing::visit_order(once) == testing::visit_order(base));
    CHECK(testing::spatial_paths(once) == testing::spatial_paths(base));
  }
}
