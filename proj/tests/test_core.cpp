#include <algorithm>
#include <random>

#include "doctest.h"
#include "grmapf/core.hpp"
#include "helpers.hpp"

using namespace grmapf;

TEST_CASE("single agent moving one step is valid") {
  GridSpec g(1, 2);
  Instance inst(g, {{0, 0}}, {{0, 1}});
  Plan p{{{{0, 0}, {0, 1}}}};
  CHECK(validate_plan(inst, p).ok());
}

TEST_CASE("head-on exchange is reported as a swap at t = 0") {
  GridSpec g(1, 2);
  Instance inst(g, {{0, 0}, {0, 1}}, {{0, 1}, {0, 0}});
  Plan p{{{{0, 0}, {0, 1}}, {{0, 1}, {0, 0}}}};
  const auto r = validate_plan(inst, p);
  REQUIRE(r.count(ViolationKind::kSwapCollision) == 1);
  CHECK(r.violations.front().time == 0);
}

TEST_CASE("vertex collisions, obstacles and teleports are all reported") {
  GridSpec g(3, 3, 1, {{1, 1}});
  Instance inst(g, {{0, 0}, {0, 2}}, {{0, 1}, {2, 2}});
  Plan p{{{{0, 0}, {0, 1}}, {{0, 2}, {0, 1}, {2, 2}}}};
  const auto r = validate_plan(inst, p);
  CHECK(r.count(ViolationKind::kVertexCollision) == 1);
  CHECK(r.count(ViolationKind::kNonAdjacentMove) == 1);
  Plan q{{{{0, 0}, {0, 1}}, {{0, 2}, {1, 2}, {1, 1}, {1, 2}, {2, 2}}}};
  CHECK(validate_plan(inst, q).count(ViolationKind::kObstacle) == 1);
}

TEST_CASE("endpoint mismatches and wrong agent counts are violations, not exceptions") {
  GridSpec g(2, 2);
  Instance inst(g, {{0, 0}}, {{1, 1}});
  CHECK(validate_plan(inst, Plan{{{{0, 0}}}}).count(ViolationKind::kGoalMismatch) == 1);
  CHECK(validate_plan(inst, Plan{}).count(ViolationKind::kAgentCount) == 1);
  CHECK(validate_plan(inst, Plan{{{{0, 1}, {1, 1}}}}).count(ViolationKind::kStartMismatch) == 1);
}

TEST_CASE("instances reject duplicate or blocked endpoints") {
  GridSpec g(2, 2, 1, {{1, 1}});
  CHECK_THROWS_AS(Instance(g, {{0, 0}, {0, 0}}, {{0, 1}, {1, 0}}), PreconditionError);
  CHECK_THROWS_AS(Instance(g, {{0, 0}}, {{1, 1}}), PreconditionError);
  CHECK_THROWS_AS(Instance(g, {{0, 0}}, {{2, 0}}), PreconditionError);
}

TEST_CASE("metrics") {
  SUBCASE("identity") {
    GridSpec g(3, 3);
    Instance inst(g, {{0, 0}}, {{0, 0}});
    const auto m = compute_metrics(inst, Plan{{{{0, 0}}}});
    CHECK(m.makespan == 0);
    CHECK(m.soc == 0);
    REQUIRE(m.optimality_ratio);
    CHECK(*m.optimality_ratio == 1.0);
  }
  SUBCASE("shortest path") {
    GridSpec g(3, 4);
    Instance inst(g, {{0, 0}}, {{2, 3}});
    Plan p{{{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}}};
    const auto m = compute_metrics(inst, p);
    CHECK(m.makespan == 5);
    CHECK(m.manhattan_lb == 5);
    CHECK(*m.optimality_ratio == doctest::Approx(1.0));
  }
  SUBCASE("detour of six steps for a lower bound of four") {
    GridSpec g(3, 3);
    Instance inst(g, {{0, 0}, {1, 1}}, {{2, 2}, {1, 1}});
    Plan p{{{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}},
            {{1, 1}, {1, 0}, {2, 0}, {2, 1}, {2, 1}, {2, 1}, {1, 1}}}};
    // Agent 1 is pushed out and returns, so the plan lasts six steps.
    REQUIRE(validate_plan(inst, p).ok());
    const auto m = compute_metrics(inst, p);
    CHECK(m.makespan == 6);
    CHECK(m.manhattan_lb == 4);
    CHECK(*m.optimality_ratio == doctest::Approx(1.5));
  }
  SUBCASE("zero bound with motion is undefined") {
    GridSpec g(2, 2);
    Instance inst(g, {{0, 0}}, {{0, 0}});
    const auto m = compute_metrics(inst, Plan{{{{0, 0}, {0, 1}, {0, 0}}}});
    CHECK(m.makespan == 2);
    CHECK(m.ratio_undefined());
  }
}

TEST_CASE("trailing rests are trimmed") {
  Plan p{{{{0, 0}, {0, 1}, {0, 1}, {0, 1}}, {{1, 1}, {1, 1}}}};
  trim_trailing_rests(p);
  CHECK(p.makespan() == 1);
}

TEST_CASE("validator agrees with brute-force replay on random walks") {
  std::mt19937_64 rng(7);
  GridSpec g(4, 4, 1, {{2, 2}});
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testing::random_agents(g, 4, rng);
    Plan p;
    std::vector<Vertex> goals;
    for (int i = 0; i < inst.size(); ++i) {
      std::vector<Vertex> path{inst.starts()[static_cast<std::size_t>(i)]};
      for (int t = 0; t < 4; ++t) {
        Vertex v = path.back();
        switch (rng() % 5) {
          case 0: v.x++; break;
          case 1: v.x--; break;
          case 2: v.y++; break;
          case 3: v.y--; break;
          default: break;
        }
        path.push_back(v);
      }
      goals.push_back(path.back());
      p.paths.push_back(path);
    }
    bool bad = false;
    for (const auto& path : p.paths) {
      for (const auto& v : path) bad = bad || !g.in_bounds(v) || g.blocked(v);
    }
    for (int t = 0; t <= 4 && !bad; ++t) {
      for (std::size_t i = 0; i < p.paths.size(); ++i) {
        for (std::size_t j = i + 1; j < p.paths.size(); ++j) {
          if (p.paths[i][static_cast<std::size_t>(t)] == p.paths[j][static_cast<std::size_t>(t)]) bad = true;
          if (t < 4 && p.paths[i][static_cast<std::size_t>(t)] == p.paths[j][static_cast<std::size_t>(t + 1)] &&
              p.paths[j][static_cast<std::size_t>(t)] == p.paths[i][static_cast<std::size_t>(t + 1)]) {
            bad = true;
          }
        }
      }
    }
    auto sorted = goals;
    std::sort(sorted.begin(), sorted.end());
    bool goal_ok = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    for (const auto& v : goals) goal_ok = goal_ok && g.in_bounds(v) && !g.blocked(v);
    if (!goal_ok) continue;  // not expressible as an instance
    const auto& g2 = goals;
    Instance inst2(g, inst.starts(), g2);
    CHECK(validate_plan(inst2, p).ok() == !bad);
  }
}
