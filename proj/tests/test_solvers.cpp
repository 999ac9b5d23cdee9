#include "doctest.h"
#include "grmapf/solvers.hpp"
#include "grmapf/unlabeled.hpp"
#include "helpers.hpp"

using namespace grmapf;
using testing::random_instance;

namespace {

void check_valid(const Instance& inst, const SolveResult& r) {
  const auto rep = validate_plan(inst, r.plan);
  REQUIRE_MESSAGE(rep.ok(), rep.summary());
}

}  // namespace

TEST_CASE("identity instances cost nothing") {
  GridSpec g(9, 9);
  std::vector<Vertex> all;
  for (int x = 0; x < 9; ++x) {
    for (int y = 0; y < 9; ++y) all.push_back({x, y, 0});
  }
  const Instance full(g, all, all);
  CHECK(solve_grm(full, GrmVariant::kBlock4).plan.makespan() == 0);
  CHECK(solve_grm(full, GrmVariant::kBlock2).plan.makespan() == 0);

  // Centred, balanced and already at the goal.
  const auto P = CellPattern::make(g, 3);
  std::vector<Vertex> slots = P.all_slots(Orientation::kHorizontal);
  const Instance centred(g, slots, slots);
  CHECK(solve_grh(centred).plan.makespan() == 0);
  const Instance empty(g, {}, {});
  CHECK(solve_grh(empty).plan.makespan() == 0);
}

TEST_CASE("GRM stays within its bounds on 12x9") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = random_instance(12, 9, 1.0, seed);
    const auto r4 = solve_grm(inst, GrmVariant::kBlock4);
    check_valid(inst, r4);
    CHECK(r4.plan.makespan() <= 4 * (12 + 18) + 24);
    const auto r2 = solve_grm(inst, GrmVariant::kBlock2);
    check_valid(inst, r2);
    CHECK(r2.plan.makespan() <= 7 * (12 + 18) + 24);
    CHECK(testing::trace_consistent(inst, r4, 1));
  }
}

TEST_CASE("GRM below full density pads with fillers") {
  const auto inst = random_instance(9, 9, 0.4, 3);
  check_valid(inst, solve_grm(inst, GrmVariant::kBlock4));
}

TEST_CASE("GRH shuffle phase bound and trace on 18x18") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = random_instance(18, 18, 1.0 / 3.0, seed);
    SolverConfig c;
    c.seed = seed;
    const auto r = solve_grh(inst, c);
    check_valid(inst, r);
    CHECK(r.trace.shuffle_makespan() <= 18 + 36 + 18);
    CHECK(testing::trace_consistent(inst, r, 3));
  }
}

TEST_CASE("LBA never worsens the first-phase bottleneck") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = random_instance(30, 30, 1.0 / 3.0, seed);
    SolverConfig hall, lba;
    hall.seed = lba.seed = seed;
    lba.matching = MatchingMode::kLba;
    const auto a = solve_grh(inst, hall), b = solve_grh(inst, lba);
    check_valid(inst, b);
    CHECK(b.trace.first_phase_bottleneck <= a.trace.first_phase_bottleneck);
  }
}

TEST_CASE("GRH column-first schedule") {
  const auto inst = random_instance(18, 12, 1.0 / 3.0, 4);
  SolverConfig c;
  c.column_first = true;
  const auto r = solve_grh(inst, c);
  check_valid(inst, r);
  CHECK(testing::trace_consistent(inst, r, 3));
}

TEST_CASE("GRH on sortation grids never touches obstacles") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    InstanceSpec s;
    s.rows = 18;
    s.cols = 18;
    s.density = 2.0 / 9.0;
    s.pattern = Pattern::kSortation;
    s.seed = seed;
    const auto inst = generate_instance(s);
    const auto r = solve_grh(inst);
    check_valid(inst, r);
    CHECK(r.trace.shuffle_makespan() <= 18 + 36 + 18);
  }
}

TEST_CASE("GRH handles dimensions that are not multiples of three") {
  const auto inst = random_instance(14, 11, 0.2, 5);
  check_valid(inst, solve_grh(inst));
}

TEST_CASE("GRLM on 16x16") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto inst = random_instance(16, 16, 0.5, seed);
    const auto r = solve_grlm(inst);
    check_valid(inst, r);
    CHECK(testing::trace_consistent(inst, r, 2));
  }
}

TEST_CASE("arbitrary-instance pipeline picks a backend by density") {
  InstanceSpec s;
  s.rows = 12;
  s.cols = 12;
  s.density = 1.0 / 3.0;
  s.pattern = Pattern::kBlocks;
  const auto inst = generate_instance(s);
  const auto r = solve_arbitrary_half(inst);
  check_valid(inst, r);
  CHECK(r.trace.cell_size == 3);
  const auto half = random_instance(12, 12, 0.5, 1);
  const auto r2 = solve_arbitrary_half(half);
  check_valid(half, r2);
  CHECK(r2.trace.cell_size == 2);
}

TEST_CASE("3D pipelines") {
  const auto inst = random_instance(12, 6, 1.0 / 3.0, 1, 6);
  const auto r = solve_3d(inst, Base3d::kGrh);
  check_valid(inst, r);
  CHECK(r.trace.shuffle_makespan() <= 12 + 12 + 12 + 24);
  CHECK(testing::trace_consistent(inst, r, 3));
  const auto half = random_instance(8, 6, 0.5, 2, 4);
  check_valid(half, solve_3d(half, Base3d::kGrlm));
  const auto full = random_instance(6, 5, 1.0, 3, 4);
  check_valid(full, solve_3d(full, Base3d::kGrm));
}

TEST_CASE("precondition violations") {
  const auto odd = random_instance(15, 16, 0.3, 1);
  CHECK_THROWS_AS(solve_grlm(odd), PreconditionError);
  GridSpec bad(9, 9, 1, {{0, 0}});
  CHECK_THROWS_AS(solve_grh(Instance(bad, {{2, 2}}, {{5, 5}})), PreconditionError);
  const auto dense = random_instance(9, 9, 0.5, 1);
  CHECK_THROWS_AS(solve_grh(dense), CapacityError);
  CHECK_THROWS_AS(solve_grm(random_instance(2, 5, 1.0, 1), GrmVariant::kBlock4), PreconditionError);
}

TEST_CASE("dispatch with refinement") {
  const auto inst = random_instance(18, 18, 1.0 / 3.0, 9);
  SolverConfig c;
  c.refine = true;
  const auto r = solve(inst, c);
  check_valid(inst, r);
  CHECK(r.plan.makespan() <= r.synchronized_makespan);
  CHECK(parse_algorithm("grm4") == Algorithm::kGrm4);
  CHECK_THROWS_AS(parse_algorithm("cbs"), PreconditionError);
}
