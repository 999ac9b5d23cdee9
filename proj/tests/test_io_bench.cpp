#include <filesystem>
#include <set>
#include <sstream>

#include "doctest.h"
#include "grmapf/animate.hpp"
#include "grmapf/bench.hpp"
#include "grmapf/io.hpp"
#include "grmapf/solvers.hpp"

using namespace grmapf;

TEST_CASE("plan JSON has a fixed key order and round-trips") {
  Plan p{{{{0, 0}, {0, 1}}, {{1, 1}}}};
  const std::string s = plan_to_json(p, false);
  CHECK(s == R"({"makespan":1,"agents":[{"id":0,"path":[[0,0],[0,1]]},{"id":1,"path":[[1,1]]}]})");
  CHECK(plan_from_json(s).paths == p.paths);
  Plan q{{{{0, 0, 1}, {0, 0, 2}}}};
  CHECK(plan_from_json(plan_to_json(q, true)).paths == q.paths);
  CHECK_THROWS_AS(plan_from_json("{"), PreconditionError);
}

TEST_CASE("instance JSON round-trips") {
  GridSpec g(4, 5, 1, {{1, 1}});
  Instance inst(g, {{0, 0}, {2, 3}}, {{3, 4}, {0, 1}});
  const auto back = instance_from_json(instance_to_json(inst));
  CHECK(back.grid() == g);
  CHECK(back.starts() == inst.starts());
  CHECK(back.goals() == inst.goals());
}

TEST_CASE("map and scenario parsing") {
  std::istringstream map("type octile\nheight 3\nwidth 4\nmap\n..@.\n.T..\nG..S\n");
  const auto g = parse_map(map);
  CHECK(g.rows() == 3);
  CHECK(g.cols() == 4);
  CHECK(g.obstacles() == std::vector<Vertex>{{0, 2, 0}, {1, 1, 0}});
  std::istringstream scen("version 1\n0\tm.map\t4\t3\t3\t0\t0\t2\t5.0\n0\tm.map\t4\t3\t0\t0\t3\t2\t5.0\n");
  const auto e = parse_scenario(scen);
  REQUIRE(e.size() == 2);
  CHECK(e[0].start == Vertex{0, 3, 0});
  CHECK(e[0].goal == Vertex{2, 0, 0});
  const auto inst = instance_from_scenario(g, e, 1);
  CHECK(inst.size() == 1);
  std::istringstream bad("height 3\nwidth 4\nmap\n....\n");
  CHECK_THROWS_AS(parse_map(bad), PreconditionError);
}

TEST_CASE("instance generators") {
  InstanceSpec s;
  s.rows = 8;
  s.cols = 8;
  s.density = 0.0;
  CHECK(generate_instance(s).size() == 0);

  s.rows = s.cols = 9;
  s.pattern = Pattern::kSortation;
  s.density = 2.0 / 9.0;
  const auto sort = generate_instance(s);
  CHECK(sort.grid().obstacles().size() == 9);
  CHECK(sort.size() <= 18);
  s.density = 0.3;
  CHECK_THROWS_AS(generate_instance(s), PreconditionError);

  s.rows = s.cols = 8;
  s.pattern = Pattern::kSquares;
  s.density = 1.0;
  const auto sq = generate_instance(s);
  CHECK(sq.size() == 64);
  for (int i = 0; i < sq.size(); ++i) {
    const Vertex a = sq.starts()[static_cast<std::size_t>(i)], b = sq.goals()[static_cast<std::size_t>(i)];
    CHECK(b == Vertex{7 - a.x, 7 - a.y, 0});
    CHECK(Vertex{7 - b.x, 7 - b.y, 0} == a);
  }

  s.pattern = Pattern::kBlocks;
  s.density = 0.5;
  s.seed = 4;
  const auto bl = generate_instance(s);
  CHECK(bl.size() == 4 * 8);

  s.pattern = Pattern::kRandom;
  s.density = 1.0 / 3.0;
  CHECK(instance_to_json(generate_instance(s)) == instance_to_json(generate_instance(s)));
  CHECK(parse_dims("12x6x6").layers == 6);
  CHECK_THROWS_AS(parse_dims("12"), PreconditionError);
}

TEST_CASE("benchmark sweeps are reproducible and skip invalid records") {
  BenchmarkSweep empty;
  CHECK(run_benchmark(empty).empty());

  BenchmarkSweep sweep;
  InstanceSpec shape;
  shape.rows = shape.cols = 12;
  shape.density = 1.0 / 3.0;
  sweep.shapes = {shape};
  SolverConfig a, b;
  b.matching = MatchingMode::kLba;
  b.refine = true;
  sweep.configs = {a, b};
  sweep.seeds = 3;
  sweep.jobs = 2;
  const auto r1 = run_benchmark(sweep);
  sweep.jobs = 1;
  const auto r2 = run_benchmark(sweep);
  REQUIRE(r1.size() == 6);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].status == "valid");
    CHECK(record_to_json(r1[i], false) == record_to_json(r2[i], false));
  }
  CHECK(summary_table(r1) == summary_table(r2));

  auto bad = r1;
  bad[0].status = "error";
  bad[0].makespan = 100000;
  CHECK(summary_table(bad).find("100000") == std::string::npos);
}

TEST_CASE("animation writes one frame per step") {
  GridSpec g(2, 3);
  Instance still(g, {{0, 0}}, {{0, 0}});
  const auto dir = std::filesystem::temp_directory_path() / "grmapf_frames_test";
  std::filesystem::remove_all(dir);
  CHECK(export_animation(still, Plan{{{{0, 0}}}}, dir.string()).size() == 1);
  Instance moving(g, {{0, 0}}, {{1, 2}});
  Plan p{{{{0, 0}, {0, 1}, {0, 2}, {1, 2}}}};
  const auto files = export_animation(moving, p, dir.string());
  CHECK(files.size() == 4);
  CHECK(render_frame(moving, p, 2) == render_frame(moving, p, 2));
  CHECK(render_frame(moving, p, 2).find("<svg") == 0);
  std::filesystem::remove_all(dir);
}
