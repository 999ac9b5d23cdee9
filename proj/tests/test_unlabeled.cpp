#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "grmapf/oracle.hpp"
#include "grmapf/unlabeled.hpp"
#include "helpers.hpp"

using namespace grmapf;

namespace {

std::vector<VertexId> random_set(const GridSpec& g, int n, std::mt19937_64& rng) {
  std::vector<VertexId> v;
  for (VertexId i = 0; i < g.size(); ++i) {
    if (!g.blocked(i)) v.push_back(i);
  }
  std::shuffle(v.begin(), v.end(), rng);
  v.resize(static_cast<std::size_t>(n));
  return v;
}

void check_unlabeled(const GridSpec& g, const std::vector<VertexId>& s, const std::vector<VertexId>& t,
                     const UnlabeledPlan& up) {
  Plan p;
  std::vector<Vertex> starts, goals;
  for (const auto& path : up.paths) {
    std::vector<Vertex> q;
    for (VertexId v : path) q.push_back(g.at(v));
    starts.push_back(q.front());
    goals.push_back(q.back());
    p.paths.push_back(q);
  }
  auto a = t, b = std::vector<VertexId>();
  for (const auto& v : goals) b.push_back(g.id(v));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(g.id(starts[i]) == s[i]);
  const auto r = validate_plan(Instance(g, starts, goals), p);
  CHECK_MESSAGE(r.ok(), r.summary());
}

}  // namespace

TEST_CASE("cell patterns") {
  GridSpec g(7, 9);
  const auto p3 = CellPattern::make(g, 3);
  CHECK(p3.cell_rows() == 2);
  CHECK(p3.cell_cols() == 3);
  CHECK(p3.capacity() == 3);
  CHECK(p3.cell_of({6, 0, 0}) == -1);
  const auto h = p3.slots(p3.cell_index(1, 2, 0), Orientation::kHorizontal);
  CHECK(h == std::vector<Vertex>{{4, 6, 0}, {4, 7, 0}, {4, 8, 0}});
  const auto v = p3.slots(p3.cell_index(1, 2, 0), Orientation::kVertical);
  CHECK(v == std::vector<Vertex>{{3, 7, 0}, {4, 7, 0}, {5, 7, 0}});

  GridSpec centres(6, 6, 1, {{1, 1}, {1, 4}, {4, 1}, {4, 4}});
  const auto pc = CellPattern::make(centres, 3);
  CHECK(pc.capacity() == 2);
  CHECK(pc.slots(0, Orientation::kHorizontal) == std::vector<Vertex>{{1, 0, 0}, {1, 2, 0}});

  CHECK_THROWS_AS(CellPattern::make(GridSpec(6, 6, 1, {{0, 0}}), 3), PreconditionError);
  CHECK_THROWS_AS(CellPattern::make(GridSpec(4, 4, 1, {{1, 1}}), 2), PreconditionError);
  // Residual rows may hold obstacles.
  CHECK_NOTHROW(CellPattern::make(GridSpec(7, 6, 1, {{6, 2}}), 3));
  const auto p2 = CellPattern::make(GridSpec(4, 4), 2);
  CHECK(p2.slots(p2.cell_index(1, 1, 0), Orientation::kHorizontal) == std::vector<Vertex>{{2, 2, 0}, {2, 3, 0}});
}

TEST_CASE("manhattan bottleneck matches brute force") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    GridSpec g(5, 5);
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto s = random_set(g, n, rng), t = random_set(g, n, rng);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    int best = 1 << 30;
    do {
      int worst = 0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, manhattan(g.at(s[static_cast<std::size_t>(i)]), g.at(t[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])));
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<int> assign;
    CHECK(manhattan_bottleneck(g, s, t, &assign) == best);
  }
}

TEST_CASE("balanced targets fill at most capacity slots per cell") {
  std::mt19937_64 rng(4);
  GridSpec g(9, 12);
  const auto P = CellPattern::make(g, 3);
  const auto s = random_set(g, 36, rng);
  const auto bt = balanced_targets(g, s, P, Orientation::kHorizontal);
  std::vector<int> per(static_cast<std::size_t>(P.cell_count()), 0);
  auto sorted = bt.target_of_agent;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  for (VertexId v : bt.target_of_agent) {
    const Vertex x = g.at(v);
    CHECK(x.x % 3 == 1);
    per[static_cast<std::size_t>(P.cell_of(x))]++;
  }
  for (int c : per) CHECK(c <= 3);
}

TEST_CASE("unlabeled routing is minimal and collision free on tiny grids") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int m1 = 2 + static_cast<int>(rng() % 3), m2 = 2 + static_cast<int>(rng() % 3);
    std::vector<Vertex> obs;
    if (rng() % 3 == 0) obs.push_back({static_cast<int>(rng() % static_cast<unsigned>(m1)), static_cast<int>(rng() % static_cast<unsigned>(m2)), 0});
    GridSpec g(m1, m2, 1, obs);
    const int n = 1 + static_cast<int>(rng() % std::min(4, g.free_count() - 1));
    const auto s = random_set(g, n, rng), t = random_set(g, n, rng);
    int opt = -1;
    try {
      opt = optimal_unlabeled_plan(g, s, t).makespan;
    } catch (const InfeasibleError&) {
      CHECK_THROWS(unlabeled_route(g, s, t, 20));
      continue;
    }
    const auto up = unlabeled_route(g, s, t);
    CHECK(up.makespan == opt);
    check_unlabeled(g, s, t, up);
    if (opt > 0) CHECK_FALSE(unlabeled_feasible(g, s, t, opt - 1));
  }
}

TEST_CASE("unlabeled routing on a larger grid with obstacles") {
  std::mt19937_64 rng(8);
  std::vector<Vertex> obs;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) obs.push_back({3 * a + 1, 3 * b + 1, 0});
  }
  GridSpec g(12, 12, 1, obs);
  const auto s = random_set(g, 30, rng), t = random_set(g, 30, rng);
  const auto up = unlabeled_route(g, s, t);
  check_unlabeled(g, s, t, up);
  CHECK(up.makespan >= manhattan_bottleneck(g, s, t));
  CHECK_THROWS_AS(unlabeled_route(g, s, t, up.makespan - 1), InfeasibleError);
}

TEST_CASE("centring moves every listed cell onto its slots and stays inside cells") {
  std::mt19937_64 rng(10);
  GridSpec g(6, 9);
  const auto P = CellPattern::make(g, 3);
  std::vector<VertexId> pos;
  for (int c = 0; c < P.cell_count(); ++c) {
    auto vs = P.cell_vertices(c);
    std::shuffle(vs.begin(), vs.end(), rng);
    const int k = static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) pos.push_back(g.id(vs[static_cast<std::size_t>(i)]));
  }
  const auto seg = center_balanced(g, P, pos, Orientation::kVertical);
  auto [inst, plan] = segment_as_plan(g, seg);
  CHECK(validate_plan(inst, plan).ok());
  std::vector<VertexId> end = pos;
  for (const auto& tr : seg.tracks) {
    for (VertexId v : tr.path) CHECK(P.cell_of(g.at(v)) == P.cell_of(g.at(pos[static_cast<std::size_t>(tr.agent)])));
    end[static_cast<std::size_t>(tr.agent)] = tr.path.back();
  }
  for (VertexId v : end) CHECK(g.at(v).y % 3 == 1);
}
