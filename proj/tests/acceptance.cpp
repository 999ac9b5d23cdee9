// End-to-end checks. One PASS/FAIL line per criterion; exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grmapf/bench.hpp"
#include "grmapf/oracle.hpp"
#include "grmapf/refine.hpp"
#include "grmapf/shuffle.hpp"
#include "grmapf/solvers.hpp"
#include "grmapf/swap_table.hpp"
#include "grmapf/unlabeled.hpp"
#include "helpers.hpp"

using namespace grmapf;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kSeeds = 20;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

struct Kept {
  std::string tag;
  Instance inst;
  Plan plan;
};

// Plans from the solver suites, reused by the refinement and reporting checks.
std::vector<Kept> g_kept;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Instance make(int m1, int m2, double d, std::uint64_t seed, int m3 = 1, Pattern pat = Pattern::kRandom) {
  InstanceSpec s;
  s.rows = m1;
  s.cols = m2;
  s.layers = m3;
  s.density = d;
  s.pattern = pat;
  s.seed = seed;
  return generate_instance(s);
}

std::string dims(int m1, int m2, int m3 = 1) {
  return std::to_string(m1) + "x" + std::to_string(m2) + (m3 > 1 ? "x" + std::to_string(m3) : "");
}

bool valid(const Instance& inst, const Plan& p) { return validate_plan(inst, p).ok(); }

void c1(Outcome& o) {
  const std::vector<std::pair<SwapShape, int>> want{{{3, 2}, 7}, {{4, 2}, 6}, {{2, 3}, 6}, {{3, 3}, 7}, {{2, 4}, 6}};
  for (const auto& [shape, steps] : want) {
    const auto t0 = Clock::now();
    const int got = SwapTable::generate(shape).max_steps();
    o.detail << shape.rows << "x" << shape.cols << "=" << got << " (" << seconds_since(t0) << "s) ";
    o.require(got == steps, dims(shape.rows, shape.cols) + " worst case " + std::to_string(got));
  }
}

void c2(Outcome& o) {
  const std::vector<std::uint8_t> dest{1, 0, 2, 0, 1, 2};
  const int table = swap_table({2, 3}).steps(dest);
  GridSpec g(2, 3);
  Instance inst(g, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}},
                {{0, 1}, {0, 0}, {0, 2}, {1, 0}, {1, 1}, {1, 2}});
  const auto r = optimal_makespan_labeled(inst);
  o.detail << "table " << table << ", search " << r.makespan;
  o.require(table == 3 && r.makespan == 3 && valid(inst, r.plan), "single exchange is not 3 steps");
}

void c3(Outcome& o) {
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{12, 9}, {18, 12}, {30, 30}}) {
    int worst2 = 0, worst4 = 0;
    double slowest = 0;
    for (int s = 0; s < kSeeds; ++s) {
      const auto inst = make(m1, m2, 1.0, static_cast<std::uint64_t>(s));
      for (auto v : {GrmVariant::kBlock2, GrmVariant::kBlock4}) {
        const auto t0 = Clock::now();
        const auto r = solve_grm(inst, v);
        slowest = std::max(slowest, seconds_since(t0));
        const int ms = r.plan.makespan();
        const bool b2 = v == GrmVariant::kBlock2;
        const int bound = (b2 ? 7 : 4) * (m1 + 2 * m2) + 24;
        (b2 ? worst2 : worst4) = std::max(b2 ? worst2 : worst4, ms);
        o.require(valid(inst, r.plan), "invalid GRM plan " + dims(m1, m2));
        o.require(ms <= bound, "GRM makespan " + std::to_string(ms) + " over " + std::to_string(bound));
        g_kept.push_back({std::string("grm") + (b2 ? "2 " : "4 ") + dims(m1, m2), inst, r.plan});
      }
    }
    o.detail << dims(m1, m2) << " block2 max " << worst2 << "/" << 7 * (m1 + 2 * m2) + 24 << " block4 max "
             << worst4 << "/" << 4 * (m1 + 2 * m2) + 24 << " slowest " << slowest << "s; ";
    if (m1 == 30) o.require(slowest < 10.0, "30x30 GRM took over 10 s");
  }
}

void c4(Outcome& o) {
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{18, 18}, {36, 24}, {90, 60}}) {
    int worst = 0;
    double slowest = 0;
    for (int s = 0; s < kSeeds; ++s) {
      const auto inst = make(m1, m2, 1.0 / 3, static_cast<std::uint64_t>(s));
      const auto t0 = Clock::now();
      const auto r = solve_grh(inst);
      slowest = std::max(slowest, seconds_since(t0));
      worst = std::max(worst, r.trace.shuffle_makespan());
      o.require(valid(inst, r.plan), "invalid GRH plan " + dims(m1, m2));
      o.require(r.trace.shuffle_makespan() <= m1 + 2 * m2 + 18, "GRH shuffle phase over bound " + dims(m1, m2));
      g_kept.push_back({"grh " + dims(m1, m2), inst, r.plan});
    }
    o.detail << dims(m1, m2) << " shuffle max " << worst << "/" << m1 + 2 * m2 + 18 << " slowest " << slowest << "s; ";
    if (m1 == 90) o.require(slowest < 30.0, "90x60 GRH took over 30 s");
  }
}

void c5(Outcome& o) {
  double sum = 0;
  SolverConfig cfg;
  cfg.matching = MatchingMode::kLba;
  cfg.refine = true;
  for (int s = 0; s < kSeeds; ++s) {
    const auto inst = make(90, 60, 1.0 / 3, static_cast<std::uint64_t>(s));
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto r = solve(inst, cfg);
    o.require(valid(inst, r.plan), "invalid refined plan");
    const auto m = compute_metrics(inst, r.plan);
    o.require(m.optimality_ratio.has_value(), "ratio undefined");
    sum += m.optimality_ratio.value_or(0);
  }
  const double mean = sum / kSeeds;
  o.detail << "mean makespan/lb " << mean << " (limit 2.0)";
  o.require(mean <= 2.0, "mean ratio above 2.0");
}

void c6(Outcome& o) {
  int worst = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto inst = make(45, 30, 2.0 / 9, static_cast<std::uint64_t>(s), 1, Pattern::kSortation);
    o.require(!inst.grid().obstacles().empty(), "sortation map without obstacles");
    const auto r = solve_grh(inst);
    const auto rep = validate_plan(inst, r.plan);
    o.require(rep.ok(), "invalid sortation plan: " + rep.summary(2));
    o.require(rep.count(ViolationKind::kObstacle) == 0, "obstacle occupied");
    worst = std::max(worst, r.trace.shuffle_makespan());
    o.require(r.trace.shuffle_makespan() <= 45 + 60 + 18, "sortation shuffle phase over bound");
    g_kept.push_back({"sortation 45x30", inst, r.plan});
  }
  o.detail << "shuffle max " << worst << "/" << 45 + 60 + 18;
}

void c7(Outcome& o) {
  int checked = 0;
  for (const auto& k : g_kept) {
    const auto r1 = refine(k.inst, k.plan);
    const auto r2 = refine(k.inst, r1.plan);
    const auto before = compute_metrics(k.inst, k.plan);
    const auto after = compute_metrics(k.inst, r1.plan);
    o.require(valid(k.inst, r1.plan), "refined plan invalid: " + k.tag);
    o.require(after.makespan <= before.makespan, "refine raised makespan: " + k.tag);
    o.require(after.soc <= before.soc, "refine raised SOC: " + k.tag);
    o.require(r2.plan.paths == r1.plan.paths, "refine not idempotent: " + k.tag);
    o.require(testing::visit_order(r1.plan) == testing::visit_order(k.plan), "visit order changed: " + k.tag);
    ++checked;
  }
  double reduction = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto inst = make(60, 60, 1.0 / 3, static_cast<std::uint64_t>(s));
    const auto r = solve_grh(inst);
    const auto rr = refine(inst, r.plan);
    reduction += 1.0 - static_cast<double>(rr.makespan_after) / rr.makespan_before;
  }
  reduction /= kSeeds;
  o.detail << checked << " plans checked; GRH 60x60 mean makespan reduction " << 100 * reduction << "% (need 5%)";
  o.require(checked > 0, "no plans to check");
  o.require(reduction >= 0.05, "reduction below 5%");
}

void c8(Outcome& o) {
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{18, 18}, {36, 24}}) {
    double hall = 0, lba = 0, plain = 0, refined = 0;
    for (int s = 0; s < kSeeds; ++s) {
      const auto inst = make(m1, m2, 1.0 / 3, static_cast<std::uint64_t>(s));
      SolverConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(s);
      const auto h = solve(inst, cfg);
      cfg.matching = MatchingMode::kLba;
      const auto l = solve(inst, cfg);
      cfg.matching = MatchingMode::kHall;
      cfg.refine = true;
      const auto hr = solve(inst, cfg);
      o.require(valid(inst, h.plan) && valid(inst, l.plan) && valid(inst, hr.plan), "invalid plan " + dims(m1, m2));
      hall += h.plan.makespan();
      lba += l.plan.makespan();
      plain += h.plan.makespan();
      refined += hr.plan.makespan();
    }
    o.detail << dims(m1, m2) << " hall " << hall / kSeeds << " lba " << lba / kSeeds << " unrefined "
             << plain / kSeeds << " refined " << refined / kSeeds << "; ";
    o.require(lba <= hall, "LBA mean above Hall mean " + dims(m1, m2));
    o.require(refined <= plain, "refined mean above unrefined mean " + dims(m1, m2));
  }
}

void c9(Outcome& o) {
  std::mt19937_64 rng(2024);
  int runs = 0, instances = 0, unreachable = 0;
  while (instances < 200) {
    const int m1 = 2 + static_cast<int>(rng() % 3), m2 = 2 + static_cast<int>(rng() % 3);
    GridSpec g(m1, m2);
    const int n = 1 + static_cast<int>(rng() % std::min(4, m1 * m2 - 1));
    const auto inst = testing::random_agents(g, n, rng);
    ++instances;
    // On small rings some permutations cannot be reached; then no solver may claim a plan.
    std::optional<OracleResult> opt;
    try {
      opt = optimal_makespan_labeled(inst);
    } catch (const InfeasibleError&) {
      ++unreachable;
    }
    std::vector<std::function<SolveResult()>> solvers{
        [&] { return solve_grm(inst, GrmVariant::kBlock2); },
        [&] { return solve_grm(inst, GrmVariant::kBlock4); },
        [&] { return solve_grh(inst); },
        [&] { return solve_grlm(inst); },
        [&] { return solve_arbitrary_half(inst); },
    };
    for (auto& run : solvers) {
      SolveResult r;
      try {
        r = run();
      } catch (const PreconditionError&) {
        continue;
      } catch (const CapacityError&) {
        continue;
      } catch (const InfeasibleError&) {
        o.require(!opt, "solver gave up on a reachable instance " + dims(m1, m2));
        continue;
      }
      ++runs;
      if (!opt) {
        o.require(!valid(inst, r.plan), "solver claims a plan for an unreachable instance");
        continue;
      }
      o.require(valid(inst, r.plan), "tiny plan invalid " + dims(m1, m2));
      o.require(r.plan.makespan() >= opt->makespan, "solver beat the optimum on " + dims(m1, m2));
      const auto rr = refine(inst, r.plan);
      o.require(rr.makespan_after >= opt->makespan, "refined plan beat the optimum on " + dims(m1, m2));
    }
  }
  int unlabeled = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m1 = 2 + static_cast<int>(rng() % 3), m2 = 2 + static_cast<int>(rng() % 3);
    GridSpec g(m1, m2);
    const int n = 1 + static_cast<int>(rng() % std::min(4, m1 * m2 - 1));
    const auto inst = testing::random_agents(g, n, rng);
    std::vector<VertexId> s, t;
    for (const auto& v : inst.starts()) s.push_back(g.id(v));
    for (const auto& v : inst.goals()) t.push_back(g.id(v));
    const int flow = unlabeled_route(g, s, t).makespan;
    const int best = optimal_makespan_unlabeled(g, inst.starts(), inst.goals());
    o.require(flow == best, "unlabeled horizon " + std::to_string(flow) + " vs optimum " + std::to_string(best));
    ++unlabeled;
  }
  o.detail << instances << " labeled instances (" << unreachable << " unreachable), " << runs << " solver runs; " << unlabeled << " unlabeled instances";
  o.require(runs >= 200, "too few applicable solver runs");
}

void c10(Outcome& o) {
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{16, 16}, {32, 16}}) {
    int worst_over = std::numeric_limits<int>::min();
    for (int s = 0; s < kSeeds; ++s) {
      const auto inst = make(m1, m2, 0.5, static_cast<std::uint64_t>(s));
      const auto r = solve_grlm(inst);
      o.require(valid(inst, r.plan), "invalid GRLM plan " + dims(m1, m2));
      // Row phases merge along bands of length m2, the column phase along m1.
      for (const auto& p : r.trace.phases) {
        int len = 0;
        if (p.name == "phase-1" || p.name == "phase-3") len = m2;
        if (p.name == "phase-2") len = m1;
        if (len == 0) continue;
        worst_over = std::max(worst_over, (p.end - p.begin) - linear_merge_bound(len));
        o.require(p.end - p.begin <= linear_merge_bound(len), p.name + " merge over bound " + dims(m1, m2));
      }
      g_kept.push_back({"grlm " + dims(m1, m2), inst, r.plan});
    }
    o.detail << dims(m1, m2) << " merge phases worst slack " << -worst_over << "; ";
  }
  // 0-1 principle: every bit string, ones moving to the right end, for all lengths up to 16.
  long long strings = 0;
  for (int m = 1; m <= 16; ++m) {
    GridSpec g(2, m);
    const auto band = LaneView::rows(g, 0, 2);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<LinePlacement> pl;
      const int ones = std::popcount(mask);
      int next_zero = 0, next_one = m - ones;
      for (int p = 0; p < m; ++p) {
        const bool one = (mask >> p) & 1;
        pl.push_back({p, p, one ? next_one++ : next_zero++});
      }
      const auto seg = linear_merge(g, band, pl);
      auto [inst, plan] = segment_as_plan(g, seg);
      bool ok = valid(inst, plan) && seg.duration <= linear_merge_bound(m);
      for (const auto& tr : seg.tracks) {
        const auto& want = pl[static_cast<std::size_t>(tr.agent)];
        ok = ok && tr.path.back() == band.at(0, want.dest);
      }
      o.require(ok, "0-1 sort failed at m=" + std::to_string(m) + " mask " + std::to_string(mask));
      ++strings;
    }
  }
  o.detail << strings << " bit strings sorted";
}

void c11(Outcome& o) {
  for (auto [m1, m2, m3] : std::vector<std::tuple<int, int, int>>{{12, 6, 6}, {24, 12, 6}}) {
    int worst = 0;
    const int bound = m1 + 2 * m2 + 2 * m3 + 24;
    for (int s = 0; s < kSeeds; ++s) {
      const auto inst = make(m1, m2, 1.0 / 3, static_cast<std::uint64_t>(s), m3);
      const auto r = solve_3d(inst, Base3d::kGrh);
      o.require(valid(inst, r.plan), "invalid 3D plan " + dims(m1, m2, m3));
      worst = std::max(worst, r.trace.shuffle_makespan());
      o.require(r.trace.shuffle_makespan() <= bound, "3D shuffle phase over bound " + dims(m1, m2, m3));
      g_kept.push_back({"grh3d " + dims(m1, m2, m3), inst, r.plan});
    }
    o.detail << dims(m1, m2, m3) << " shuffle max " << worst << "/" << bound << "; ";
  }
}

void c12(Outcome& o) {
  // Reproduced only through substitutes: no MILP gaps, no large-scale ratios, no high-probability
  // lower bounds. What remains measurable is the Manhattan lower bound against every plan.
  double worst = 0;
  for (const auto& k : g_kept) {
    const auto m = compute_metrics(k.inst, k.plan);
    o.require(m.manhattan_lb <= m.makespan, "makespan below the Manhattan bound: " + k.tag);
    if (m.optimality_ratio) worst = std::max(worst, *m.optimality_ratio);
  }
  o.detail << "substituted: MILP optimality gaps, large-scale ratios, high-probability bounds; "
           << g_kept.size() << " plans have lb <= makespan, largest ratio " << worst;
  o.require(!g_kept.empty(), "no plans collected");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
      {"swap tables generated from scratch hit 7/6/6/7/6", c1},
      {"single adjacent exchange on 2x3 takes 3 steps", c2},
      {"GRM block-2 and block-4 makespan bounds", c3},
      {"GRH shuffle-phase bound m1+2m2+18", c4},
      {"GRH with LBA and refinement, mean ratio <= 2.0 on 90x60", c5},
      {"sortation layout 45x30 at 2/9 density", c6},
      {"refinement properties and 5% reduction on 60x60", c7},
      {"LBA <= Hall and refined <= unrefined on average", c8},
      {"solvers never beat the exhaustive optimum; flow horizon is optimal", c9},
      {"GRLM plans, per-band merge bound, exhaustive 0-1 sorting", c10},
      {"3D GRH shuffle-phase bound m1+2m2+2m3+24", c11},
      {"substituted claims and lower-bound report", c12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu: %s  %s [%.1fs]\n    %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
