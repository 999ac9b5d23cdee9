#include "grmapf/solvers.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "engine.hpp"
#include "grmapf/refine.hpp"

namespace grmapf {

using namespace detail;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kGrm2: return "grm2";
    case Algorithm::kGrm4: return "grm4";
    case Algorithm::kGrh: return "grh";
    case Algorithm::kGrlm: return "grlm";
    case Algorithm::kArbitraryHalf: return "arbitrary_half";
  }
  return "?";
}

std::string to_string(MatchingMode m) { return m == MatchingMode::kHall ? "hall" : "lba"; }

Algorithm parse_algorithm(const std::string& s) {
  for (auto a : {Algorithm::kGrm2, Algorithm::kGrm4, Algorithm::kGrh, Algorithm::kGrlm, Algorithm::kArbitraryHalf}) {
    if (to_string(a) == s) return a;
  }
  if (s == "arbitrary-half") return Algorithm::kArbitraryHalf;
  throw PreconditionError("unknown algorithm '" + s + "'");
}

MatchingMode parse_matching(const std::string& s) {
  if (s == "hall") return MatchingMode::kHall;
  if (s == "lba") return MatchingMode::kLba;
  throw PreconditionError("unknown matching mode '" + s + "'");
}

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct Pipeline {
  Kind kind = Kind::kHighway;
  int grm_block = 4;
  bool column_first = false;
  MatchingMode matching = MatchingMode::kHall;
  std::uint64_t seed = 0;
  int unlabeled_limit = -1;
};

int cell_size_of(Kind k) { return k == Kind::kHighway ? 3 : k == Kind::kMerge ? 2 : 1; }

Segment as_segment(const UnlabeledPlan& up, bool reversed) {
  Segment s;
  s.duration = up.makespan;
  for (std::size_t i = 0; i < up.paths.size(); ++i) {
    AgentTrack tr{static_cast<int>(i), up.paths[i]};
    if (reversed) std::reverse(tr.path.begin(), tr.path.end());
    s.tracks.push_back(std::move(tr));
  }
  return s;
}

std::vector<int> cells_of(const Ctx& ctx, const std::vector<VertexId>& vs) {
  std::vector<int> out;
  for (VertexId v : vs) out.push_back(ctx.pattern.cell_of(ctx.grid.at(v)));
  return out;
}

struct Endpoints {
  std::vector<VertexId> start, goal;
  int real = 0;
};

// Full density is reached by adding fillers on the empty vertices; they are dropped at the end.
Endpoints endpoints(const Instance& inst, bool pad) {
  const GridSpec& g = inst.grid();
  Endpoints e;
  e.real = inst.size();
  for (const auto& v : inst.starts()) e.start.push_back(g.id(v));
  for (const auto& v : inst.goals()) e.goal.push_back(g.id(v));
  if (!pad) return e;
  const std::set<VertexId> s(e.start.begin(), e.start.end()), t(e.goal.begin(), e.goal.end());
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.blocked(v)) continue;
    if (!s.count(v)) e.start.push_back(v);
    if (!t.count(v)) e.goal.push_back(v);
  }
  return e;
}

SolveResult finish(const Timeline& tl, const Ctx& ctx, int real) {
  SolveResult r;
  for (int i = 0; i < real; ++i) {
    std::vector<Vertex> p;
    p.reserve(tl.paths()[idx(i)].size());
    for (VertexId v : tl.paths()[idx(i)]) p.push_back(ctx.grid.at(v));
    r.plan.paths.push_back(std::move(p));
  }
  trim_trailing_rests(r.plan);
  r.synchronized_makespan = r.plan.makespan();
  return r;
}

Ctx make_ctx(const GridSpec& g, Kind kind, int block) {
  Ctx ctx{g, CellPattern::make(g, cell_size_of(kind)), kind, block};
  if (ctx.pattern.cell_rows() == 0 || ctx.pattern.cell_cols() == 0) {
    throw PreconditionError("grid smaller than one cell");
  }
  return ctx;
}

void check_capacity(const Ctx& ctx, int n) {
  const long long cap = static_cast<long long>(ctx.pattern.capacity()) * ctx.pattern.cell_count();
  if (n > cap) {
    throw CapacityError(std::to_string(n) + " agents exceed the cell pattern capacity of " + std::to_string(cap), -1);
  }
}

// Returns the final slot per agent and the reversed goal-side plan.
struct GoalSide {
  std::vector<VertexId> slot;
  UnlabeledPlan plan;
};

GoalSide goal_side(const Ctx& ctx, const Endpoints& e, Orientation o, int limit) {
  GoalSide gs;
  if (ctx.kind == Kind::kFull) {
    gs.slot = e.goal;
    return gs;
  }
  const auto bt = balanced_targets(ctx.grid, e.goal, ctx.pattern, o);
  gs.plan = unlabeled_route(ctx.grid, e.goal, bt.target_of_agent, limit);
  for (const auto& p : gs.plan.paths) gs.slot.push_back(p.back());
  return gs;
}

void unlabeled_in(const Ctx& ctx, Timeline& tl, const Endpoints& e, Orientation o, int limit) {
  if (ctx.kind == Kind::kFull) return;
  const auto bt = balanced_targets(ctx.grid, e.start, ctx.pattern, o);
  const auto up = unlabeled_route(ctx.grid, e.start, bt.target_of_agent, limit);
  std::vector<VertexId> ends;
  for (const auto& p : up.paths) ends.push_back(p.back());
  tl.apply(as_segment(up, false), "unlabeled-in", cells_of(ctx, ends));
}

void unlabeled_out(const Ctx& ctx, Timeline& tl, const GoalSide& gs, const Endpoints& e) {
  if (ctx.kind == Kind::kFull) return;
  tl.apply(as_segment(gs.plan, true), "unlabeled-out", cells_of(ctx, e.goal));
}

SolveResult run_2d(const Instance& inst, const Pipeline& pl) {
  const GridSpec& g = inst.grid();
  if (g.is_3d()) throw PreconditionError("2D solver given a 3D grid");
  const Ctx ctx = make_ctx(g, pl.kind, pl.grm_block);
  const CellPattern& P = ctx.pattern;
  const bool full = pl.kind == Kind::kFull;
  if (full) {
    if (!g.obstacles().empty()) throw PreconditionError("full-density solver does not support obstacles");
    if (g.rows() < 3 || g.cols() < 3) throw PreconditionError("full-density solver needs at least 3 rows and 3 columns");
  }
  check_capacity(ctx, inst.size());
  const Endpoints e = endpoints(inst, full);
  Timeline tl(e.start);
  const Orientation o = pl.column_first ? Orientation::kVertical : Orientation::kHorizontal;

  unlabeled_in(ctx, tl, e, o, pl.unlabeled_limit);
  const GoalSide gs = goal_side(ctx, e, o, pl.unlabeled_limit);

  const int n = tl.size();
  const bool cf = pl.column_first;
  std::vector<int> row(idx(n)), color(idx(n)), start(idx(n)), goal(idx(n));
  for (int i = 0; i < n; ++i) {
    const int c = P.cell_of(g.at(tl.pos()[idx(i)]));
    const int f = P.cell_of(g.at(gs.slot[idx(i)]));
    row[idx(i)] = cf ? P.cell_col(c) : P.cell_row(c);
    color[idx(i)] = cf ? P.cell_col(f) : P.cell_row(f);
    start[idx(i)] = cf ? P.cell_row(c) : P.cell_col(c);
    goal[idx(i)] = cf ? P.cell_row(f) : P.cell_col(f);
  }
  const int rows = cf ? P.cell_cols() : P.cell_rows();
  const int groups = cf ? P.cell_rows() : P.cell_cols();
  const auto gra = gra_assign(rows, groups, P.capacity(), row, color, start, goal, pl.matching, pl.seed);

  const Axis first = cf ? Axis::kCol : Axis::kRow;
  const Axis second = cf ? Axis::kRow : Axis::kCol;
  tl.trace().shuffle_begin = tl.now();
  run_band_phase(ctx, tl, first, gra.group, {}, "phase-1");
  run_band_phase(ctx, tl, second, color, {}, "phase-2");
  run_band_phase(ctx, tl, first, goal, gs.slot, "phase-3");
  tl.trace().shuffle_end = tl.now();
  unlabeled_out(ctx, tl, gs, e);

  tl.trace().first_phase_bottleneck = gra.first;
  tl.trace().last_phase_bottleneck = gra.last;
  tl.trace().cell_size = P.cell_size();
  SolveResult r = finish(tl, ctx, e.real);
  r.trace = tl.trace();
  return r;
}

SolveResult run_3d(const Instance& inst, const Pipeline& pl) {
  const GridSpec& g = inst.grid();
  if (!g.obstacles().empty()) throw PreconditionError("3D solvers do not support obstacles");
  const Ctx ctx = make_ctx(g, pl.kind, pl.grm_block);
  const CellPattern& P = ctx.pattern;
  const bool full = pl.kind == Kind::kFull;
  if (full && (g.rows() < 3 || g.cols() < 3 || g.layers() < 3)) {
    throw PreconditionError("full-density 3D solver needs every dimension of at least 3");
  }
  if (g.layers() < 2) throw PreconditionError("3D solver needs at least two layers");
  check_capacity(ctx, inst.size());
  const Endpoints e = endpoints(inst, full);
  Timeline tl(e.start);
  const auto o = Orientation::kHorizontal;
  unlabeled_in(ctx, tl, e, o, pl.unlabeled_limit);
  const GoalSide gs = goal_side(ctx, e, o, pl.unlabeled_limit);

  const int n = tl.size();
  const int pillars = P.cell_rows() * P.cell_cols();
  auto pillar_of = [&](int c) { return P.cell_row(c) * P.cell_cols() + P.cell_col(c); };
  std::vector<int> row(idx(n)), color(idx(n)), start(idx(n)), goal(idx(n));
  for (int i = 0; i < n; ++i) {
    const int c = P.cell_of(g.at(tl.pos()[idx(i)]));
    const int f = P.cell_of(g.at(gs.slot[idx(i)]));
    row[idx(i)] = pillar_of(c);
    color[idx(i)] = pillar_of(f);
    start[idx(i)] = P.cell_layer(c);
    goal[idx(i)] = P.cell_layer(f);
  }
  const auto level = gra_assign(pillars, g.layers(), P.capacity(), row, color, start, goal, pl.matching, pl.seed);

  tl.trace().shuffle_begin = tl.now();
  std::vector<int> colors;
  if (!full) colors = pillar_colors(ctx, row, start, level.group);
  run_pillar_phase(ctx, tl, level.group, colors, {}, "z-shuffle");

  // Colours for the final z-shuffle fix the slot each agent must reach inside its goal pillar.
  std::vector<int> final_colors;
  std::vector<VertexId> xy_exact(idx(n));
  if (full) {
    for (int i = 0; i < n; ++i) {
      const Vertex s = g.at(gs.slot[idx(i)]);
      xy_exact[idx(i)] = g.id(s.x, s.y, level.group[idx(i)]);
    }
  } else {
    final_colors = pillar_colors(ctx, color, level.group, goal);
    for (int i = 0; i < n; ++i) {
      const int f = P.cell_of(g.at(gs.slot[idx(i)]));
      const int cell = P.cell_index(P.cell_row(f), P.cell_col(f), level.group[idx(i)]);
      xy_exact[idx(i)] = g.id(P.slots(cell, o)[idx(final_colors[idx(i)])]);
    }
  }

  // Per-plane GRA; planes are independent and run side by side.
  std::vector<int> xy_group(idx(n)), xy_color(idx(n)), xy_goal(idx(n));
  int first = 0, last = 0;
  for (int z = 0; z < g.layers(); ++z) {
    std::vector<int> ids, r, c, s, t;
    for (int i = 0; i < n; ++i) {
      const int cell = P.cell_of(g.at(tl.pos()[idx(i)]));
      if (P.cell_layer(cell) != z) continue;
      const int f = P.cell_of(g.at(gs.slot[idx(i)]));
      ids.push_back(i);
      r.push_back(P.cell_row(cell));
      c.push_back(P.cell_row(f));
      s.push_back(P.cell_col(cell));
      t.push_back(P.cell_col(f));
    }
    const auto gra = gra_assign(P.cell_rows(), P.cell_cols(), P.capacity(), r, c, s, t, pl.matching, pl.seed + static_cast<std::uint64_t>(z));
    first = std::max(first, gra.first);
    last = std::max(last, gra.last);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      xy_group[idx(ids[j])] = gra.group[j];
      xy_color[idx(ids[j])] = c[j];
      xy_goal[idx(ids[j])] = t[j];
    }
  }
  run_band_phase(ctx, tl, Axis::kRow, xy_group, {}, "phase-1");
  run_band_phase(ctx, tl, Axis::kCol, xy_color, {}, "phase-2");
  run_band_phase(ctx, tl, Axis::kRow, xy_goal, xy_exact, "phase-3");

  run_pillar_phase(ctx, tl, goal, final_colors, gs.slot, "z-fitting");
  tl.trace().shuffle_end = tl.now();
  unlabeled_out(ctx, tl, gs, e);

  tl.trace().first_phase_bottleneck = first;
  tl.trace().last_phase_bottleneck = last;
  tl.trace().cell_size = P.cell_size();
  SolveResult r = finish(tl, ctx, e.real);
  r.trace = tl.trace();
  return r;
}

SolveResult empty_result(const Instance& inst) {
  SolveResult r;
  r.plan.paths.assign(idx(inst.size()), {});
  return r;
}

Pipeline pipeline_of(const SolverConfig& c, Kind kind) {
  Pipeline p;
  p.kind = kind;
  p.column_first = c.column_first;
  p.matching = c.matching;
  p.seed = c.seed;
  return p;
}

}  // namespace

SolveResult solve_grm(const Instance& instance, GrmVariant variant, MatchingMode matching, std::uint64_t seed) {
  Pipeline p;
  p.kind = Kind::kFull;
  p.grm_block = variant == GrmVariant::kBlock2 ? 2 : 4;
  p.matching = matching;
  p.seed = seed;
  return instance.grid().is_3d() ? run_3d(instance, p) : run_2d(instance, p);
}

SolveResult solve_grh(const Instance& instance, const SolverConfig& config) {
  if (instance.size() == 0) return empty_result(instance);
  return run_2d(instance, pipeline_of(config, Kind::kHighway));
}

SolveResult solve_grlm(const Instance& instance, const SolverConfig& config) {
  const GridSpec& g = instance.grid();
  if (g.rows() % 2 != 0 || g.cols() % 2 != 0) throw PreconditionError("GRLM needs even grid dimensions");
  if (!g.obstacles().empty()) throw PreconditionError("GRLM does not support obstacles");
  if (instance.size() == 0) return empty_result(instance);
  return run_2d(instance, pipeline_of(config, Kind::kMerge));
}

SolveResult solve_arbitrary_half(const Instance& instance, const SolverConfig& config) {
  const GridSpec& g = instance.grid();
  if (g.is_3d()) throw PreconditionError("arbitrary-instance pipeline is 2D only");
  if (2LL * instance.size() > static_cast<long long>(g.rows()) * g.cols()) {
    throw CapacityError("more than half of the vertices are occupied", -1);
  }
  if (instance.size() == 0) return empty_result(instance);
  bool highway = false;
  try {
    const auto P = CellPattern::make(g, 3);
    highway = instance.size() <= P.capacity() * P.cell_count();
  } catch (const PreconditionError&) {
    highway = false;
  }
  Pipeline p = pipeline_of(config, highway ? Kind::kHighway : Kind::kMerge);
  p.unlabeled_limit = g.rows() + g.cols();
  if (!highway) {
    if (g.rows() % 2 != 0 || g.cols() % 2 != 0) throw PreconditionError("half-density fallback needs even grid dimensions");
    if (!g.obstacles().empty()) throw PreconditionError("half-density fallback does not support obstacles");
  }
  return run_2d(instance, p);
}

SolveResult solve_3d(const Instance& instance, Base3d base, const SolverConfig& config) {
  if (!instance.grid().is_3d()) throw PreconditionError("3D solver given a 2D grid");
  if (instance.size() == 0) return empty_result(instance);
  switch (base) {
    case Base3d::kGrm: {
      Pipeline p = pipeline_of(config, Kind::kFull);
      p.grm_block = config.algorithm == Algorithm::kGrm2 ? 2 : 4;
      return run_3d(instance, p);
    }
    case Base3d::kGrlm: {
      const GridSpec& g = instance.grid();
      if (g.rows() % 2 != 0 || g.cols() % 2 != 0) throw PreconditionError("GRLM needs even grid dimensions");
      return run_3d(instance, pipeline_of(config, Kind::kMerge));
    }
    case Base3d::kGrh: break;
  }
  return run_3d(instance, pipeline_of(config, Kind::kHighway));
}

SolveResult solve(const Instance& instance, const SolverConfig& config) {
  SolveResult r;
  if (config.dimension == 3 || instance.grid().is_3d()) {
    Base3d base = Base3d::kGrh;
    switch (config.algorithm) {
      case Algorithm::kGrm2:
      case Algorithm::kGrm4: base = Base3d::kGrm; break;
      case Algorithm::kGrlm: base = Base3d::kGrlm; break;
      case Algorithm::kGrh: base = Base3d::kGrh; break;
      case Algorithm::kArbitraryHalf: throw PreconditionError("arbitrary-instance pipeline is 2D only");
    }
    r = solve_3d(instance, base, config);
  } else {
    switch (config.algorithm) {
      case Algorithm::kGrm2: r = solve_grm(instance, GrmVariant::kBlock2, config.matching, config.seed); break;
      case Algorithm::kGrm4: r = solve_grm(instance, GrmVariant::kBlock4, config.matching, config.seed); break;
      case Algorithm::kGrh: r = solve_grh(instance, config); break;
      case Algorithm::kGrlm: r = solve_grlm(instance, config); break;
      case Algorithm::kArbitraryHalf: r = solve_arbitrary_half(instance, config); break;
    }
  }
  if (config.refine) r.plan = refine(instance, r.plan).plan;
  return r;
}

}  // namespace grmapf
