#include <algorithm>
#include <climits>
#include <string>
#include <utility>

#include "engine.hpp"
#include "grmapf/matching.hpp"

namespace grmapf::detail {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

// ---- timeline ---------------------------------------------------------------------------------

Timeline::Timeline(const std::vector<VertexId>& start) : pos_(start) {
  paths_.reserve(start.size());
  for (VertexId v : start) paths_.push_back({v});
}

void Timeline::apply(const Segment& seg, const std::string& name, std::vector<int> expected_cell) {
  const int n = size();
  std::vector<char> seen(idx(n), 0);
  for (const auto& tr : seg.tracks) {
    if (tr.agent < 0 || tr.agent >= n) throw ScheduleError(name + ": track for unknown agent");
    if (seen[idx(tr.agent)]) throw ScheduleError(name + ": agent " + std::to_string(tr.agent) + " tracked twice");
    seen[idx(tr.agent)] = 1;
    if (tr.path.empty() || tr.path.front() != pos_[idx(tr.agent)]) {
      throw ScheduleError(name + ": track of agent " + std::to_string(tr.agent) + " does not start at its position");
    }
    if (static_cast<int>(tr.path.size()) > seg.duration + 1) throw ScheduleError(name + ": track longer than segment");
  }
  for (int i = 0; i < n; ++i) {
    auto& p = paths_[idx(i)];
    p.resize(p.size() + idx(seg.duration), pos_[idx(i)]);
  }
  for (const auto& tr : seg.tracks) {
    auto& p = paths_[idx(tr.agent)];
    const std::size_t base = idx(now_);
    for (std::size_t t = 1; t <= idx(seg.duration); ++t) p[base + t] = tr.path[std::min(t, tr.path.size() - 1)];
    pos_[idx(tr.agent)] = tr.path.back();
  }
  trace_.phases.push_back({name, now_, now_ + seg.duration, std::move(expected_cell)});
  now_ += seg.duration;
}

// ---- GRA assignment ---------------------------------------------------------------------------

namespace {

struct Candidate {
  std::vector<int> group;
  int first = 0;
  int last = 0;
};

// Matchings fix how many agents of each (colour,row) pair go to each group. Which agent takes
// which group is free inside the pair; an order-preserving bottleneck subset matching on start
// positions chooses it.
Candidate repair(const MatchingSet& set, const std::vector<int>& group_of_matching, int rows,
                 const std::vector<int>& row, const std::vector<int>& color, const std::vector<int>& start,
                 const std::vector<int>& goal) {
  const std::size_t keys = idx(rows) * idx(rows);
  std::vector<std::vector<int>> pool(keys), members(keys);
  for (std::size_t k = 0; k < set.size(); ++k) {
    for (const auto& e : set.matchings[k].edges) {
      pool[idx(e.left) * idx(rows) + idx(e.right)].push_back(group_of_matching[k]);
    }
  }
  for (std::size_t i = 0; i < row.size(); ++i) members[idx(color[i]) * idx(rows) + idx(row[i])].push_back(static_cast<int>(i));

  Candidate out;
  out.group.assign(row.size(), -1);
  for (std::size_t key = 0; key < keys; ++key) {
    auto& a = members[key];
    auto& g = pool[key];
    if (a.empty()) continue;
    std::sort(a.begin(), a.end(), [&](int x, int y) { return start[idx(x)] < start[idx(y)]; });
    std::sort(g.begin(), g.end());
    const int A = static_cast<int>(a.size());
    const int G = static_cast<int>(g.size());
    if (G < A) throw ScheduleError("matching pool smaller than its agent class");
    // f[i][j]: best bottleneck placing the first i agents into the first j pool entries.
    std::vector<std::vector<int>> f(idx(A + 1), std::vector<int>(idx(G + 1), INT_MAX));
    std::fill(f[0].begin(), f[0].end(), 0);
    for (int i = 1; i <= A; ++i) {
      for (int j = i; j <= G; ++j) {
        int best = f[idx(i)][idx(j - 1)];
        const int prev = f[idx(i - 1)][idx(j - 1)];
        if (prev != INT_MAX) best = std::min(best, std::max(prev, std::abs(start[idx(a[idx(i - 1)])] - g[idx(j - 1)])));
        f[idx(i)][idx(j)] = best;
      }
    }
    for (int i = A, j = G; i > 0; --j) {
      if (f[idx(i)][idx(j)] == f[idx(i)][idx(j - 1)]) continue;
      out.group[idx(a[idx(i - 1)])] = g[idx(j - 1)];
      --i;
    }
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    out.first = std::max(out.first, std::abs(out.group[i] - start[i]));
    out.last = std::max(out.last, std::abs(out.group[i] - goal[i]));
  }
  return out;
}

}  // namespace

GraResult gra_assign(int rows, int groups, int group_size, const std::vector<int>& row,
                     const std::vector<int>& color, const std::vector<int>& start,
                     const std::vector<int>& goal, MatchingMode mode, std::uint64_t seed) {
  GraResult res;
  if (row.empty()) return res;
  const int d = groups * group_size;
  const auto graph = build_color_row_graph(rows, d, color, row, true);
  const auto hall = decompose_regular_multigraph(graph, seed);
  std::vector<int> identity(idx(d));
  for (int k = 0; k < d; ++k) identity[idx(k)] = k / group_size;

  std::vector<Candidate> cands;
  cands.push_back(repair(hall, identity, rows, row, color, start, goal));
  if (mode == MatchingMode::kLba) {
    const AgentColumns ac{color, row, start, goal};
    for (int lam : {1, 0}) cands.push_back(repair(hall, lba_assign_matchings(hall, ac, lam, group_size), rows, row, color, start, goal));
    for (int lam : {1, 0}) {
      const auto greedy = lba_greedy_per_row(rows, d, ac, lam, group_size);
      cands.push_back(repair(greedy, identity, rows, row, color, start, goal));
      for (int lam2 : {1, 0}) {
        cands.push_back(repair(greedy, lba_assign_matchings(greedy, ac, lam2, group_size), rows, row, color, start, goal));
      }
    }
  }
  // Never worse than Hall in the first phase; then shortest outer phases.
  const int hall_first = cands.front().first;
  const Candidate* best = &cands.front();
  for (const auto& c : cands) {
    if (c.first > hall_first) continue;
    const auto key = std::pair(c.first + c.last, c.first);
    if (key < std::pair(best->first + best->last, best->first)) best = &c;
  }
  res.group = best->group;
  res.first = best->first;
  res.last = best->last;
  return res;
}

// ---- band phases ------------------------------------------------------------------------------

std::vector<int> strip_heights(int total, int block) {
  if (total < 2) throw PreconditionError("full-density shuffles need at least two lines");
  std::vector<int> h;
  if (block == 4) {
    h.assign(idx(total / 2), 2);
    if (total % 2 == 1) h.back() = 3;
    return h;
  }
  if (total == 2) return {2};
  if (total == 5) return {3, 2};
  const int q = total / 3;
  const int r = total % 3;
  if (r == 0) h.assign(idx(q), 3);
  if (r == 1) {
    h.assign(idx(q - 1), 3);
    h.push_back(4);
  }
  if (r == 2) {
    h.assign(idx(q - 2), 3);
    h.push_back(4);
    h.push_back(4);
  }
  return h;
}

namespace {

std::vector<int> occupancy(const GridSpec& g, const std::vector<VertexId>& pos) {
  std::vector<int> occ(idx(g.size()), -1);
  for (std::size_t i = 0; i < pos.size(); ++i) occ[idx(pos[i])] = static_cast<int>(i);
  return occ;
}

// Full strip: every vertex holds an agent whose target pos along the line is given by target().
template <class Target>
StripShuffleResult full_strip(const Ctx& ctx, const LaneView& view, const std::vector<int>& occ, Target target) {
  std::vector<std::vector<int>> occupant(idx(view.lanes), std::vector<int>(idx(view.length)));
  std::vector<std::vector<int>> dest = occupant;
  for (int l = 0; l < view.lanes; ++l) {
    for (int p = 0; p < view.length; ++p) {
      const int a = occ[idx(view.at(l, p))];
      if (a < 0) throw ScheduleError("full-density strip has an empty vertex");
      occupant[idx(l)][idx(p)] = a;
      dest[idx(l)][idx(p)] = target(a);
    }
  }
  return parallel_row_shuffle_full(view, occupant, dest, ctx.grm_block);
}

}  // namespace

void run_band_phase(const Ctx& ctx, Timeline& tl, Axis axis, const std::vector<int>& dest_cell,
                    const std::vector<VertexId>& exact, const std::string& name) {
  const GridSpec& g = ctx.grid;
  const CellPattern& P = ctx.pattern;
  const int n = tl.size();
  const bool row = axis == Axis::kRow;
  const int nb = row ? P.cell_rows() : P.cell_cols();
  const int along_count = row ? P.cell_cols() : P.cell_rows();
  const int keys = nb * P.layers();
  auto has_exact = [&](int i) { return !exact.empty() && exact[idx(i)] != kNoVertex; };

  std::vector<char> active(idx(keys), 0);
  std::vector<std::vector<int>> members(idx(keys));
  std::vector<int> expected(idx(n));
  for (int i = 0; i < n; ++i) {
    const int c = P.cell_of(g.at(tl.pos()[idx(i)]));
    if (c < 0) throw ScheduleError(name + ": agent " + std::to_string(i) + " is outside the cell area");
    const int band = row ? P.cell_row(c) : P.cell_col(c);
    const int along = row ? P.cell_col(c) : P.cell_row(c);
    const int z = P.cell_layer(c);
    const int key = z * nb + band;
    const int d = dest_cell[idx(i)];
    if (d < 0 || d >= along_count) throw ScheduleError(name + ": destination cell out of range");
    members[idx(key)].push_back(i);
    expected[idx(i)] = row ? P.cell_index(band, d, z) : P.cell_index(d, band, z);
    if (d != along || (has_exact(i) && exact[idx(i)] != tl.pos()[idx(i)])) active[idx(key)] = 1;
  }

  if (ctx.kind != Kind::kFull) {
    // Only bands that move are re-centred; idle bands keep their slots.
    std::vector<int> cells;
    for (int key = 0; key < keys; ++key) {
      if (!active[idx(key)]) continue;
      const int z = key / nb;
      const int band = key % nb;
      for (int j = 0; j < along_count; ++j) cells.push_back(row ? P.cell_index(band, j, z) : P.cell_index(j, band, z));
    }
    if (!cells.empty()) {
      const auto o = row ? Orientation::kHorizontal : Orientation::kVertical;
      tl.apply(center_balanced(g, P, tl.pos(), o, cells), name + "/center");
    }
  }

  const auto& pos = tl.pos();
  std::vector<BandPlan> bands;
  if (ctx.kind == Kind::kFull) {
    const auto occ = occupancy(g, pos);
    const int total = row ? g.rows() : g.cols();
    for (int z = 0; z < g.layers(); ++z) {
      int x0 = 0;
      for (int h : strip_heights(total, ctx.grm_block)) {
        bool any = false;
        for (int l = x0; l < x0 + h; ++l) any = any || active[idx(z * nb + l)];
        if (any) {
          const LaneView view = row ? LaneView::rows(g, x0, h, z) : LaneView::cols(g, x0, h, z);
          auto r = full_strip(ctx, view, occ, [&](int a) { return dest_cell[idx(a)]; });
          bands.push_back({view.vertices(), std::move(r.segment)});
        }
        x0 += h;
      }
    }
  } else {
    const int k = P.cell_size();
    for (int key = 0; key < keys; ++key) {
      if (!active[idx(key)]) continue;
      const int z = key / nb;
      const int band = key % nb;
      const LaneView view = row ? LaneView::rows(g, k * band, k, z) : LaneView::cols(g, k * band, k, z);
      const int home_lane = ctx.kind == Kind::kHighway ? 1 : 0;
      auto along_of = [&](VertexId id) {
        const Vertex v = g.at(id);
        return row ? v.y : v.x;
      };
      for (int i : members[idx(key)]) {
        const Vertex v = g.at(pos[idx(i)]);
        if ((row ? v.x : v.y) != k * band + home_lane) {
          throw ScheduleError(name + ": agent " + std::to_string(i) + " is not on its band's home lane");
        }
      }
      if (ctx.kind == Kind::kHighway) {
        std::vector<CellBound> cb;
        for (int i : members[idx(key)]) {
          cb.push_back({i, along_of(pos[idx(i)]), dest_cell[idx(i)], has_exact(i) ? along_of(exact[idx(i)]) : -1});
        }
        bands.push_back({view.vertices(), highway_shuffle(g, view, 3, cb)});
      } else {
        // Exact targets first, agents already home keep their slot, the rest fill in order.
        std::vector<char> taken(idx(view.length), 0);
        std::vector<int> dest(idx(n), -1);
        const auto& mem = members[idx(key)];
        for (int i : mem) {
          if (has_exact(i)) {
            dest[idx(i)] = along_of(exact[idx(i)]);
            taken[idx(dest[idx(i)])] = 1;
          }
        }
        for (int i : mem) {
          const int p = along_of(pos[idx(i)]);
          if (dest[idx(i)] < 0 && p / 2 == dest_cell[idx(i)] && !taken[idx(p)]) {
            dest[idx(i)] = p;
            taken[idx(p)] = 1;
          }
        }
        std::vector<int> rest;
        for (int i : mem) {
          if (dest[idx(i)] < 0) rest.push_back(i);
        }
        std::sort(rest.begin(), rest.end(), [&](int a, int b) { return along_of(pos[idx(a)]) < along_of(pos[idx(b)]); });
        for (int i : rest) {
          const int c = dest_cell[idx(i)];
          int p = 2 * c;
          if (taken[idx(p)]) ++p;
          if (taken[idx(p)]) throw CapacityError(name + ": cell " + std::to_string(c) + " of the band is over capacity", c);
          dest[idx(i)] = p;
          taken[idx(p)] = 1;
        }
        std::vector<LinePlacement> pl;
        for (int i : mem) pl.push_back({i, along_of(pos[idx(i)]), dest[idx(i)]});
        bands.push_back({view.vertices(), linear_merge(g, view, pl)});
      }
    }
  }
  tl.apply(compose_parallel_bands(std::move(bands)), name, expected);

  for (int i = 0; i < n; ++i) {
    const VertexId p = tl.pos()[idx(i)];
    if (P.cell_of(g.at(p)) != expected[idx(i)] || (has_exact(i) && exact[idx(i)] != p)) {
      throw ScheduleError(name + ": agent " + std::to_string(i) + " missed its target");
    }
  }
}

// ---- pillar phases ----------------------------------------------------------------------------

std::vector<int> pillar_colors(const Ctx& ctx, const std::vector<int>& pillar,
                               const std::vector<int>& src_level, const std::vector<int>& dst_level) {
  const CellPattern& P = ctx.pattern;
  const int pillars = P.cell_rows() * P.cell_cols();
  std::vector<std::vector<int>> members(idx(pillars));
  for (std::size_t i = 0; i < pillar.size(); ++i) members[idx(pillar[i])].push_back(static_cast<int>(i));
  std::vector<int> color(pillar.size(), -1);
  for (const auto& mem : members) {
    if (mem.empty()) continue;
    std::vector<int> src, dst;
    for (int i : mem) {
      src.push_back(src_level[idx(i)]);
      dst.push_back(dst_level[idx(i)]);
    }
    const auto graph = build_color_row_graph(P.layers(), P.capacity(), dst, src, true);
    const auto set = decompose_regular_multigraph(graph);
    for (std::size_t k = 0; k < set.size(); ++k) {
      for (const auto& e : set.matchings[k].edges) {
        if (e.payload != kVirtualAgent) color[idx(mem[idx(e.payload)])] = static_cast<int>(k);
      }
    }
  }
  return color;
}

void run_pillar_phase(const Ctx& ctx, Timeline& tl, const std::vector<int>& dest_level,
                      const std::vector<int>& colors, const std::vector<VertexId>& exact,
                      const std::string& name) {
  const GridSpec& g = ctx.grid;
  const CellPattern& P = ctx.pattern;
  const int n = tl.size();
  const int m3 = g.layers();

  if (ctx.kind == Kind::kFull) {
    const auto occ = occupancy(g, tl.pos());
    std::vector<BandPlan> bands;
    for (int x = 0; x < g.rows(); ++x) {
      int y0 = 0;
      for (int h : strip_heights(g.cols(), ctx.grm_block)) {
        const LaneView view{g.id(x, y0, 0), g.stride_y(), 1, h, m3};
        bool any = false;
        for (VertexId v : view.vertices()) {
          const int a = occ[idx(v)];
          if (a >= 0 && dest_level[idx(a)] != g.at(v).z) any = true;
        }
        if (any) {
          auto r = full_strip(ctx, view, occ, [&](int a) { return dest_level[idx(a)]; });
          bands.push_back({view.vertices(), std::move(r.segment)});
        }
        y0 += h;
      }
    }
    tl.apply(compose_parallel_bands(std::move(bands)), name);
    for (int i = 0; i < n; ++i) {
      if (g.at(tl.pos()[idx(i)]).z != dest_level[idx(i)]) throw ScheduleError(name + ": agent missed its level");
    }
    return;
  }

  const int pillars = P.cell_rows() * P.cell_cols();
  auto pillar_of = [&](int c) { return P.cell_row(c) * P.cell_cols() + P.cell_col(c); };
  std::vector<std::vector<int>> members(idx(pillars));
  std::vector<char> active(idx(pillars), 0);
  std::vector<int> expected(idx(n));
  for (int i = 0; i < n; ++i) {
    const Vertex v = g.at(tl.pos()[idx(i)]);
    const int c = P.cell_of(v);
    if (c < 0) throw ScheduleError(name + ": agent outside the cell area");
    const int p = pillar_of(c);
    members[idx(p)].push_back(i);
    expected[idx(i)] = P.cell_index(P.cell_row(c), P.cell_col(c), dest_level[idx(i)]);
    if (dest_level[idx(i)] != v.z) active[idx(p)] = 1;
  }

  // Park each moving pillar's agents on the slot of their colour.
  std::vector<CellMove> moves;
  for (int p = 0; p < pillars; ++p) {
    if (!active[idx(p)]) continue;
    for (int i : members[idx(p)]) {
      const VertexId from = tl.pos()[idx(i)];
      const int c = P.cell_of(g.at(from));
      moves.push_back({i, from, g.id(P.slots(c, Orientation::kHorizontal)[idx(colors[idx(i)])])});
    }
  }
  if (!moves.empty()) tl.apply(arrange_within_cells(g, P, moves), name + "/arrange");

  const auto& pos = tl.pos();
  std::vector<BandPlan> bands;
  const int k = P.cell_size();
  for (int p = 0; p < pillars; ++p) {
    if (!active[idx(p)]) continue;
    const int a = p / P.cell_cols();
    const int b = p % P.cell_cols();
    const auto slots = P.slots(P.cell_index(a, b, 0), Orientation::kHorizontal);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      std::vector<LinePlacement> pl;
      for (int i : members[idx(p)]) {
        if (colors[idx(i)] == static_cast<int>(s)) pl.push_back({i, g.at(pos[idx(i)]).z, dest_level[idx(i)]});
      }
      if (pl.empty()) continue;
      // Lane 0 sits on the cell's top row, so the slot row is lane 1 (highway) or lane 0 (merge).
      const LaneView view{g.id(k * a, slots[s].y, 0), g.stride_x(), 1, k, m3};
      Segment seg = ctx.kind == Kind::kHighway ? highway_route(g, view, pl) : linear_merge(g, view, pl);
      bands.push_back({view.vertices(), std::move(seg)});
    }
  }
  tl.apply(compose_parallel_bands(std::move(bands)), name, expected);
  for (int i = 0; i < n; ++i) {
    if (P.cell_of(g.at(tl.pos()[idx(i)])) != expected[idx(i)]) throw ScheduleError(name + ": agent missed its level");
  }

  if (exact.empty()) return;
  moves.clear();
  std::vector<char> touched(idx(P.cell_count()), 0);
  for (int i = 0; i < n; ++i) {
    if (exact[idx(i)] != tl.pos()[idx(i)]) touched[idx(P.cell_of(g.at(tl.pos()[idx(i)])))] = 1;
  }
  for (int i = 0; i < n; ++i) {
    if (touched[idx(P.cell_of(g.at(tl.pos()[idx(i)])))]) moves.push_back({i, tl.pos()[idx(i)], exact[idx(i)]});
  }
  if (!moves.empty()) tl.apply(arrange_within_cells(g, P, moves), name + "/settle");
}

}  // namespace grmapf::detail
