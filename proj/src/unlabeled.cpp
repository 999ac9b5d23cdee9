#include "grmapf/unlabeled.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <string>

#include "grmapf/matching.hpp"
#include "grmapf/oracle.hpp"

namespace grmapf {

// ---- cell pattern ---------------------------------------------------------------------------

CellPattern CellPattern::make(const GridSpec& grid, int k) {
  if (k != 1 && k != 2 && k != 3) throw PreconditionError("cell size must be 1, 2 or 3");
  CellPattern p;
  p.k_ = k;
  p.rows_ = grid.rows() / k;
  p.cols_ = grid.cols() / k;
  p.layers_ = grid.layers();
  if (p.rows_ == 0 || p.cols_ == 0) throw PreconditionError("grid smaller than one cell");
  for (const Vertex& o : grid.obstacles()) {
    if (o.x >= p.rows_ * k || o.y >= p.cols_ * k) continue;  // residual
    if (k == 3 && o.x % 3 == 1 && o.y % 3 == 1) {
      p.centers_excluded_ = true;
      continue;
    }
    throw PreconditionError("obstacle " + to_string(o) + " does not match the cell pattern");
  }
  p.capacity_ = k == 1 ? 1 : (k == 2 ? 2 : (p.centers_excluded_ ? 2 : 3));
  return p;
}

int CellPattern::cell_of(const Vertex& v) const {
  const int a = v.x / k_;
  const int b = v.y / k_;
  if (a >= rows_ || b >= cols_) return -1;
  return cell_index(a, b, v.z);
}

std::vector<Vertex> CellPattern::slots(int cell, Orientation o) const {
  const int x0 = cell_row(cell) * k_;
  const int y0 = cell_col(cell) * k_;
  const int z = cell_layer(cell);
  std::vector<Vertex> out;
  if (k_ == 1) return {Vertex{x0, y0, z}};
  const int mid = k_ == 3 ? 1 : 0;
  for (int j = 0; j < k_; ++j) {
    if (k_ == 3 && j == 1 && centers_excluded_) continue;
    if (o == Orientation::kHorizontal) {
      out.push_back(Vertex{x0 + mid, y0 + j, z});
    } else {
      out.push_back(Vertex{x0 + j, y0 + mid, z});
    }
  }
  return out;
}

std::vector<Vertex> CellPattern::cell_vertices(int cell) const {
  const int x0 = cell_row(cell) * k_;
  const int y0 = cell_col(cell) * k_;
  std::vector<Vertex> out;
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) out.push_back(Vertex{x0 + i, y0 + j, cell_layer(cell)});
  }
  return out;
}

std::vector<Vertex> CellPattern::all_slots(Orientation o) const {
  std::vector<Vertex> out;
  for (int c = 0; c < cell_count(); ++c) {
    for (const auto& v : slots(c, o)) out.push_back(v);
  }
  return out;
}

// ---- bottleneck assignment under Manhattan distance -----------------------------------------

namespace {

// Calls f(target index) for every target within Manhattan distance d of v.
template <class F>
void for_each_in_ball(const GridSpec& grid, const std::vector<int>& target_at, const Vertex& v, int d, F&& f) {
  const int x0 = std::max(0, v.x - d), x1 = std::min(grid.rows() - 1, v.x + d);
  for (int x = x0; x <= x1; ++x) {
    const int rx = d - std::abs(x - v.x);
    const int y0 = std::max(0, v.y - rx), y1 = std::min(grid.cols() - 1, v.y + rx);
    for (int y = y0; y <= y1; ++y) {
      const int ry = rx - std::abs(y - v.y);
      const int z0 = std::max(0, v.z - ry), z1 = std::min(grid.layers() - 1, v.z + ry);
      for (int z = z0; z <= z1; ++z) {
        const int t = target_at[static_cast<std::size_t>(grid.id(x, y, z))];
        if (t >= 0) f(t);
      }
    }
  }
}

}  // namespace

int manhattan_bottleneck(const GridSpec& grid, std::span<const VertexId> sources,
                         std::span<const VertexId> targets, std::vector<int>* assignment) {
  const int n = static_cast<int>(sources.size());
  const int m = static_cast<int>(targets.size());
  if (n > m) throw CapacityError("more agents than targets", n);
  std::vector<int> target_at(static_cast<std::size_t>(grid.size()), -1);
  for (int j = 0; j < m; ++j) target_at[static_cast<std::size_t>(targets[static_cast<std::size_t>(j)])] = j;
  std::vector<Vertex> src;
  for (VertexId v : sources) src.push_back(grid.at(v));

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  auto attempt = [&](int d, std::vector<int>* out) {
    for (int i = 0; i < n; ++i) {
      auto& a = adj[static_cast<std::size_t>(i)];
      a.clear();
      for_each_in_ball(grid, target_at, src[static_cast<std::size_t>(i)], d, [&](int t) { a.push_back(t); });
    }
    auto ml = max_bipartite_matching(n, m, adj);
    const bool ok = std::none_of(ml.begin(), ml.end(), [](int x) { return x < 0; });
    if (ok && out) *out = std::move(ml);
    return ok;
  };
  const int diam = grid.rows() + grid.cols() + grid.layers();
  int lo = 0;
  int hi = 1;
  if (attempt(0, nullptr)) {
    hi = 0;
  } else {
    while (!attempt(hi, nullptr)) {
      lo = hi + 1;
      if (hi >= diam) throw InfeasibleError("no assignment of agents to targets");
      hi = std::min(diam, hi * 2);
    }
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (attempt(mid, nullptr)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
  }
  if (assignment) attempt(hi, assignment);
  return hi;
}

BalancedTargets balanced_targets(const GridSpec& grid, std::span<const VertexId> agents,
                                 const CellPattern& pattern, Orientation o) {
  std::vector<VertexId> slots;
  for (const auto& v : pattern.all_slots(o)) slots.push_back(grid.id(v));
  if (agents.size() > slots.size()) {
    throw CapacityError("agent count exceeds the total slot capacity of the cell pattern",
                        static_cast<int>(agents.size()));
  }
  BalancedTargets out;
  std::vector<int> assignment;
  out.bottleneck = manhattan_bottleneck(grid, agents, slots, &assignment);
  for (int t : assignment) out.target_of_agent.push_back(slots[static_cast<std::size_t>(t)]);
  return out;
}

// ---- max flow over a time-expanded network --------------------------------------------------

namespace {

class Dinic {
 public:
  int add_node() {
    head_.push_back(-1);
    return static_cast<int>(head_.size()) - 1;
  }
  void add_edge(int u, int v, int c) {
    to_.push_back(v), cap_.push_back(c), next_.push_back(head_[static_cast<std::size_t>(u)]);
    head_[static_cast<std::size_t>(u)] = static_cast<int>(to_.size()) - 1;
    to_.push_back(u), cap_.push_back(0), next_.push_back(head_[static_cast<std::size_t>(v)]);
    head_[static_cast<std::size_t>(v)] = static_cast<int>(to_.size()) - 1;
  }
  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      it_ = head_;
      while (int f = dfs(s, t)) flow += f;
    }
    return flow;
  }
  // Forward arcs out of u that carry flow.
  template <class F>
  void for_each_used(int u, F&& f) const {
    for (int e = head_[static_cast<std::size_t>(u)]; e >= 0; e = next_[static_cast<std::size_t>(e)]) {
      if ((e & 1) == 0 && cap_[static_cast<std::size_t>(e)] == 0) f(to_[static_cast<std::size_t>(e)]);
    }
  }

 private:
  std::vector<int> head_, to_, cap_, next_, level_, it_;

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[static_cast<std::size_t>(u)]; e >= 0; e = next_[static_cast<std::size_t>(e)]) {
        const int v = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 && level_[static_cast<std::size_t>(v)] < 0) {
          level_[static_cast<std::size_t>(v)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  // Unit augmenting path search, iterative.
  int dfs(int s, int t) {
    std::vector<int> stack{s};
    std::vector<int> via;
    while (!stack.empty()) {
      const int u = stack.back();
      if (u == t) {
        for (int e : via) {
          cap_[static_cast<std::size_t>(e)] -= 1;
          cap_[static_cast<std::size_t>(e ^ 1)] += 1;
        }
        return 1;
      }
      bool advanced = false;
      for (int& e = it_[static_cast<std::size_t>(u)]; e >= 0; e = next_[static_cast<std::size_t>(e)]) {
        const int v = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 &&
            level_[static_cast<std::size_t>(v)] == level_[static_cast<std::size_t>(u)] + 1) {
          stack.push_back(v);
          via.push_back(e);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        level_[static_cast<std::size_t>(u)] = -1;
        stack.pop_back();
        if (!via.empty()) {
          const int e = via.back();
          via.pop_back();
          const int p = stack.back();
          it_[static_cast<std::size_t>(p)] = next_[static_cast<std::size_t>(e)];
        }
      }
    }
    return 0;
  }
};

std::vector<int> bfs_distance(const GridSpec& grid, std::span<const VertexId> seeds) {
  std::vector<int> d(static_cast<std::size_t>(grid.size()), std::numeric_limits<int>::max());
  std::queue<VertexId> q;
  for (VertexId s : seeds) {
    d[static_cast<std::size_t>(s)] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    grid.for_each_free_neighbor(u, [&](VertexId v) {
      if (d[static_cast<std::size_t>(v)] == std::numeric_limits<int>::max()) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    });
  }
  return d;
}

struct TimeExpanded {
  Dinic net;
  int source = 0, sink = 0;
  std::vector<int> in, out;  // (t * V + v) -> node or -1
  std::vector<int> node_vertex, node_time;  // for in-nodes; -1 otherwise
  int flow = 0;
};

void build_and_solve(TimeExpanded& te, const GridSpec& grid, std::span<const VertexId> sources,
                     std::span<const VertexId> targets, const std::vector<int>& ds,
                     const std::vector<int>& dt, int T) {
  const int V = grid.size();
  auto& net = te.net;
  te.source = net.add_node();
  te.sink = net.add_node();
  te.in.assign(static_cast<std::size_t>(T + 1) * V, -1);
  te.out.assign(static_cast<std::size_t>(T + 1) * V, -1);
  te.node_vertex.assign(2, -1);
  te.node_time.assign(2, -1);
  auto useful = [&](int v, int t) {
    return !grid.blocked(v) && ds[static_cast<std::size_t>(v)] <= t && dt[static_cast<std::size_t>(v)] <= T - t;
  };
  for (int t = 0; t <= T; ++t) {
    for (int v = 0; v < V; ++v) {
      if (!useful(v, t)) continue;
      const auto k = static_cast<std::size_t>(t) * V + v;
      te.in[k] = net.add_node();
      te.out[k] = net.add_node();
      te.node_vertex.push_back(v), te.node_time.push_back(t);
      te.node_vertex.push_back(-1), te.node_time.push_back(-1);
      net.add_edge(te.in[k], te.out[k], 1);
    }
  }
  auto in_at = [&](int v, int t) { return te.in[static_cast<std::size_t>(t) * V + v]; };
  auto out_at = [&](int v, int t) { return te.out[static_cast<std::size_t>(t) * V + v]; };
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u < V; ++u) {
      if (out_at(u, t) >= 0 && in_at(u, t + 1) >= 0) net.add_edge(out_at(u, t), in_at(u, t + 1), 1);
      grid.for_each_free_neighbor(u, [&](VertexId v) {
        if (v < u) return;  // one gadget per undirected edge
        const bool uv = out_at(u, t) >= 0 && in_at(v, t + 1) >= 0;
        const bool vu = out_at(v, t) >= 0 && in_at(u, t + 1) >= 0;
        if (!uv && !vu) return;
        const int g1 = net.add_node();
        const int g2 = net.add_node();
        te.node_vertex.push_back(-1), te.node_time.push_back(-1);
        te.node_vertex.push_back(-1), te.node_time.push_back(-1);
        net.add_edge(g1, g2, 1);
        if (uv) {
          net.add_edge(out_at(u, t), g1, 1);
          net.add_edge(g2, in_at(v, t + 1), 1);
        }
        if (vu) {
          net.add_edge(out_at(v, t), g1, 1);
          net.add_edge(g2, in_at(u, t + 1), 1);
        }
      });
    }
  }
  for (VertexId s : sources) {
    if (in_at(s, 0) >= 0) net.add_edge(te.source, in_at(s, 0), 1);
  }
  for (VertexId g : targets) {
    if (out_at(g, T) >= 0) net.add_edge(out_at(g, T), te.sink, 1);
  }
  te.flow = net.max_flow(te.source, te.sink);
}

struct Prepared {
  std::vector<int> ds, dt;
  int lower = 0;
};

Prepared prepare(const GridSpec& grid, std::span<const VertexId> sources, std::span<const VertexId> targets) {
  if (sources.size() != targets.size()) throw PreconditionError("source and target counts differ");
  for (VertexId v : sources) {
    if (grid.blocked(v)) throw PreconditionError("source on an obstacle");
  }
  for (VertexId v : targets) {
    if (grid.blocked(v)) throw PreconditionError("target on an obstacle");
  }
  Prepared p;
  p.ds = bfs_distance(grid, sources);
  p.dt = bfs_distance(grid, targets);
  for (VertexId v : sources) {
    if (p.dt[static_cast<std::size_t>(v)] == std::numeric_limits<int>::max()) {
      throw InfeasibleError("source " + to_string(grid.at(v)) + " cannot reach any target");
    }
    p.lower = std::max(p.lower, p.dt[static_cast<std::size_t>(v)]);
  }
  for (VertexId v : targets) {
    if (p.ds[static_cast<std::size_t>(v)] == std::numeric_limits<int>::max()) {
      throw InfeasibleError("target " + to_string(grid.at(v)) + " cannot be reached");
    }
    p.lower = std::max(p.lower, p.ds[static_cast<std::size_t>(v)]);
  }
  return p;
}

}  // namespace

bool unlabeled_feasible(const GridSpec& grid, std::span<const VertexId> sources,
                        std::span<const VertexId> targets, int horizon) {
  const auto p = prepare(grid, sources, targets);
  if (horizon < p.lower) return false;
  TimeExpanded te;
  build_and_solve(te, grid, sources, targets, p.ds, p.dt, horizon);
  return te.flow == static_cast<int>(sources.size());
}

UnlabeledPlan unlabeled_route(const GridSpec& grid, std::span<const VertexId> sources,
                              std::span<const VertexId> targets, int horizon_limit) {
  const auto p = prepare(grid, sources, targets);
  const int n = static_cast<int>(sources.size());
  int T = p.lower;
  if (n > 0) T = std::max(T, manhattan_bottleneck(grid, sources, targets));
  for (;; ++T) {
    if (horizon_limit >= 0 && T > horizon_limit) {
      throw InfeasibleError("unlabeled routing needs more than " + std::to_string(horizon_limit) + " steps");
    }
    if (T > grid.size() + n) throw InfeasibleError("unlabeled routing did not converge");
    TimeExpanded te;
    build_and_solve(te, grid, sources, targets, p.ds, p.dt, T);
    if (te.flow < n) continue;
    UnlabeledPlan plan;
    plan.makespan = T;
    plan.paths.resize(static_cast<std::size_t>(n));
    const int V = grid.size();
    for (int i = 0; i < n; ++i) {
      auto& path = plan.paths[static_cast<std::size_t>(i)];
      const VertexId s = sources[static_cast<std::size_t>(i)];
      int node = te.in[static_cast<std::size_t>(s)];
      for (int t = 0;; ++t) {
        path.push_back(te.node_vertex[static_cast<std::size_t>(node)]);
        if (t == T) break;
        const int out = te.out[static_cast<std::size_t>(t) * V + path.back()];
        int next = -1;
        te.net.for_each_used(out, [&](int w) { next = w; });
        if (next < 0) throw ScheduleError("flow decoding lost an agent");
        // Through a swap gadget if the next node is not an in-node.
        while (te.node_vertex[static_cast<std::size_t>(next)] < 0) {
          int w2 = -1;
          te.net.for_each_used(next, [&](int w) { w2 = w; });
          if (w2 < 0) throw ScheduleError("flow decoding lost an agent");
          next = w2;
        }
        node = next;
      }
    }
    return plan;
  }
}

// ---- per-cell rearrangement -----------------------------------------------------------------

namespace {

struct LocalCell {
  GridSpec grid;
  std::vector<VertexId> global;  // local id -> global id
};

LocalCell local_cell(const GridSpec& grid, const CellPattern& pattern, int cell) {
  const int k = pattern.cell_size();
  const auto verts = pattern.cell_vertices(cell);
  std::vector<Vertex> obstacles;
  LocalCell lc{GridSpec(k, k), {}};
  for (int i = 0; i < k * k; ++i) {
    const VertexId g = grid.id(verts[static_cast<std::size_t>(i)]);
    lc.global.push_back(g);
    if (grid.blocked(g)) obstacles.push_back(Vertex{i / k, i % k, 0});
  }
  lc.grid = GridSpec(k, k, 1, obstacles);
  return lc;
}

int local_index(const LocalCell& lc, VertexId g) {
  const auto it = std::find(lc.global.begin(), lc.global.end(), g);
  return it == lc.global.end() ? -1 : static_cast<int>(it - lc.global.begin());
}

std::mutex g_cell_mu;
std::map<std::vector<int>, std::vector<std::vector<int>>> g_cell_cache;

// Unlabeled: local occupied ids -> paths (local ids) onto `slot_ids`.
std::vector<std::vector<int>> solve_center(const LocalCell& lc, const std::vector<int>& occupied,
                                           const std::vector<int>& slot_ids) {
  std::vector<int> key{0, lc.grid.rows()};
  for (const auto& o : lc.grid.obstacles()) key.push_back(100 + o.x * 3 + o.y);
  key.push_back(-1);
  key.insert(key.end(), occupied.begin(), occupied.end());
  key.push_back(-2);
  key.insert(key.end(), slot_ids.begin(), slot_ids.end());
  {
    std::lock_guard<std::mutex> lock(g_cell_mu);
    if (auto it = g_cell_cache.find(key); it != g_cell_cache.end()) return it->second;
  }
  const std::size_t n = occupied.size();
  std::vector<std::vector<int>> best;
  int best_len = std::numeric_limits<int>::max();
  // Try every choice of n slots out of the available ones.
  const std::size_t s = slot_ids.size();
  for (unsigned mask = 0; mask < (1u << s); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
    std::vector<VertexId> src(occupied.begin(), occupied.end());
    std::vector<VertexId> dst;
    for (std::size_t j = 0; j < s; ++j) {
      if (mask & (1u << j)) dst.push_back(slot_ids[j]);
    }
    const auto r = optimal_unlabeled_plan(lc.grid, src, dst);
    if (r.makespan < best_len) {
      best_len = r.makespan;
      best.assign(r.paths.begin(), r.paths.end());
    }
  }
  std::lock_guard<std::mutex> lock(g_cell_mu);
  g_cell_cache.emplace(key, best);
  return best;
}

std::vector<std::vector<int>> solve_labeled(const LocalCell& lc, const std::vector<int>& from,
                                            const std::vector<int>& to) {
  std::vector<int> key{1, lc.grid.rows()};
  for (const auto& o : lc.grid.obstacles()) key.push_back(100 + o.x * 3 + o.y);
  key.push_back(-1);
  key.insert(key.end(), from.begin(), from.end());
  key.push_back(-2);
  key.insert(key.end(), to.begin(), to.end());
  {
    std::lock_guard<std::mutex> lock(g_cell_mu);
    if (auto it = g_cell_cache.find(key); it != g_cell_cache.end()) return it->second;
  }
  std::vector<Vertex> s, g;
  for (int v : from) s.push_back(lc.grid.at(v));
  for (int v : to) g.push_back(lc.grid.at(v));
  const auto r = optimal_makespan_labeled(Instance(lc.grid, s, g));
  std::vector<std::vector<int>> paths;
  for (const auto& p : r.plan.paths) {
    std::vector<int> q;
    for (const auto& v : p) q.push_back(lc.grid.id(v));
    paths.push_back(std::move(q));
  }
  std::lock_guard<std::mutex> lock(g_cell_mu);
  g_cell_cache.emplace(key, paths);
  return paths;
}

}  // namespace

Segment center_balanced(const GridSpec& grid, const CellPattern& pattern, std::span<const VertexId> positions,
                        Orientation o, std::span<const int> cells) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(pattern.cell_count()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const int c = pattern.cell_of(grid.at(positions[i]));
    if (c < 0) continue;
    members[static_cast<std::size_t>(c)].push_back(static_cast<int>(i));
  }
  std::vector<int> todo(cells.begin(), cells.end());
  if (todo.empty()) {
    for (int c = 0; c < pattern.cell_count(); ++c) todo.push_back(c);
  }
  Segment seg;
  for (int c : todo) {
    auto& mem = members[static_cast<std::size_t>(c)];
    if (mem.empty()) continue;
    if (static_cast<int>(mem.size()) > pattern.capacity()) {
      throw CapacityError("cell " + std::to_string(c) + " holds more than " +
                              std::to_string(pattern.capacity()) + " agents",
                          c);
    }
    const LocalCell lc = local_cell(grid, pattern, c);
    std::vector<int> slot_ids;
    for (const auto& v : pattern.slots(c, o)) slot_ids.push_back(local_index(lc, grid.id(v)));
    // Already centred: nothing to do.
    bool centred = true;
    std::vector<std::pair<int, int>> occ;  // (local id, agent)
    for (int a : mem) {
      const int l = local_index(lc, positions[static_cast<std::size_t>(a)]);
      occ.emplace_back(l, a);
      if (std::find(slot_ids.begin(), slot_ids.end(), l) == slot_ids.end()) centred = false;
    }
    if (centred) continue;
    std::sort(occ.begin(), occ.end());
    std::vector<int> occupied;
    for (const auto& [l, a] : occ) occupied.push_back(l);
    const auto paths = solve_center(lc, occupied, slot_ids);
    for (std::size_t j = 0; j < occ.size(); ++j) {
      AgentTrack tr{occ[j].second, {}};
      for (int l : paths[j]) tr.path.push_back(lc.global[static_cast<std::size_t>(l)]);
      seg.duration = std::max(seg.duration, static_cast<int>(tr.path.size()) - 1);
      seg.tracks.push_back(std::move(tr));
    }
  }
  return seg;
}

Segment arrange_within_cells(const GridSpec& grid, const CellPattern& pattern, std::span<const CellMove> moves) {
  std::map<int, std::vector<const CellMove*>> by_cell;
  for (const auto& m : moves) {
    const int c = pattern.cell_of(grid.at(m.from));
    if (c < 0 || pattern.cell_of(grid.at(m.to)) != c) {
      throw PreconditionError("cell move of agent " + std::to_string(m.agent) + " leaves its cell");
    }
    by_cell[c].push_back(&m);
  }
  Segment seg;
  for (auto& [c, ms] : by_cell) {
    if (std::all_of(ms.begin(), ms.end(), [](const CellMove* m) { return m->from == m->to; })) continue;
    const LocalCell lc = local_cell(grid, pattern, c);
    std::sort(ms.begin(), ms.end(), [](const CellMove* a, const CellMove* b) { return a->from < b->from; });
    std::vector<int> from, to;
    for (const auto* m : ms) {
      from.push_back(local_index(lc, m->from));
      to.push_back(local_index(lc, m->to));
    }
    const auto paths = solve_labeled(lc, from, to);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      AgentTrack tr{ms[j]->agent, {}};
      for (int l : paths[j]) tr.path.push_back(lc.global[static_cast<std::size_t>(l)]);
      seg.duration = std::max(seg.duration, static_cast<int>(tr.path.size()) - 1);
      seg.tracks.push_back(std::move(tr));
    }
  }
  return seg;
}

}  // namespace grmapf
