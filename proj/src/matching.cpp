#include "grmapf/matching.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <tuple>

namespace grmapf {

void BipartiteMultigraph::add_edge(int left, int right, int payload) {
  if (left < 0 || left >= left_size_ || right < 0 || right >= right_size_) {
    throw PreconditionError("edge endpoint out of range");
  }
  edges_.push_back({left, right, payload});
}

std::vector<int> BipartiteMultigraph::left_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(left_size_), 0);
  for (const auto& e : edges_) ++d[static_cast<std::size_t>(e.left)];
  return d;
}

std::vector<int> BipartiteMultigraph::right_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(right_size_), 0);
  for (const auto& e : edges_) ++d[static_cast<std::size_t>(e.right)];
  return d;
}

std::optional<int> BipartiteMultigraph::regular_degree() const {
  if (left_size_ != right_size_ || left_size_ == 0) return std::nullopt;
  const auto l = left_degrees();
  const auto r = right_degrees();
  const int d = l.front();
  for (int x : l) {
    if (x != d) return std::nullopt;
  }
  for (int x : r) {
    if (x != d) return std::nullopt;
  }
  return d;
}

std::vector<int> max_bipartite_matching(int left_size, int right_size,
                                        const std::vector<std::vector<int>>& adj) {
  std::vector<int> ml(static_cast<std::size_t>(left_size), -1);
  std::vector<int> mr(static_cast<std::size_t>(right_size), -1);
  for (int u = 0; u < left_size; ++u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (mr[static_cast<std::size_t>(v)] < 0) {
        ml[static_cast<std::size_t>(u)] = v;
        mr[static_cast<std::size_t>(v)] = u;
        break;
      }
    }
  }
  std::vector<int> dist(static_cast<std::size_t>(left_size));
  std::vector<std::size_t> it(static_cast<std::size_t>(left_size));
  constexpr int kInf = std::numeric_limits<int>::max();

  auto bfs = [&]() {
    std::queue<int> q;
    for (int u = 0; u < left_size; ++u) {
      if (ml[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = 0;
        q.push(u);
      } else {
        dist[static_cast<std::size_t>(u)] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        const int w = mr[static_cast<std::size_t>(v)];
        if (w < 0) {
          found = true;
        } else if (dist[static_cast<std::size_t>(w)] == kInf) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative DFS along the BFS layering.
  std::vector<int> stack;
  auto dfs = [&](int root) {
    stack.clear();
    stack.push_back(root);
    while (!stack.empty()) {
      const int u = stack.back();
      const auto& nb = adj[static_cast<std::size_t>(u)];
      auto& i = it[static_cast<std::size_t>(u)];
      bool advanced = false;
      while (i < nb.size()) {
        const int v = nb[i];
        const int w = mr[static_cast<std::size_t>(v)];
        if (w < 0) {
          // Augment along the stack.
          int vv = v;
          for (std::size_t k = stack.size(); k-- > 0;) {
            const int uu = stack[k];
            const int prev = ml[static_cast<std::size_t>(uu)];
            ml[static_cast<std::size_t>(uu)] = vv;
            mr[static_cast<std::size_t>(vv)] = uu;
            vv = prev;
          }
          return true;
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(u)] + 1) {
          stack.push_back(w);
          advanced = true;
          break;
        }
        ++i;
      }
      if (!advanced) {
        dist[static_cast<std::size_t>(u)] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++it[static_cast<std::size_t>(stack.back())];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < left_size; ++u) {
      if (ml[static_cast<std::size_t>(u)] < 0) dfs(u);
    }
  }
  return ml;
}

BipartiteMultigraph build_color_row_graph(int rows, int capacity, std::span<const int> color_of,
                                          std::span<const int> row_of, bool pad_virtual) {
  if (color_of.size() != row_of.size()) throw PreconditionError("colour/row length mismatch");
  BipartiteMultigraph g(rows, rows);
  std::vector<int> row_count(static_cast<std::size_t>(rows), 0);
  std::vector<int> color_count(static_cast<std::size_t>(rows), 0);
  for (std::size_t i = 0; i < color_of.size(); ++i) {
    const int c = color_of[i];
    const int r = row_of[i];
    if (c < 0 || c >= rows || r < 0 || r >= rows) {
      throw PreconditionError("agent " + std::to_string(i) + " has colour or row out of range");
    }
    if (++row_count[static_cast<std::size_t>(r)] > capacity) {
      throw CapacityError("row " + std::to_string(r) + " holds more than " +
                              std::to_string(capacity) + " agents",
                          r);
    }
    if (++color_count[static_cast<std::size_t>(c)] > capacity) {
      throw CapacityError("colour " + std::to_string(c) + " used by more than " +
                              std::to_string(capacity) + " agents",
                          c);
    }
    g.add_edge(c, r, static_cast<int>(i));
  }
  if (!pad_virtual) return g;
  // Self-coloured fillers first, then pair the remaining deficits in index order.
  std::vector<int> row_def(static_cast<std::size_t>(rows));
  std::vector<int> col_def(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    row_def[static_cast<std::size_t>(r)] = capacity - row_count[static_cast<std::size_t>(r)];
    col_def[static_cast<std::size_t>(r)] = capacity - color_count[static_cast<std::size_t>(r)];
  }
  for (int r = 0; r < rows; ++r) {
    const int k = std::min(row_def[static_cast<std::size_t>(r)], col_def[static_cast<std::size_t>(r)]);
    for (int j = 0; j < k; ++j) g.add_edge(r, r, kVirtualAgent);
    row_def[static_cast<std::size_t>(r)] -= k;
    col_def[static_cast<std::size_t>(r)] -= k;
  }
  int c = 0;
  for (int r = 0; r < rows; ++r) {
    while (row_def[static_cast<std::size_t>(r)] > 0) {
      while (col_def[static_cast<std::size_t>(c)] == 0) ++c;
      g.add_edge(c, r, kVirtualAgent);
      --row_def[static_cast<std::size_t>(r)];
      --col_def[static_cast<std::size_t>(c)];
    }
  }
  return g;
}

namespace {

// Extracts one perfect matching from the live edges; returns edge indices per left node.
std::vector<int> extract_perfect(int n, const std::vector<BipartiteEdge>& edges,
                                 const std::vector<int>& order, const std::vector<char>& used) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  // Map (left,right) -> first live edge index in order.
  std::vector<std::vector<int>> pick(static_cast<std::size_t>(n));
  for (int idx : order) {
    if (used[static_cast<std::size_t>(idx)]) continue;
    const auto& e = edges[static_cast<std::size_t>(idx)];
    auto& nb = adj[static_cast<std::size_t>(e.left)];
    if (std::find(nb.begin(), nb.end(), e.right) == nb.end()) {
      nb.push_back(e.right);
      pick[static_cast<std::size_t>(e.left)].push_back(idx);
    }
  }
  const auto ml = max_bipartite_matching(n, n, adj);
  std::vector<int> chosen(static_cast<std::size_t>(n), -1);
  for (int u = 0; u < n; ++u) {
    const int v = ml[static_cast<std::size_t>(u)];
    if (v < 0) throw InfeasibleError("no perfect matching in a regular graph", u);
    const auto& nb = adj[static_cast<std::size_t>(u)];
    const auto pos = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), v) - nb.begin());
    chosen[static_cast<std::size_t>(u)] = pick[static_cast<std::size_t>(u)][pos];
  }
  return chosen;
}

}  // namespace

MatchingSet decompose_regular_multigraph(const BipartiteMultigraph& graph, std::uint64_t seed) {
  const auto d = graph.regular_degree();
  if (!d || *d < 1) throw PreconditionError("graph is not d-regular with d >= 1");
  const int n = graph.left_size();
  const auto& edges = graph.edges();
  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
    }
  }
  std::vector<char> used(edges.size(), 0);
  MatchingSet out;
  for (int k = 0; k < *d; ++k) {
    const auto chosen = extract_perfect(n, edges, order, used);
    Matching m;
    m.edges.reserve(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
      const int idx = chosen[static_cast<std::size_t>(u)];
      used[static_cast<std::size_t>(idx)] = 1;
      m.edges.push_back(edges[static_cast<std::size_t>(idx)]);
    }
    out.matchings.push_back(std::move(m));
  }
  return out;
}

BottleneckAssignment lba_bottleneck_matching(const CostMatrix& costs) {
  const int n = costs.size();
  std::vector<int> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    bool any = false;
    for (int c = 0; c < n; ++c) {
      if (costs(r, c) != CostMatrix::kForbidden) {
        values.push_back(costs(r, c));
        any = true;
      }
    }
    if (!any) throw InfeasibleError("row " + std::to_string(r) + " has only forbidden entries", r);
  }
  BottleneckAssignment out;
  if (n == 0) return out;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  auto feasible = [&](int threshold, std::vector<int>* result) {
    for (int r = 0; r < n; ++r) {
      auto& a = adj[static_cast<std::size_t>(r)];
      a.clear();
      for (int c = 0; c < n; ++c) {
        if (costs(r, c) <= threshold) a.push_back(c);
      }
    }
    auto ml = max_bipartite_matching(n, n, adj);
    const bool ok = std::none_of(ml.begin(), ml.end(), [](int v) { return v < 0; });
    if (ok && result) *result = std::move(ml);
    return ok;
  };

  std::size_t lo = 0;
  std::size_t hi = values.size() - 1;
  if (!feasible(values[hi], nullptr)) throw InfeasibleError("no perfect assignment exists");
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(values[mid], nullptr)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  feasible(values[lo], &out.col_of_row);
  out.bottleneck = values[lo];
  return out;
}

int lba_agent_cost(int column, int start, int goal, int lambda) {
  if (lambda != 0 && lambda != 1) throw PreconditionError("lambda must be 0 or 1");
  return lambda * std::abs(column - start) + (1 - lambda) * std::abs(column - goal);
}

std::vector<int> lba_assign_matchings(const MatchingSet& matchings, const AgentColumns& agents,
                                      int lambda, int group_size) {
  const int d = static_cast<int>(matchings.size());
  if (group_size < 1 || d % group_size != 0) {
    throw PreconditionError("matching count is not a multiple of the group size");
  }
  CostMatrix cost(d);
  for (int k = 0; k < d; ++k) {
    for (int slot = 0; slot < d; ++slot) {
      const int column = slot / group_size;
      int worst = 0;
      for (const auto& e : matchings.matchings[static_cast<std::size_t>(k)].edges) {
        if (e.payload == kVirtualAgent) continue;
        const auto a = static_cast<std::size_t>(e.payload);
        worst = std::max(worst, lba_agent_cost(column, agents.start[a], agents.goal[a], lambda));
      }
      cost(k, slot) = worst;
    }
  }
  const auto assignment = lba_bottleneck_matching(cost);
  std::vector<int> group(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    group[static_cast<std::size_t>(k)] = assignment.col_of_row[static_cast<std::size_t>(k)] / group_size;
  }
  return group;
}

MatchingSet lba_greedy_per_row(int rows, int capacity, const AgentColumns& agents, int lambda,
                               int group_size) {
  if (group_size < 1 || capacity % group_size != 0) {
    throw PreconditionError("capacity is not a multiple of the group size");
  }
  const auto graph = build_color_row_graph(rows, capacity, agents.color, agents.row, true);
  // Live edges bucketed by (colour,row).
  std::vector<std::vector<BipartiteEdge>> bucket(static_cast<std::size_t>(rows) * rows);
  for (const auto& e : graph.edges()) {
    bucket[static_cast<std::size_t>(e.left) * rows + e.right].push_back(e);
  }
  auto cost_of = [&](const BipartiteEdge& e, int column) {
    if (e.payload == kVirtualAgent) return 0;
    const auto a = static_cast<std::size_t>(e.payload);
    return lba_agent_cost(column, agents.start[a], agents.goal[a], lambda);
  };
  MatchingSet out;
  for (int k = 0; k < capacity; ++k) {
    const int column = k / group_size;
    CostMatrix cost(rows, CostMatrix::kForbidden);
    for (int t = 0; t < rows; ++t) {
      for (int r = 0; r < rows; ++r) {
        for (const auto& e : bucket[static_cast<std::size_t>(t) * rows + r]) {
          cost(t, r) = std::min(cost(t, r), cost_of(e, column));
        }
      }
    }
    const auto assignment = lba_bottleneck_matching(cost);
    Matching m;
    for (int t = 0; t < rows; ++t) {
      const int r = assignment.col_of_row[static_cast<std::size_t>(t)];
      auto& b = bucket[static_cast<std::size_t>(t) * rows + r];
      auto best = std::min_element(b.begin(), b.end(), [&](const auto& x, const auto& y) {
        return cost_of(x, column) < cost_of(y, column);
      });
      m.edges.push_back(*best);
      b.erase(best);
    }
    out.matchings.push_back(std::move(m));
  }
  return out;
}

bool audit_decomposition(const BipartiteMultigraph& graph, const MatchingSet& set) {
  const int n = graph.left_size();
  std::map<std::tuple<int, int, int>, int> remaining;
  for (const auto& e : graph.edges()) ++remaining[{e.left, e.right, e.payload}];
  for (const auto& m : set.matchings) {
    if (static_cast<int>(m.edges.size()) != n) return false;
    std::vector<char> right_seen(static_cast<std::size_t>(graph.right_size()), 0);
    for (int l = 0; l < n; ++l) {
      const auto& e = m.edges[static_cast<std::size_t>(l)];
      if (e.left != l) return false;
      if (right_seen[static_cast<std::size_t>(e.right)]) return false;
      right_seen[static_cast<std::size_t>(e.right)] = 1;
      auto it = remaining.find({e.left, e.right, e.payload});
      if (it == remaining.end() || it->second == 0) return false;
      --it->second;
    }
  }
  return std::all_of(remaining.begin(), remaining.end(), [](const auto& kv) { return kv.second == 0; });
}

}  // namespace grmapf
