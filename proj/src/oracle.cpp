#include "grmapf/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

namespace grmapf {

namespace {

constexpr std::size_t kSat = std::numeric_limits<std::size_t>::max();

std::size_t mul_sat(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSat / a) return kSat;
  return a * b;
}

constexpr int kBits = 7;

std::uint64_t pack(const std::vector<VertexId>& pos) {
  std::uint64_t k = 0;
  for (std::size_t i = pos.size(); i-- > 0;) k = (k << kBits) | static_cast<std::uint64_t>(pos[i]);
  return k;
}

void unpack(std::uint64_t k, std::vector<VertexId>& pos) {
  for (auto& p : pos) {
    p = static_cast<VertexId>(k & ((1u << kBits) - 1));
    k >>= kBits;
  }
}

// Enumerates every collision-free synchronous successor of `pos` (each agent rests or steps).
template <class F>
void for_each_successor(const GridSpec& grid, const std::vector<VertexId>& pos, std::vector<int>& occ,
                        F&& emit) {
  const std::size_t n = pos.size();
  std::vector<VertexId> next(n, kNoVertex);
  std::vector<int> claimed(static_cast<std::size_t>(grid.size()), -1);
  for (std::size_t i = 0; i < n; ++i) occ[static_cast<std::size_t>(pos[i])] = static_cast<int>(i);

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      emit(next);
      return;
    }
    const VertexId u = pos[i];
    auto attempt = [&](VertexId v) {
      if (claimed[static_cast<std::size_t>(v)] >= 0) return;
      if (v != u) {
        const int j = occ[static_cast<std::size_t>(v)];
        if (j >= 0 && static_cast<std::size_t>(j) < i && next[static_cast<std::size_t>(j)] == u) return;
      }
      claimed[static_cast<std::size_t>(v)] = static_cast<int>(i);
      next[i] = v;
      self(self, i + 1);
      claimed[static_cast<std::size_t>(v)] = -1;
    };
    attempt(u);
    grid.for_each_free_neighbor(u, attempt);
  };
  rec(rec, 0);
  for (std::size_t i = 0; i < n; ++i) occ[static_cast<std::size_t>(pos[i])] = -1;
}

}  // namespace

std::size_t labeled_state_estimate(int free_vertices, int agents) {
  std::size_t s = 1;
  for (int k = 0; k < agents; ++k) s = mul_sat(s, static_cast<std::size_t>(std::max(0, free_vertices - k)));
  return s;
}

std::size_t unlabeled_state_estimate(int free_vertices, int agents) {
  std::size_t s = 1;
  for (int k = 0; k < agents; ++k) {
    s = mul_sat(s, static_cast<std::size_t>(std::max(0, free_vertices - k)));
    if (s == kSat) return kSat;
    s /= static_cast<std::size_t>(k + 1);
  }
  return s;
}

OracleResult optimal_makespan_labeled(const Instance& instance, const SearchLimits& limits) {
  const GridSpec& grid = instance.grid();
  const int n = instance.size();
  if (labeled_state_estimate(grid.free_count(), n) > limits.max_states) {
    throw LimitExceeded("labeled search space too large");
  }
  if (grid.size() > (1 << kBits) || n * kBits > 63) {
    throw LimitExceeded("labeled search supports at most 128 vertices and 9 agents");
  }
  std::vector<VertexId> start(static_cast<std::size_t>(n));
  std::vector<VertexId> goal(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    start[static_cast<std::size_t>(i)] = grid.id(instance.starts()[static_cast<std::size_t>(i)]);
    goal[static_cast<std::size_t>(i)] = grid.id(instance.goals()[static_cast<std::size_t>(i)]);
  }
  const std::uint64_t s0 = pack(start);
  const std::uint64_t g0 = pack(goal);
  std::unordered_map<std::uint64_t, std::uint64_t> parent;
  parent.emplace(s0, s0);
  std::vector<std::uint64_t> frontier{s0};
  std::vector<int> occ(static_cast<std::size_t>(grid.size()), -1);
  std::vector<VertexId> pos(static_cast<std::size_t>(n));
  int depth = 0;
  bool found = s0 == g0;
  while (!found) {
    if (frontier.empty()) throw InfeasibleError("goal configuration unreachable");
    if (depth >= limits.max_depth) throw LimitExceeded("labeled search depth limit reached");
    std::vector<std::uint64_t> next_frontier;
    for (std::uint64_t s : frontier) {
      unpack(s, pos);
      for_each_successor(grid, pos, occ, [&](const std::vector<VertexId>& nx) {
        const std::uint64_t k = pack(nx);
        if (parent.emplace(k, s).second) {
          next_frontier.push_back(k);
          if (k == g0) found = true;
        }
      });
      if (found) break;
    }
    frontier = std::move(next_frontier);
    ++depth;
  }
  std::vector<std::uint64_t> chain{g0};
  while (chain.back() != s0) chain.push_back(parent.at(chain.back()));
  std::reverse(chain.begin(), chain.end());
  OracleResult out;
  out.makespan = static_cast<int>(chain.size()) - 1;
  out.plan.paths.assign(static_cast<std::size_t>(n), {});
  for (std::uint64_t k : chain) {
    unpack(k, pos);
    for (int i = 0; i < n; ++i) out.plan.paths[static_cast<std::size_t>(i)].push_back(grid.at(pos[static_cast<std::size_t>(i)]));
  }
  return out;
}

UnlabeledOracleResult optimal_unlabeled_plan(const GridSpec& grid, std::span<const VertexId> sources,
                                             std::span<const VertexId> targets, const SearchLimits& limits) {
  if (sources.size() != targets.size()) throw PreconditionError("source and target counts differ");
  const int n = static_cast<int>(sources.size());
  if (grid.size() > 64) throw LimitExceeded("unlabeled search supports at most 64 vertices");
  if (unlabeled_state_estimate(grid.free_count(), n) > limits.max_states) {
    throw LimitExceeded("unlabeled search space too large");
  }
  auto mask_of = [&](std::span<const VertexId> vs) {
    std::uint64_t m = 0;
    for (VertexId v : vs) {
      if (grid.blocked(v)) throw PreconditionError("endpoint on an obstacle");
      if (m & (1ull << v)) throw PreconditionError("duplicate endpoint");
      m |= 1ull << v;
    }
    return m;
  };
  const std::uint64_t s0 = mask_of(sources);
  const std::uint64_t g0 = mask_of(targets);
  auto to_list = [&](std::uint64_t m, std::vector<VertexId>& out) {
    out.clear();
    for (int v = 0; v < grid.size(); ++v) {
      if (m & (1ull << v)) out.push_back(v);
    }
  };
  std::unordered_map<std::uint64_t, std::uint64_t> parent;
  parent.emplace(s0, s0);
  std::vector<std::uint64_t> frontier{s0};
  std::vector<int> occ(static_cast<std::size_t>(grid.size()), -1);
  std::vector<VertexId> pos;
  int depth = 0;
  bool found = s0 == g0;
  while (!found) {
    if (frontier.empty()) throw InfeasibleError("target set unreachable");
    if (depth >= limits.max_depth) throw LimitExceeded("unlabeled search depth limit reached");
    std::vector<std::uint64_t> next_frontier;
    for (std::uint64_t s : frontier) {
      to_list(s, pos);
      for_each_successor(grid, pos, occ, [&](const std::vector<VertexId>& nx) {
        std::uint64_t k = 0;
        for (VertexId v : nx) k |= 1ull << v;
        if (parent.emplace(k, s).second) {
          next_frontier.push_back(k);
          if (k == g0) found = true;
        }
      });
      if (found) break;
    }
    frontier = std::move(next_frontier);
    ++depth;
  }
  std::vector<std::uint64_t> chain{g0};
  while (chain.back() != s0) chain.push_back(parent.at(chain.back()));
  std::reverse(chain.begin(), chain.end());

  UnlabeledOracleResult out;
  out.makespan = static_cast<int>(chain.size()) - 1;
  std::vector<VertexId> cur(sources.begin(), sources.end());
  out.paths.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.paths[static_cast<std::size_t>(i)].push_back(cur[static_cast<std::size_t>(i)]);
  // Recover one labeled realisation of each unlabeled transition.
  for (std::size_t t = 1; t < chain.size(); ++t) {
    bool done = false;
    std::vector<VertexId> chosen;
    for_each_successor(grid, cur, occ, [&](const std::vector<VertexId>& nx) {
      if (done) return;
      std::uint64_t k = 0;
      for (VertexId v : nx) k |= 1ull << v;
      if (k == chain[t]) {
        chosen = nx;
        done = true;
      }
    });
    cur = chosen;
    for (int i = 0; i < n; ++i) out.paths[static_cast<std::size_t>(i)].push_back(cur[static_cast<std::size_t>(i)]);
  }
  return out;
}

int optimal_makespan_unlabeled(const GridSpec& grid, std::span<const Vertex> sources,
                               std::span<const Vertex> targets, const SearchLimits& limits) {
  std::vector<VertexId> s, t;
  for (const auto& v : sources) s.push_back(grid.id(v));
  for (const auto& v : targets) t.push_back(grid.id(v));
  return optimal_unlabeled_plan(grid, s, t, limits).makespan;
}

}  // namespace grmapf
