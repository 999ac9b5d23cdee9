#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <map>
#include <random>
#include <vector>

#include "grmapf/bench.hpp"
#include "grmapf/core.hpp"
#include "grmapf/solvers.hpp"

namespace grmapf::testing {

inline Instance random_instance(int m1, int m2, double density, std::uint64_t seed, int m3 = 1) {
  InstanceSpec s;
  s.rows = m1;
  s.cols = m2;
  s.layers = m3;
  s.density = density;
  s.seed = seed;
  return generate_instance(s);
}

inline Instance random_agents(const GridSpec& g, int n, std::mt19937_64& rng) {
  std::vector<Vertex> free;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (!g.blocked(v)) free.push_back(g.at(v));
  }
  auto s = free, t = free;
  std::shuffle(s.begin(), s.end(), rng);
  std::shuffle(t.begin(), t.end(), rng);
  s.resize(static_cast<std::size_t>(n));
  t.resize(static_cast<std::size_t>(n));
  return Instance(g, s, t);
}

/// Per-vertex sequence of agents entering it, idle repeats removed.
inline std::map<Vertex, std::vector<int>> visit_order(const Plan& plan) {
  struct Entry {
    int t, agent;
    Vertex v;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    const auto& p = plan.paths[i];
    for (std::size_t t = 0; t < p.size(); ++t) {
      if (t == 0 || p[t] != p[t - 1]) entries.push_back({static_cast<int>(t), static_cast<int>(i), p[t]});
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.t < b.t; });
  std::map<Vertex, std::vector<int>> out;
  for (const auto& e : entries) out[e.v].push_back(e.agent);
  return out;
}

inline std::vector<std::vector<Vertex>> spatial_paths(const Plan& plan) {
  std::vector<std::vector<Vertex>> out;
  for (const auto& p : plan.paths) {
    std::vector<Vertex> q;
    for (const auto& v : p) {
      if (q.empty() || q.back() != v) q.push_back(v);
    }
    out.push_back(std::move(q));
  }
  return out;
}

/// Phase spans tile [0, end) and each phase's declared cells hold at its end.
inline bool trace_consistent(const Instance& inst, const SolveResult& r, int cell_size) {
  int t = 0;
  for (const auto& p : r.trace.phases) {
    if (p.begin != t || p.end < p.begin) return false;
    t = p.end;
    if (p.expected_cell.empty()) continue;
    const int layers = inst.grid().layers();
    const int cols = inst.grid().cols() / cell_size;
    for (std::size_t i = 0; i < p.expected_cell.size() && i < static_cast<std::size_t>(inst.size()); ++i) {
      const Vertex v = r.plan.at(i, p.end);
      const int cell = ((v.x / cell_size) * cols + v.y / cell_size) * layers + v.z;
      if (cell != p.expected_cell[i]) return false;
    }
  }
  return t >= r.plan.makespan();
}

}  // namespace grmapf::testing
