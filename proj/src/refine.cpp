#include "grmapf/refine.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace grmapf {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct Visit {
  int time;
  int agent;
  int step;  // index into the agent's idle-free path
};

}  // namespace

RefineResult refine(const Instance& instance, const Plan& plan) {
  const GridSpec& g = instance.grid();
  const auto report = validate_plan(instance, plan);
  if (!report.ok()) throw PreconditionError("refine needs a valid plan: " + report.summary(3));
  const int n = instance.size();
  RefineResult out;
  out.makespan_before = plan.makespan();

  // Idle-free paths and per-vertex entry queues.
  std::vector<std::vector<VertexId>> seq(idx(n));
  std::vector<std::vector<Visit>> queue(idx(g.size()));
  for (int i = 0; i < n; ++i) {
    const auto& p = plan.paths[idx(i)];
    for (std::size_t t = 0; t < p.size(); ++t) {
      const VertexId v = g.id(p[t]);
      if (!seq[idx(i)].empty() && seq[idx(i)].back() == v) continue;
      seq[idx(i)].push_back(v);
      queue[idx(v)].push_back({static_cast<int>(t), i, static_cast<int>(seq[idx(i)].size()) - 1});
    }
  }
  for (auto& q : queue) std::sort(q.begin(), q.end(), [](const Visit& a, const Visit& b) { return a.time < b.time; });

  std::vector<int> step(idx(n), 0);
  std::vector<int> occ(idx(g.size()), -1);
  std::vector<std::size_t> next(idx(g.size()), 0);  // next entering visit per vertex
  for (int i = 0; i < n; ++i) {
    const VertexId v = seq[idx(i)][0];
    occ[idx(v)] = i;
    next[idx(v)] = 1;
  }
  out.plan.paths.assign(idx(n), {});
  for (int i = 0; i < n; ++i) out.plan.paths[idx(i)].push_back(g.at(seq[idx(i)][0]));

  auto target = [&](int i) { return seq[idx(i)][idx(step[idx(i)] + 1)]; };
  auto wants = [&](int i) {
    if (step[idx(i)] + 1 >= static_cast<int>(seq[idx(i)].size())) return false;
    const VertexId w = target(i);
    const auto& q = queue[idx(w)];
    return next[idx(w)] < q.size() && q[next[idx(w)]].agent == i && q[next[idx(w)]].step == step[idx(i)] + 1;
  };

  int remaining = 0;
  for (int i = 0; i < n; ++i) remaining += seq[idx(i)].size() > 1 ? 1 : 0;
  // 0 unknown, 1 on the current chain, 2 moves, 3 stays.
  std::vector<char> state(idx(n));
  std::vector<int> chain;
  while (remaining > 0) {
    std::fill(state.begin(), state.end(), 0);
    for (int s = 0; s < n; ++s) {
      if (state[idx(s)] != 0) continue;
      chain.clear();
      int i = s;
      char verdict = 3;
      for (;;) {
        if (state[idx(i)] == 2 || state[idx(i)] == 3) {
          verdict = state[idx(i)];
          break;
        }
        if (state[idx(i)] == 1) {
          // Rotation: the cycle starts where the chain first met i.
          const auto at = std::find(chain.begin(), chain.end(), i);
          const bool rotate = chain.end() - at >= 3;
          for (auto it = at; it != chain.end(); ++it) state[idx(*it)] = rotate ? 2 : 3;
          chain.erase(at, chain.end());
          verdict = rotate ? 2 : 3;
          break;
        }
        if (!wants(i)) {
          state[idx(i)] = 3;
          verdict = 3;
          break;
        }
        state[idx(i)] = 1;
        chain.push_back(i);
        const int j = occ[idx(target(i))];
        if (j < 0) {
          verdict = 2;
          break;
        }
        i = j;
      }
      for (int c : chain) state[idx(c)] = verdict;
    }
    std::vector<int> movers;
    for (int i = 0; i < n; ++i) {
      if (state[idx(i)] == 2) movers.push_back(i);
    }
    if (movers.empty()) throw ScheduleError("refinement stalled");
    for (int i : movers) occ[idx(seq[idx(i)][idx(step[idx(i)])])] = -1;
    for (int i : movers) {
      const VertexId w = target(i);
      occ[idx(w)] = i;
      ++next[idx(w)];
      ++step[idx(i)];
      if (step[idx(i)] + 1 == static_cast<int>(seq[idx(i)].size())) --remaining;
    }
    for (int i = 0; i < n; ++i) out.plan.paths[idx(i)].push_back(g.at(seq[idx(i)][idx(step[idx(i)])]));
  }
  trim_trailing_rests(out.plan);
  out.makespan_after = out.plan.makespan();
  return out;
}

}  // namespace grmapf
