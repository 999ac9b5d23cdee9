#include "grmapf/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace grmapf {

std::string to_string(const Vertex& v) {
  std::ostringstream os;
  os << '(' << v.x << ',' << v.y;
  if (v.z != 0) os << ',' << v.z;
  os << ')';
  return os.str();
}

GridSpec::GridSpec(int rows, int cols, int layers, const std::vector<Vertex>& obstacles)
    : m1_(rows), m2_(cols), m3_(layers), obstacles_(obstacles) {
  if (rows <= 0 || cols <= 0 || layers <= 0) {
    throw PreconditionError("grid dimensions must be positive");
  }
  std::sort(obstacles_.begin(), obstacles_.end());
  obstacles_.erase(std::unique(obstacles_.begin(), obstacles_.end()), obstacles_.end());
  blocked_.assign(static_cast<std::size_t>(size()), 0);
  for (const Vertex& o : obstacles_) {
    if (!in_bounds(o)) throw PreconditionError("obstacle out of bounds: " + to_string(o));
    blocked_[static_cast<std::size_t>(id(o))] = 1;
  }
  if (static_cast<int>(obstacles_.size()) == size()) {
    throw PreconditionError("every vertex is an obstacle");
  }
}

bool GridSpec::adjacent(const Vertex& a, const Vertex& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z) == 1;
}

namespace {

void check_endpoints(const GridSpec& grid, const std::vector<Vertex>& vs, const char* what) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(grid.size()), 0);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Vertex& v = vs[i];
    if (!grid.in_bounds(v)) {
      throw PreconditionError(std::string(what) + " of agent " + std::to_string(i) +
                              " out of bounds: " + to_string(v));
    }
    if (grid.blocked(v)) {
      throw PreconditionError(std::string(what) + " of agent " + std::to_string(i) +
                              " on obstacle " + to_string(v));
    }
    auto& s = seen[static_cast<std::size_t>(grid.id(v))];
    if (s) {
      throw PreconditionError(std::string("duplicate ") + what + " " + to_string(v));
    }
    s = 1;
  }
}

}  // namespace

Instance::Instance(GridSpec grid, std::vector<Vertex> starts, std::vector<Vertex> goals)
    : grid_(std::move(grid)), starts_(std::move(starts)), goals_(std::move(goals)) {
  if (starts_.size() != goals_.size()) {
    throw PreconditionError("start and goal counts differ");
  }
  check_endpoints(grid_, starts_, "start");
  check_endpoints(grid_, goals_, "goal");
}

int Plan::makespan() const {
  std::size_t len = 0;
  for (const auto& p : paths) len = std::max(len, p.size());
  return len == 0 ? 0 : static_cast<int>(len) - 1;
}

const Vertex& Plan::at(std::size_t agent, int t) const {
  const auto& p = paths[agent];
  return p[std::min(static_cast<std::size_t>(t), p.size() - 1)];
}

void Plan::densify() {
  const std::size_t len = static_cast<std::size_t>(makespan()) + 1;
  for (auto& p : paths) {
    if (!p.empty()) p.resize(len, p.back());
  }
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kAgentCount: return "agent-count";
    case ViolationKind::kEmptyPath: return "empty-path";
    case ViolationKind::kStartMismatch: return "start-mismatch";
    case ViolationKind::kGoalMismatch: return "goal-mismatch";
    case ViolationKind::kOutOfBounds: return "out-of-bounds";
    case ViolationKind::kNonAdjacentMove: return "non-adjacent-move";
    case ViolationKind::kObstacle: return "obstacle";
    case ViolationKind::kVertexCollision: return "vertex-collision";
    case ViolationKind::kSwapCollision: return "swap-collision";
  }
  return "unknown";
}

std::string Violation::describe() const {
  std::ostringstream os;
  os << to_string(kind) << " t=" << time;
  if (agent >= 0) os << " agent=" << agent;
  if (other >= 0) os << " other=" << other;
  os << " at " << to_string(vertex);
  if (kind == ViolationKind::kNonAdjacentMove || kind == ViolationKind::kSwapCollision) {
    os << " -> " << to_string(other_vertex);
  }
  return os.str();
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [&](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::summary(std::size_t max_lines) const {
  if (ok()) return "valid";
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < max_lines; ++i) {
    os << "\n  " << violations[i].describe();
  }
  return os.str();
}

ValidationReport validate_plan(const GridSpec& grid, const Instance& instance, const Plan& plan) {
  ValidationReport report;
  auto add = [&](ViolationKind k, int t, int a, int b, Vertex v, Vertex w = {}) {
    report.violations.push_back(Violation{k, t, a, b, v, w});
  };
  const int n = instance.size();
  if (static_cast<int>(plan.paths.size()) != n) {
    add(ViolationKind::kAgentCount, 0, -1, -1, {});
    return report;
  }
  for (int i = 0; i < n; ++i) {
    const auto& p = plan.paths[static_cast<std::size_t>(i)];
    if (p.empty()) {
      add(ViolationKind::kEmptyPath, 0, i, -1, {});
      continue;
    }
    if (p.front() != instance.starts()[static_cast<std::size_t>(i)]) {
      add(ViolationKind::kStartMismatch, 0, i, -1, p.front());
    }
    if (p.back() != instance.goals()[static_cast<std::size_t>(i)]) {
      add(ViolationKind::kGoalMismatch, static_cast<int>(p.size()) - 1, i, -1, p.back());
    }
  }
  if (!report.ok() && report.count(ViolationKind::kEmptyPath) > 0) return report;

  const int T = plan.makespan();
  // Per-vertex occupant at the current time, tagged by time to avoid clearing.
  std::vector<int> occ_agent(static_cast<std::size_t>(grid.size()), -1);
  std::vector<int> occ_time(static_cast<std::size_t>(grid.size()), -1);

  auto id_of = [&](const Vertex& v) -> VertexId {
    return grid.in_bounds(v) ? grid.id(v) : kNoVertex;
  };

  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < n; ++i) {
      const Vertex& v = plan.at(static_cast<std::size_t>(i), t);
      const VertexId id = id_of(v);
      if (id == kNoVertex) {
        add(ViolationKind::kOutOfBounds, t, i, -1, v);
        continue;
      }
      if (grid.blocked(id)) add(ViolationKind::kObstacle, t, i, -1, v);
      const auto s = static_cast<std::size_t>(id);
      if (occ_time[s] == t) {
        add(ViolationKind::kVertexCollision, t, occ_agent[s], i, v);
      } else {
        occ_time[s] = t;
        occ_agent[s] = i;
      }
    }
    if (t == T) break;
    for (int i = 0; i < n; ++i) {
      const Vertex& a = plan.at(static_cast<std::size_t>(i), t);
      const Vertex& b = plan.at(static_cast<std::size_t>(i), t + 1);
      if (a == b) continue;
      if (!GridSpec::adjacent(a, b)) {
        add(ViolationKind::kNonAdjacentMove, t, i, -1, a, b);
        continue;
      }
      const VertexId bid = id_of(b);
      if (bid == kNoVertex) continue;
      const auto s = static_cast<std::size_t>(bid);
      if (occ_time[s] != t) continue;
      const int j = occ_agent[s];
      if (j <= i) continue;  // the lower index reports the swap
      if (plan.at(static_cast<std::size_t>(j), t + 1) == a) {
        add(ViolationKind::kSwapCollision, t, i, j, a, b);
      }
    }
  }
  return report;
}

int manhattan(const Vertex& a, const Vertex& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

int manhattan_lower_bound(const Instance& instance) {
  int lb = 0;
  for (int i = 0; i < instance.size(); ++i) {
    lb = std::max(lb, manhattan(instance.starts()[static_cast<std::size_t>(i)],
                                instance.goals()[static_cast<std::size_t>(i)]));
  }
  return lb;
}

Metrics compute_metrics(const Instance& instance, const Plan& plan) {
  Metrics m;
  for (int i = 0; i < instance.size(); ++i) {
    const auto& p = plan.paths[static_cast<std::size_t>(i)];
    const Vertex& g = instance.goals()[static_cast<std::size_t>(i)];
    int arrival = 0;
    for (int t = static_cast<int>(p.size()) - 1; t >= 0; --t) {
      if (p[static_cast<std::size_t>(t)] != g) {
        arrival = t + 1;
        break;
      }
    }
    m.soc += arrival;
    m.makespan = std::max(m.makespan, arrival);
  }
  m.manhattan_lb = manhattan_lower_bound(instance);
  if (m.manhattan_lb > 0) {
    m.optimality_ratio = static_cast<double>(m.makespan) / m.manhattan_lb;
  } else if (m.makespan == 0) {
    m.optimality_ratio = 1.0;
  }
  return m;
}

void trim_trailing_rests(Plan& plan) {
  int keep = 0;
  for (const auto& p : plan.paths) {
    int last_change = 0;
    for (std::size_t t = 1; t < p.size(); ++t) {
      if (p[t] != p[t - 1]) last_change = static_cast<int>(t);
    }
    keep = std::max(keep, last_change);
  }
  for (auto& p : plan.paths) {
    if (static_cast<int>(p.size()) > keep + 1) p.resize(static_cast<std::size_t>(keep) + 1);
  }
}

}  // namespace grmapf
