#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grmapf/error.hpp"

namespace grmapf {

/// Grid coordinate: x is the row, y the column, z the layer (0 in 2D).
struct Vertex {
  int x = 0;
  int y = 0;
  int z = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::string to_string(const Vertex& v);

/// Dense vertex index, (x * cols + y) * layers + z.
using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

/// Grid dimensions and obstacle set. Immutable once built.
class GridSpec {
 public:
  GridSpec() : GridSpec(1, 1, 1) {}
  GridSpec(int rows, int cols, int layers = 1, const std::vector<Vertex>& obstacles = {});

  int rows() const { return m1_; }
  int cols() const { return m2_; }
  int layers() const { return m3_; }
  bool is_3d() const { return m3_ > 1; }
  int size() const { return m1_ * m2_ * m3_; }
  int free_count() const { return size() - static_cast<int>(obstacles_.size()); }
  const std::vector<Vertex>& obstacles() const { return obstacles_; }

  bool in_bounds(const Vertex& v) const {
    return v.x >= 0 && v.x < m1_ && v.y >= 0 && v.y < m2_ && v.z >= 0 && v.z < m3_;
  }
  bool blocked(VertexId id) const { return blocked_[static_cast<std::size_t>(id)] != 0; }
  bool blocked(const Vertex& v) const { return blocked(id(v)); }

  VertexId id(const Vertex& v) const { return (v.x * m2_ + v.y) * m3_ + v.z; }
  VertexId id(int x, int y, int z = 0) const { return (x * m2_ + y) * m3_ + z; }
  Vertex at(VertexId id) const {
    return Vertex{id / (m2_ * m3_), (id / m3_) % m2_, id % m3_};
  }

  /// Strides of the dense index along each axis.
  int stride_x() const { return m2_ * m3_; }
  int stride_y() const { return m3_; }
  int stride_z() const { return 1; }

  /// True when a and b differ by one in exactly one coordinate.
  static bool adjacent(const Vertex& a, const Vertex& b);

  /// Calls f(neighbor) for every in-bounds, unblocked neighbor of v in a fixed order.
  template <class F>
  void for_each_free_neighbor(VertexId v, F&& f) const {
    const Vertex p = at(v);
    if (p.x > 0 && !blocked(v - stride_x())) f(v - stride_x());
    if (p.x + 1 < m1_ && !blocked(v + stride_x())) f(v + stride_x());
    if (p.y > 0 && !blocked(v - stride_y())) f(v - stride_y());
    if (p.y + 1 < m2_ && !blocked(v + stride_y())) f(v + stride_y());
    if (p.z > 0 && !blocked(v - 1)) f(v - 1);
    if (p.z + 1 < m3_ && !blocked(v + 1)) f(v + 1);
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.m1_ == b.m1_ && a.m2_ == b.m2_ && a.m3_ == b.m3_ && a.obstacles_ == b.obstacles_;
  }

 private:
  int m1_, m2_, m3_;
  std::vector<Vertex> obstacles_;  // sorted, unique
  std::vector<std::uint8_t> blocked_;
};

/// Labeled MAPF instance. The constructor enforces distinctness and obstacle-freedom.
class Instance {
 public:
  Instance(GridSpec grid, std::vector<Vertex> starts, std::vector<Vertex> goals);

  const GridSpec& grid() const { return grid_; }
  const std::vector<Vertex>& starts() const { return starts_; }
  const std::vector<Vertex>& goals() const { return goals_; }
  int size() const { return static_cast<int>(starts_.size()); }

 private:
  GridSpec grid_;
  std::vector<Vertex> starts_;
  std::vector<Vertex> goals_;
};

/// Timed per-agent paths. Shorter paths mean the agent rests at its last vertex.
struct Plan {
  std::vector<std::vector<Vertex>> paths;

  int makespan() const;
  const Vertex& at(std::size_t agent, int t) const;
  /// Pads every path to makespan + 1 entries.
  void densify();
};

enum class ViolationKind {
  kAgentCount,
  kEmptyPath,
  kStartMismatch,
  kGoalMismatch,
  kOutOfBounds,
  kNonAdjacentMove,
  kObstacle,
  kVertexCollision,
  kSwapCollision,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int time = 0;
  int agent = -1;
  int other = -1;
  Vertex vertex{};
  Vertex other_vertex{};

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
  std::string summary(std::size_t max_lines = 10) const;
};

/// Checks endpoints, adjacency, bounds, obstacles, vertex and swap collisions.
ValidationReport validate_plan(const GridSpec& grid, const Instance& instance, const Plan& plan);
inline ValidationReport validate_plan(const Instance& instance, const Plan& plan) {
  return validate_plan(instance.grid(), instance, plan);
}

struct Metrics {
  int makespan = 0;
  long long soc = 0;
  int manhattan_lb = 0;
  /// makespan / manhattan_lb; empty when the ratio is undefined (lb 0, makespan > 0).
  std::optional<double> optimality_ratio;
  bool ratio_undefined() const { return !optimality_ratio.has_value(); }
};

int manhattan(const Vertex& a, const Vertex& b);
int manhattan_lower_bound(const Instance& instance);

/// Metrics for a valid plan. Trailing rests do not count.
Metrics compute_metrics(const Instance& instance, const Plan& plan);

/// Drops trailing time steps in which every agent rests at its goal.
void trim_trailing_rests(Plan& plan);

}  // namespace grmapf
