#pragma once

#include <span>
#include <vector>

#include "grmapf/core.hpp"
#include "grmapf/shuffle.hpp"

namespace grmapf {

enum class Orientation { kHorizontal, kVertical };

/// Partition of each layer into k x k cells (k = 3, 2 or 1). Rows/columns beyond the last full
/// cell are residual and belong to no cell.
class CellPattern {
 public:
  /// Validates the obstacle layout: for k = 3 obstacles inside the cell area must sit on cell
  /// centres; for k < 3 the cell area must be obstacle-free.
  static CellPattern make(const GridSpec& grid, int cell_size);

  int cell_size() const { return k_; }
  int cell_rows() const { return rows_; }
  int cell_cols() const { return cols_; }
  int layers() const { return layers_; }
  int cell_count() const { return rows_ * cols_ * layers_; }
  /// Slots per cell; 2 for 3x3 cells when centres are blocked.
  int capacity() const { return capacity_; }
  bool centers_excluded() const { return centers_excluded_; }

  int cell_index(int a, int b, int z) const { return (a * cols_ + b) * layers_ + z; }
  /// Cell containing v, or -1 for residual vertices.
  int cell_of(const Vertex& v) const;
  int cell_row(int cell) const { return cell / (cols_ * layers_); }
  int cell_col(int cell) const { return (cell / layers_) % cols_; }
  int cell_layer(int cell) const { return cell % layers_; }

  /// Centred slots of a cell, ordered by increasing column (horizontal) or row (vertical).
  std::vector<Vertex> slots(int cell, Orientation o) const;
  std::vector<Vertex> cell_vertices(int cell) const;
  /// All centred slots of the whole grid, cell by cell.
  std::vector<Vertex> all_slots(Orientation o) const;

 private:
  int k_ = 1, rows_ = 0, cols_ = 0, layers_ = 1, capacity_ = 1;
  bool centers_excluded_ = false;
};

struct BalancedTargets {
  /// Chosen slot per agent (distinct, at most `capacity` per cell).
  std::vector<VertexId> target_of_agent;
  int bottleneck = 0;
};

/// Bottleneck-optimal assignment of agents to centred slots under Manhattan distance.
BalancedTargets balanced_targets(const GridSpec& grid, std::span<const VertexId> agents,
                                 const CellPattern& pattern, Orientation o);

/// Smallest d such that sources can be matched to distinct targets within Manhattan distance d.
/// Also returns the matching (target index per source).
int manhattan_bottleneck(const GridSpec& grid, std::span<const VertexId> sources,
                         std::span<const VertexId> targets, std::vector<int>* assignment = nullptr);

struct UnlabeledPlan {
  int makespan = 0;
  /// paths[i] starts at sources[i]; all have length makespan + 1.
  std::vector<std::vector<VertexId>> paths;
};

/// Minimum-horizon unlabeled routing via max flow on a time-expanded network.
/// horizon_limit < 0 means no limit; exceeding it throws InfeasibleError.
UnlabeledPlan unlabeled_route(const GridSpec& grid, std::span<const VertexId> sources,
                              std::span<const VertexId> targets, int horizon_limit = -1);

/// Whether a time-expanded network of horizon T routes all sources to targets.
bool unlabeled_feasible(const GridSpec& grid, std::span<const VertexId> sources,
                        std::span<const VertexId> targets, int horizon);

/// Moves each listed cell's agents onto that cell's centred slots; every motion stays inside its
/// cell. `cells` empty means all cells. positions[i] is agent i's vertex.
Segment center_balanced(const GridSpec& grid, const CellPattern& pattern,
                        std::span<const VertexId> positions, Orientation o,
                        std::span<const int> cells = {});

struct CellMove {
  int agent = -1;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
};

/// Labeled rearrangement inside cells: each move's endpoints must lie in the same cell and every
/// agent of an affected cell must be listed.
Segment arrange_within_cells(const GridSpec& grid, const CellPattern& pattern,
                             std::span<const CellMove> moves);

}  // namespace grmapf
