#pragma once

#include <span>
#include <utility>
#include <vector>

#include "grmapf/core.hpp"

namespace grmapf {

/// A rectangular strip of the grid addressed as (lane, pos). Rows, columns and z-lines are all
/// expressed through strides, so one primitive serves every orientation.
struct LaneView {
  VertexId origin = 0;
  int lane_stride = 0;
  int pos_stride = 0;
  int lanes = 0;
  int length = 0;

  VertexId at(int lane, int pos) const { return origin + lane * lane_stride + pos * pos_stride; }
  std::vector<VertexId> vertices() const;

  /// Rows [x0, x0+h) of a 2D plane at layer z; pos runs along columns.
  static LaneView rows(const GridSpec& g, int x0, int h, int z = 0);
  /// Columns [y0, y0+w) of a 2D plane at layer z; pos runs along rows.
  static LaneView cols(const GridSpec& g, int y0, int w, int z = 0);
};

/// Motion of one agent; path[0] is its position when the segment starts. After the end of its
/// path the agent rests.
struct AgentTrack {
  int agent = -1;
  std::vector<VertexId> path;
};

/// A synchronized block of motion for a subset of agents.
struct Segment {
  int duration = 0;
  std::vector<AgentTrack> tracks;
};

/// Turns a segment into a standalone instance and plan (agent ids are re-indexed by track order).
std::pair<Instance, Plan> segment_as_plan(const GridSpec& grid, const Segment& segment);

// ---- full density ---------------------------------------------------------------------------

struct StripShuffleResult {
  Segment segment;
  int rounds = 0;
  int block_size = 2;  ///< scheme actually used
};

/// Round budget asserted for a line of length m.
int strip_round_budget(int block_size, int m);

/// Half-block widths for the block-4 schedule on a line of length m.
std::vector<int> quad_half_blocks(int m);

/// Permutes every lane of a full strip. occupant[lane][pos] is the agent there (-1 for a phantom
/// filler that is not reported); dest[lane][pos] is the target pos of that token, a permutation
/// per lane. 2-lane strips use 2x4/2x3 tables, 3- and 4-lane strips use 3x2/4x2 tables;
/// block_size is honoured when the strip height allows it.
StripShuffleResult parallel_row_shuffle_full(const LaneView& strip,
                                             const std::vector<std::vector<int>>& occupant,
                                             const std::vector<std::vector<int>>& dest, int block_size);

/// Rounds a schedule needs to sort the 0/1 sequence `bits` (lane count 1), or -1 past the budget.
int strip_rounds_for_bits(const std::vector<int>& bits, int block_size);

// ---- half density ---------------------------------------------------------------------------

struct LinePlacement {
  int agent = -1;
  int pos = 0;
  int dest = 0;
};

/// m + 2(ceil(log2 m) + 1).
int linear_merge_bound(int m);

/// Reorders agents on lane 0 of a 2-lane band; lane 1 is the bypass. Positions not listed are
/// treated as phantom fillers.
Segment linear_merge(const GridSpec& grid, const LaneView& band, std::span<const LinePlacement> agents);

// ---- one-third density ----------------------------------------------------------------------

/// Exact-slot highway routing on a 3-lane band. Agents sit on lane 1; movers toward larger pos use
/// lane 2, the others lane 0, and never stop in the lane.
Segment highway_route(const GridSpec& grid, const LaneView& band, std::span<const LinePlacement> agents);

struct CellBound {
  int agent = -1;
  int pos = 0;
  int dest_cell = 0;
  int dest_pos = -1;  ///< exact target pos, or -1 for any free slot of dest_cell
};

/// Cell-granular highway shuffle. Cells are `cell_width` positions wide; slots are the lane-1
/// vertices that are not obstacles. Arrivals claim slots farthest-first in their travel direction.
Segment highway_shuffle(const GridSpec& grid, const LaneView& band, int cell_width,
                        std::span<const CellBound> agents);

// ---- composition ----------------------------------------------------------------------------

struct BandPlan {
  std::vector<VertexId> footprint;
  Segment segment;
};

/// Union of plans on vertex-disjoint bands, padded to the longest.
Segment compose_parallel_bands(std::vector<BandPlan> bands);

/// Union of segments over disjoint agent sets without footprint checks.
Segment merge_segments(std::vector<Segment> parts);

}  // namespace grmapf
