#pragma once

// Internal building blocks shared by the 2D and 3D pipelines.

#include <cstdint>
#include <string>
#include <vector>

#include "grmapf/core.hpp"
#include "grmapf/shuffle.hpp"
#include "grmapf/solvers.hpp"
#include "grmapf/unlabeled.hpp"

namespace grmapf::detail {

enum class Kind { kHighway, kMerge, kFull };
enum class Axis { kRow, kCol };

/// Dense per-agent history plus the phase trace.
class Timeline {
 public:
  explicit Timeline(const std::vector<VertexId>& start);

  int size() const { return static_cast<int>(pos_.size()); }
  int now() const { return now_; }
  const std::vector<VertexId>& pos() const { return pos_; }
  const std::vector<std::vector<VertexId>>& paths() const { return paths_; }
  PhaseTrace& trace() { return trace_; }

  void apply(const Segment& seg, const std::string& name, std::vector<int> expected_cell = {});

 private:
  std::vector<std::vector<VertexId>> paths_;
  std::vector<VertexId> pos_;
  int now_ = 0;
  PhaseTrace trace_;
};

struct Ctx {
  const GridSpec& grid;
  CellPattern pattern;
  Kind kind;
  int grm_block = 4;
};

struct GraResult {
  std::vector<int> group;  // per listed agent
  int first = 0;           // max |group - start|
  int last = 0;            // max |group - goal|
};

/// Column-group assignment for one GRA table. Vectors are per agent of the table.
GraResult gra_assign(int rows, int groups, int group_size, const std::vector<int>& row,
                     const std::vector<int>& color, const std::vector<int>& start,
                     const std::vector<int>& goal, MatchingMode mode, std::uint64_t seed);

/// Strip heights covering `total` lines for a full-density phase.
std::vector<int> strip_heights(int total, int block);

/// One band phase over every plane: agents go to dest_cell (index along the band); exact, when
/// not kNoVertex, pins the final vertex. Lazy re-centering precedes the band motion.
void run_band_phase(const Ctx& ctx, Timeline& tl, Axis axis, const std::vector<int>& dest_cell,
                    const std::vector<VertexId>& exact, const std::string& name);

/// Slot colour per agent so that agents of one pillar sharing a source level or a destination
/// level get distinct colours.
std::vector<int> pillar_colors(const Ctx& ctx, const std::vector<int>& pillar,
                               const std::vector<int>& src_level, const std::vector<int>& dst_level);

/// z-phase inside pillars. colors from pillar_colors; exact (optional) is arranged afterwards.
void run_pillar_phase(const Ctx& ctx, Timeline& tl, const std::vector<int>& dest_level,
                      const std::vector<int>& colors, const std::vector<VertexId>& exact,
                      const std::string& name);

}  // namespace grmapf::detail
