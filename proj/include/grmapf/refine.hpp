#pragma once

#include "grmapf/core.hpp"

namespace grmapf {

struct RefineResult {
  Plan plan;
  int makespan_before = 0;
  int makespan_after = 0;
};

/// Executes the plan's spatial paths as early as the per-vertex entry order allows. Agents move
/// whenever the next visitor of their next vertex is them and that vertex is free or being vacated;
/// rotation cycles of three or more agents advance together. Throws PreconditionError when the
/// input plan is invalid.
RefineResult refine(const Instance& instance, const Plan& plan);

}  // namespace grmapf
