#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grmapf/core.hpp"

namespace grmapf {

struct SearchLimits {
  std::size_t max_states = 4'000'000;
  int max_depth = 64;
};

/// Size of the joint state space: falling factorial (labeled) or binomial (unlabeled) over the
/// free vertices, saturated at SIZE_MAX.
std::size_t labeled_state_estimate(int free_vertices, int agents);
std::size_t unlabeled_state_estimate(int free_vertices, int agents);

struct OracleResult {
  int makespan = 0;
  Plan plan;
};

/// Breadth-first search over joint configurations. Throws LimitExceeded when the estimate is over
/// the limit or the depth bound is hit.
OracleResult optimal_makespan_labeled(const Instance& instance, const SearchLimits& limits = {});

struct UnlabeledOracleResult {
  int makespan = 0;
  /// paths[i] starts at sources[i] and ends on some target.
  std::vector<std::vector<VertexId>> paths;
};

UnlabeledOracleResult optimal_unlabeled_plan(const GridSpec& grid, std::span<const VertexId> sources,
                                             std::span<const VertexId> targets,
                                             const SearchLimits& limits = {});

int optimal_makespan_unlabeled(const GridSpec& grid, std::span<const Vertex> sources,
                               std::span<const Vertex> targets, const SearchLimits& limits = {});

}  // namespace grmapf
