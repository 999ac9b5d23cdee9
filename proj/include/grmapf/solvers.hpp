#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grmapf/core.hpp"

namespace grmapf {

enum class Algorithm { kGrm2, kGrm4, kGrh, kGrlm, kArbitraryHalf };
enum class MatchingMode { kHall, kLba };
enum class GrmVariant { kBlock2, kBlock4 };
enum class Base3d { kGrh, kGrlm, kGrm };

std::string to_string(Algorithm a);
std::string to_string(MatchingMode m);
Algorithm parse_algorithm(const std::string& s);
MatchingMode parse_matching(const std::string& s);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kGrh;
  int dimension = 2;
  MatchingMode matching = MatchingMode::kHall;
  bool refine = false;
  std::uint64_t seed = 0;
  /// Column, row, column schedule instead of row, column, row (2D GRH/GRLM only).
  bool column_first = false;
};

struct PhaseSpan {
  std::string name;
  int begin = 0;
  int end = 0;
  /// Cell each agent must occupy when the phase ends (empty when the phase declares none).
  std::vector<int> expected_cell;
};

struct PhaseTrace {
  std::vector<PhaseSpan> phases;
  int shuffle_begin = 0;
  int shuffle_end = 0;
  /// Largest cell distance any agent travels in the first and last shuffle phase.
  int first_phase_bottleneck = 0;
  int last_phase_bottleneck = 0;
  /// Cell edge length used for expected_cell (1, 2 or 3) and the cell grid shape.
  int cell_size = 1;
  int shuffle_makespan() const { return shuffle_end - shuffle_begin; }
};

struct SolveResult {
  Plan plan;
  PhaseTrace trace;
  /// Makespan before refinement (equal to the plan's when refinement is off).
  int synchronized_makespan = 0;
};

/// Full-density pipeline. Below full density the empty vertices are padded with fillers.
SolveResult solve_grm(const Instance& instance, GrmVariant variant,
                      MatchingMode matching = MatchingMode::kHall, std::uint64_t seed = 0);

/// One-third density pipeline on 3x3 cells with highway shuffles.
SolveResult solve_grh(const Instance& instance, const SolverConfig& config = {});

/// One-half density pipeline on 2x2 cells with linear-merge shuffles.
SolveResult solve_grlm(const Instance& instance, const SolverConfig& config = {});

/// GRH or GRLM chosen by density, with both unlabeled phases limited to m1 + m2 steps.
SolveResult solve_arbitrary_half(const Instance& instance, const SolverConfig& config = {});

/// Three-dimensional pipeline built on a 2D base.
SolveResult solve_3d(const Instance& instance, Base3d base, const SolverConfig& config = {});

/// Dispatch on config (dimension 3 routes to solve_3d); applies refinement when requested.
SolveResult solve(const Instance& instance, const SolverConfig& config);

}  // namespace grmapf
