#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grmapf/core.hpp"
#include "grmapf/solvers.hpp"

namespace grmapf {

enum class Pattern { kRandom, kSquares, kBlocks, kSortation };

std::string to_string(Pattern p);
Pattern parse_pattern(const std::string& s);

struct InstanceSpec {
  int rows = 0;
  int cols = 0;
  int layers = 1;
  double density = 0.0;
  Pattern pattern = Pattern::kRandom;
  std::uint64_t seed = 0;
};

/// Deterministic instance generator.
///  random: n = floor(density * free vertices) starts and goals drawn without replacement.
///  squares: every round(1/density)-th concentric ring is filled; goals are 180-degree rotations.
///  blocks: 4x4 blocks, round(16 * density) agents per block at random offsets; each block's
///          agents keep their offsets in a randomly permuted target block.
///  sortation: obstacles on every 3x3 cell centre, density <= 2/9, otherwise as random.
Instance generate_instance(const InstanceSpec& spec);

/// "12x9" or "12x6x6".
InstanceSpec parse_dims(const std::string& dims);

struct BenchmarkRecord {
  InstanceSpec spec;
  SolverConfig config;
  std::string label;
  int agents = 0;
  int makespan = 0;
  int synchronized_makespan = 0;
  long long soc = 0;
  int manhattan_lb = 0;
  std::optional<double> ratio;
  int shuffle_makespan = 0;
  double solve_ms = 0.0;
  double refine_ms = 0.0;
  std::string status;  ///< "valid", "invalid" or "error"
  std::string error;
};

struct BenchmarkSweep {
  std::vector<InstanceSpec> shapes;  ///< seed field ignored; seeds come from base_seed + k
  std::vector<SolverConfig> configs;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  int jobs = 1;
};

/// Short label such as "grh+lba+refine".
std::string config_label(const SolverConfig& c);

/// Runs one cell: generate, solve, validate, refine (timed separately), measure.
BenchmarkRecord run_cell(const InstanceSpec& spec, const SolverConfig& config);

/// Records come back in sweep order (shape, config, seed) regardless of jobs.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkSweep& sweep);

/// One JSON line. Timings are left out unless requested so that result files are reproducible.
std::string record_to_json(const BenchmarkRecord& r, bool with_timing);

/// Mean/max per (shape, density, pattern, label) over valid records only. The timing column is
/// optional because it breaks byte-for-byte reproducibility.
std::string summary_table(const std::vector<BenchmarkRecord>& records, bool with_timing = false);

/// results.jsonl, timing.jsonl and summary.txt inside dir (created if missing).
void write_benchmark(const std::vector<BenchmarkRecord>& records, const std::string& dir);

}  // namespace grmapf
