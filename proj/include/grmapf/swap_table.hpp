#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "grmapf/error.hpp"

namespace grmapf {

struct SwapShape {
  int rows = 0;
  int cols = 0;
  friend auto operator<=>(const SwapShape&, const SwapShape&) = default;
  int cells() const { return rows * cols; }
};

/// Shapes for which tables are produced: 3x2, 4x2, 2x3, 3x3, 2x4.
bool is_supported_shape(const SwapShape& shape);

/// Per-row target permutation on a full sub-grid: dest[r * cols + c] is the column the token
/// starting at (r, c) must reach, staying in row r.
struct SwapPattern {
  SwapShape shape;
  std::vector<std::uint8_t> dest;
};

/// Timed plan on the sub-grid: positions[t][token] is the cell (r * cols + c) occupied by the
/// token that started in cell `token`.
struct SubgridPlan {
  std::vector<std::vector<std::uint8_t>> positions;
  int steps() const { return positions.empty() ? 0 : static_cast<int>(positions.size()) - 1; }
};

class SwapTable {
 public:
  static SwapTable generate(SwapShape shape);
  static std::optional<SwapTable> load(const std::filesystem::path& file, SwapShape shape);
  bool save(const std::filesystem::path& file) const;

  SwapShape shape() const { return shape_; }
  int max_steps() const;
  std::size_t size() const { return plans_.size(); }

  /// Optimal plan for a pattern.
  const SubgridPlan& plan(const SwapPattern& pattern) const;
  const SubgridPlan& plan(std::span<const std::uint8_t> dest) const;
  int steps(std::span<const std::uint8_t> dest) const { return plan(dest).steps(); }

  /// All patterns in table order (row permutations enumerated lexicographically, row 0 fastest).
  std::vector<SwapPattern> patterns() const;

 private:
  SwapShape shape_{};
  std::vector<SubgridPlan> plans_;  // indexed by pattern key
  std::size_t key(std::span<const std::uint8_t> dest) const;
};

/// Bumped whenever generation or the file layout changes.
inline constexpr std::uint32_t kSwapTableVersion = 1;

/// Process-wide table for a shape: memory, then the disk cache, then generation.
/// The cache directory is $GRMAPF_CACHE_DIR or <tmp>/grmapf-cache.
const SwapTable& swap_table(SwapShape shape);

/// Cache path used for a shape.
std::filesystem::path swap_table_cache_path(SwapShape shape);

}  // namespace grmapf
