#include "grmapf/swap_table.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

namespace grmapf {

bool is_supported_shape(const SwapShape& s) {
  return (s.rows == 3 && s.cols == 2) || (s.rows == 4 && s.cols == 2) ||
         (s.rows == 2 && s.cols == 3) || (s.rows == 3 && s.cols == 3) ||
         (s.rows == 2 && s.cols == 4);
}

namespace {

constexpr int kMaxCells = 9;
using State = std::array<std::uint8_t, kMaxCells>;  // state[cell] = token

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::uint32_t rank_perm(const State& s, int n) {
  std::uint32_t r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += s[j] < s[i];
    r = r * static_cast<std::uint32_t>(n - i) + static_cast<std::uint32_t>(smaller);
  }
  return r;
}

State unrank_perm(std::uint32_t r, int n) {
  std::array<int, kMaxCells> digits{};
  for (int i = n - 1; i >= 0; --i) {
    const auto base = static_cast<std::uint32_t>(n - i);
    digits[i] = static_cast<int>(r % base);
    r /= base;
  }
  std::array<bool, kMaxCells> used{};
  State s{};
  for (int i = 0; i < n; ++i) {
    int k = digits[i];
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      if (k-- == 0) {
        s[i] = static_cast<std::uint8_t>(v);
        used[v] = true;
        break;
      }
    }
  }
  return s;
}

// A synchronous move: succ[cell] = where the token in `cell` goes (identity off-cycle).
using Move = std::array<std::uint8_t, kMaxCells>;

std::vector<std::vector<int>> directed_cycles(SwapShape shape) {
  const int n = shape.cells();
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
  for (int r = 0; r < shape.rows; ++r) {
    for (int c = 0; c < shape.cols; ++c) {
      const int v = r * shape.cols + c;
      if (r > 0) nbr[static_cast<std::size_t>(v)].push_back(v - shape.cols);
      if (r + 1 < shape.rows) nbr[static_cast<std::size_t>(v)].push_back(v + shape.cols);
      if (c > 0) nbr[static_cast<std::size_t>(v)].push_back(v - 1);
      if (c + 1 < shape.cols) nbr[static_cast<std::size_t>(v)].push_back(v + 1);
    }
  }
  std::vector<std::vector<int>> cycles;
  std::vector<int> path;
  std::vector<char> on(static_cast<std::size_t>(n), 0);
  // Cycles rooted at their smallest vertex; both orientations are kept.
  auto dfs = [&](auto&& self, int root, int v) -> void {
    for (int w : nbr[static_cast<std::size_t>(v)]) {
      if (w == root && path.size() >= 3) {
        cycles.push_back(path);
      } else if (w > root && !on[static_cast<std::size_t>(w)]) {
        on[static_cast<std::size_t>(w)] = 1;
        path.push_back(w);
        self(self, root, w);
        path.pop_back();
        on[static_cast<std::size_t>(w)] = 0;
      }
    }
  };
  for (int root = 0; root < n; ++root) {
    path = {root};
    on[static_cast<std::size_t>(root)] = 1;
    dfs(dfs, root, root);
    on[static_cast<std::size_t>(root)] = 0;
  }
  return cycles;
}

std::vector<Move> synchronous_moves(SwapShape shape) {
  const int n = shape.cells();
  const auto cycles = directed_cycles(shape);
  std::vector<std::uint32_t> masks;
  for (const auto& c : cycles) {
    std::uint32_t m = 0;
    for (int v : c) m |= 1u << v;
    masks.push_back(m);
  }
  std::vector<Move> moves;
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t start, std::uint32_t used) -> void {
    if (!chosen.empty()) {
      Move mv{};
      for (int v = 0; v < n; ++v) mv[v] = static_cast<std::uint8_t>(v);
      for (std::size_t k : chosen) {
        const auto& c = cycles[k];
        for (std::size_t i = 0; i < c.size(); ++i) {
          mv[c[i]] = static_cast<std::uint8_t>(c[(i + 1) % c.size()]);
        }
      }
      moves.push_back(mv);
    }
    for (std::size_t k = start; k < cycles.size(); ++k) {
      if (masks[k] & used) continue;
      chosen.push_back(k);
      self(self, k + 1, used | masks[k]);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0);
  return moves;
}

}  // namespace

std::size_t SwapTable::key(std::span<const std::uint8_t> dest) const {
  const int c = shape_.cols;
  const auto fc = static_cast<std::size_t>(factorial(c));
  std::size_t k = 0;
  for (int r = shape_.rows - 1; r >= 0; --r) {
    State row{};
    for (int j = 0; j < c; ++j) row[j] = dest[static_cast<std::size_t>(r * c + j)];
    k = k * fc + rank_perm(row, c);
  }
  return k;
}

std::vector<SwapPattern> SwapTable::patterns() const {
  const int c = shape_.cols;
  const auto fc = static_cast<std::size_t>(factorial(c));
  std::vector<SwapPattern> out;
  out.reserve(plans_.size());
  for (std::size_t k = 0; k < plans_.size(); ++k) {
    SwapPattern p{shape_, std::vector<std::uint8_t>(static_cast<std::size_t>(shape_.cells()))};
    std::size_t rest = k;
    for (int r = 0; r < shape_.rows; ++r) {
      const State row = unrank_perm(static_cast<std::uint32_t>(rest % fc), c);
      rest /= fc;
      for (int j = 0; j < c; ++j) p.dest[static_cast<std::size_t>(r * c + j)] = row[j];
    }
    out.push_back(std::move(p));
  }
  return out;
}

SwapTable SwapTable::generate(SwapShape shape) {
  if (!is_supported_shape(shape)) {
    throw PreconditionError("unsupported swap table shape " + std::to_string(shape.rows) + "x" +
                            std::to_string(shape.cols));
  }
  const int n = shape.cells();
  const auto moves = synchronous_moves(shape);
  const auto total = static_cast<std::size_t>(factorial(n));
  std::vector<std::int32_t> parent(total, -1);
  std::vector<std::int8_t> dist(total, -1);

  State identity{};
  for (int v = 0; v < n; ++v) identity[v] = static_cast<std::uint8_t>(v);
  const auto root = rank_perm(identity, n);
  dist[root] = 0;
  std::vector<std::uint32_t> frontier{root};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t r : frontier) {
      const State s = unrank_perm(r, n);
      for (const Move& mv : moves) {
        State t{};
        for (int v = 0; v < n; ++v) t[mv[v]] = s[v];
        const auto tr = rank_perm(t, n);
        if (dist[tr] >= 0) continue;
        dist[tr] = static_cast<std::int8_t>(dist[r] + 1);
        parent[tr] = static_cast<std::int32_t>(r);
        next.push_back(tr);
      }
    }
    frontier = std::move(next);
  }

  SwapTable table;
  table.shape_ = shape;
  const auto fc = static_cast<std::size_t>(factorial(shape.cols));
  std::size_t count = 1;
  for (int r = 0; r < shape.rows; ++r) count *= fc;
  table.plans_.resize(count);
  const auto pats = table.patterns();
  for (std::size_t k = 0; k < pats.size(); ++k) {
    const auto& p = pats[k];
    State target{};
    for (int cell = 0; cell < n; ++cell) {
      const int r = cell / shape.cols;
      target[r * shape.cols + p.dest[static_cast<std::size_t>(cell)]] = static_cast<std::uint8_t>(cell);
    }
    std::vector<std::uint32_t> chain;
    for (auto cur = rank_perm(target, n);; cur = static_cast<std::uint32_t>(parent[cur])) {
      chain.push_back(cur);
      if (cur == root) break;
      if (parent[cur] < 0) throw ScheduleError("swap pattern unreachable");
    }
    std::reverse(chain.begin(), chain.end());
    SubgridPlan plan;
    for (auto rk : chain) {
      const State s = unrank_perm(rk, n);
      std::vector<std::uint8_t> pos(static_cast<std::size_t>(n));
      for (int cell = 0; cell < n; ++cell) pos[s[cell]] = static_cast<std::uint8_t>(cell);
      plan.positions.push_back(std::move(pos));
    }
    table.plans_[k] = std::move(plan);
  }
  return table;
}

int SwapTable::max_steps() const {
  int m = 0;
  for (const auto& p : plans_) m = std::max(m, p.steps());
  return m;
}

const SubgridPlan& SwapTable::plan(const SwapPattern& pattern) const {
  if (pattern.shape != shape_) throw PreconditionError("pattern shape does not match table");
  return plan(pattern.dest);
}

const SubgridPlan& SwapTable::plan(std::span<const std::uint8_t> dest) const {
  if (static_cast<int>(dest.size()) != shape_.cells()) throw PreconditionError("pattern size mismatch");
  for (int r = 0; r < shape_.rows; ++r) {
    unsigned seen = 0;
    for (int c = 0; c < shape_.cols; ++c) {
      const int d = dest[static_cast<std::size_t>(r * shape_.cols + c)];
      if (d >= shape_.cols) throw PreconditionError("pattern column out of range");
      seen |= 1u << d;
    }
    if (seen != (1u << shape_.cols) - 1) throw PreconditionError("pattern row is not a permutation");
  }
  return plans_[key(dest)];
}

namespace {

constexpr char kMagic[8] = {'G', 'R', 'M', 'S', 'W', 'A', 'P', '\0'};

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

bool get_u32(std::istream& is, std::uint32_t& v) {
  v = 0;
  for (int i = 0; i < 4; ++i) {
    const int c = is.get();
    if (c == EOF) return false;
    v |= static_cast<std::uint32_t>(c & 0xff) << (8 * i);
  }
  return true;
}

}  // namespace

bool SwapTable::save(const std::filesystem::path& file) const {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) return false;
    os.write(kMagic, sizeof kMagic);
    put_u32(os, kSwapTableVersion);
    os.put(static_cast<char>(shape_.rows));
    os.put(static_cast<char>(shape_.cols));
    put_u32(os, static_cast<std::uint32_t>(plans_.size()));
    for (std::size_t k = 0; k < plans_.size(); ++k) {
      const auto& p = plans_[k];
      put_u32(os, static_cast<std::uint32_t>(k));
      os.put(static_cast<char>(p.steps()));
      for (const auto& pos : p.positions) {
        os.write(reinterpret_cast<const char*>(pos.data()), static_cast<std::streamsize>(pos.size()));
      }
    }
    if (!os) return false;
  }
  std::filesystem::rename(tmp, file, ec);
  return !ec;
}

std::optional<SwapTable> SwapTable::load(const std::filesystem::path& file, SwapShape shape) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
  std::uint32_t version = 0;
  if (!get_u32(is, version) || version != kSwapTableVersion) return std::nullopt;
  const int rows = is.get();
  const int cols = is.get();
  if (rows != shape.rows || cols != shape.cols) return std::nullopt;
  std::uint32_t count = 0;
  if (!get_u32(is, count)) return std::nullopt;
  SwapTable t;
  t.shape_ = shape;
  std::size_t expected = 1;
  for (int r = 0; r < rows; ++r) expected *= static_cast<std::size_t>(factorial(cols));
  if (count != expected) return std::nullopt;
  t.plans_.resize(count);
  const auto n = static_cast<std::size_t>(shape.cells());
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t k = 0;
    if (!get_u32(is, k) || k >= count) return std::nullopt;
    const int steps = is.get();
    if (steps < 0 || steps > 64) return std::nullopt;
    SubgridPlan p;
    for (int s = 0; s <= steps; ++s) {
      std::vector<std::uint8_t> pos(n);
      if (!is.read(reinterpret_cast<char*>(pos.data()), static_cast<std::streamsize>(n))) return std::nullopt;
      p.positions.push_back(std::move(pos));
    }
    t.plans_[k] = std::move(p);
  }
  return t;
}

std::filesystem::path swap_table_cache_path(SwapShape shape) {
  std::filesystem::path dir;
  if (const char* env = std::getenv("GRMAPF_CACHE_DIR"); env && *env) {
    dir = env;
  } else {
    std::error_code ec;
    dir = std::filesystem::temp_directory_path(ec);
    if (ec) dir = ".";
    dir /= "grmapf-cache";
  }
  return dir / ("swap_" + std::to_string(shape.rows) + "x" + std::to_string(shape.cols) + "_v" +
                std::to_string(kSwapTableVersion) + ".bin");
}

const SwapTable& swap_table(SwapShape shape) {
  static std::mutex mu;
  static std::map<SwapShape, std::unique_ptr<SwapTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[shape];
  if (!slot) {
    if (!is_supported_shape(shape)) {
      throw PreconditionError("unsupported swap table shape " + std::to_string(shape.rows) + "x" +
                              std::to_string(shape.cols));
    }
    const auto path = swap_table_cache_path(shape);
    if (auto loaded = SwapTable::load(path, shape)) {
      slot = std::make_unique<SwapTable>(std::move(*loaded));
    } else {
      slot = std::make_unique<SwapTable>(SwapTable::generate(shape));
      slot->save(path);  // best effort
    }
  }
  return *slot;
}

}  // namespace grmapf
