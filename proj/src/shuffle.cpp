#include "grmapf/shuffle.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "grmapf/swap_table.hpp"

namespace grmapf {

std::vector<VertexId> LaneView::vertices() const {
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(lanes) * length);
  for (int l = 0; l < lanes; ++l) {
    for (int p = 0; p < length; ++p) out.push_back(at(l, p));
  }
  return out;
}

LaneView LaneView::rows(const GridSpec& g, int x0, int h, int z) {
  return LaneView{g.id(x0, 0, z), g.stride_x(), g.stride_y(), h, g.cols()};
}

LaneView LaneView::cols(const GridSpec& g, int y0, int w, int z) {
  return LaneView{g.id(0, y0, z), g.stride_y(), g.stride_x(), w, g.rows()};
}

std::pair<Instance, Plan> segment_as_plan(const GridSpec& grid, const Segment& segment) {
  std::vector<Vertex> starts;
  std::vector<Vertex> goals;
  Plan plan;
  for (const auto& tr : segment.tracks) {
    starts.push_back(grid.at(tr.path.front()));
    goals.push_back(grid.at(tr.path.back()));
    std::vector<Vertex> p;
    p.reserve(tr.path.size());
    for (VertexId v : tr.path) p.push_back(grid.at(v));
    plan.paths.push_back(std::move(p));
  }
  plan.densify();
  return {Instance(grid, std::move(starts), std::move(goals)), std::move(plan)};
}

namespace {

void pad_to(std::vector<VertexId>& p, std::size_t len) {
  if (p.size() < len) p.resize(len, p.back());
}

struct Block {
  int start;
  int width;
  bool merged;  // false for a lone half-block that must already be in order
};

std::vector<Block> round_blocks(int block_size, int m, int round, const std::vector<int>& halves) {
  std::vector<Block> out;
  if (block_size == 2) {
    int s = round % 2;
    if (s == 1) out.push_back({0, 1, false});
    for (; s + 1 < m; s += 2) out.push_back({s, 2, true});
    if (s < m) out.push_back({s, 1, false});
    return out;
  }
  std::vector<int> offs(halves.size() + 1, 0);
  std::partial_sum(halves.begin(), halves.end(), offs.begin() + 1);
  std::size_t h = 0;
  if (round % 2 == 1 && !halves.empty()) {
    out.push_back({0, halves[0], false});
    h = 1;
  }
  for (; h + 1 < halves.size(); h += 2) out.push_back({offs[h], halves[h] + halves[h + 1], true});
  if (h < halves.size()) out.push_back({offs[h], halves[h], false});
  return out;
}

// The swap scheme follows from the strip height.
int strip_scheme(int lanes) {
  if (lanes == 2) return 4;
  if (lanes == 3 || lanes == 4) return 2;
  throw PreconditionError("strip height must be 2, 3 or 4");
}

}  // namespace

int strip_round_budget(int block_size, int m) {
  return block_size == 4 ? (m + 1) / 2 + 2 : m;
}

std::vector<int> quad_half_blocks(int m) {
  std::vector<int> h;
  if (m % 4 == 2) {
    h.push_back(1);
    for (int i = 0; i < (m - 2) / 2; ++i) h.push_back(2);
    h.push_back(1);
  } else {
    for (int i = 0; i < m / 2; ++i) h.push_back(2);
    if (m % 2 == 1) h.push_back(1);
  }
  return h;
}

int strip_rounds_for_bits(const std::vector<int>& bits, int block_size) {
  const int m = static_cast<int>(bits.size());
  const auto halves = quad_half_blocks(m);
  std::vector<int> cur = bits;
  const int budget = strip_round_budget(block_size, m);
  for (int round = 0;; ++round) {
    if (std::is_sorted(cur.begin(), cur.end())) return round;
    if (round >= budget) return -1;
    for (const auto& b : round_blocks(block_size, m, round, halves)) {
      auto first = cur.begin() + b.start;
      auto last = first + b.width;
      if (b.merged) {
        std::sort(first, last);
      } else if (!std::is_sorted(first, last)) {
        return -1;
      }
    }
  }
}

StripShuffleResult parallel_row_shuffle_full(const LaneView& strip,
                                             const std::vector<std::vector<int>>& occupant,
                                             const std::vector<std::vector<int>>& dest, int block_size) {
  if (block_size != 2 && block_size != 4) throw PreconditionError("block size must be 2 or 4");
  const int h = strip.lanes;
  const int m = strip.length;
  if (static_cast<int>(occupant.size()) != h || static_cast<int>(dest.size()) != h) {
    throw PreconditionError("strip data does not match the strip height");
  }
  const int scheme = strip_scheme(h);
  if (m < (scheme == 4 ? 3 : 2)) throw PreconditionError("strip too short for its block scheme");

  // token = lane * m + start pos
  std::vector<int> target(static_cast<std::size_t>(h) * m);
  std::vector<std::vector<int>> cur(static_cast<std::size_t>(h), std::vector<int>(static_cast<std::size_t>(m)));
  for (int l = 0; l < h; ++l) {
    if (static_cast<int>(dest[static_cast<std::size_t>(l)].size()) != m ||
        static_cast<int>(occupant[static_cast<std::size_t>(l)].size()) != m) {
      throw PreconditionError("lane data does not match the strip length");
    }
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    for (int p = 0; p < m; ++p) {
      const int d = dest[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)];
      if (d < 0 || d >= m || seen[static_cast<std::size_t>(d)]) {
        throw PreconditionError("lane " + std::to_string(l) + " targets are not a permutation");
      }
      seen[static_cast<std::size_t>(d)] = 1;
      target[static_cast<std::size_t>(l * m + p)] = d;
      cur[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)] = l * m + p;
    }
  }
  std::vector<std::vector<VertexId>> path(static_cast<std::size_t>(h) * m);
  for (int l = 0; l < h; ++l) {
    for (int p = 0; p < m; ++p) path[static_cast<std::size_t>(l * m + p)].push_back(strip.at(l, p));
  }

  auto sorted = [&]() {
    for (int l = 0; l < h; ++l) {
      for (int p = 0; p < m; ++p) {
        if (target[static_cast<std::size_t>(cur[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)])] != p) {
          return false;
        }
      }
    }
    return true;
  };

  const auto halves = quad_half_blocks(m);
  const int budget = strip_round_budget(scheme, m);
  StripShuffleResult result;
  result.block_size = scheme;
  std::size_t len = 1;
  int round = 0;
  for (; !sorted(); ++round) {
    if (round >= budget) {
      throw ScheduleError("strip shuffle exceeded its round budget of " + std::to_string(budget));
    }
    std::size_t round_len = len;
    for (const auto& b : round_blocks(scheme, m, round, halves)) {
      const int w = b.width;
      std::vector<std::uint8_t> local(static_cast<std::size_t>(h * w));
      bool identity = true;
      for (int l = 0; l < h; ++l) {
        auto& row = cur[static_cast<std::size_t>(l)];
        std::vector<int> idx(static_cast<std::size_t>(w));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int c) {
          return target[static_cast<std::size_t>(row[static_cast<std::size_t>(b.start + a)])] <
                 target[static_cast<std::size_t>(row[static_cast<std::size_t>(b.start + c)])];
        });
        for (int rank = 0; rank < w; ++rank) {
          local[static_cast<std::size_t>(l * w + idx[static_cast<std::size_t>(rank)])] = static_cast<std::uint8_t>(rank);
          if (idx[static_cast<std::size_t>(rank)] != rank) identity = false;
        }
      }
      if (identity) continue;
      if (!b.merged) throw ScheduleError("lone half-block out of order");
      const auto& plan = swap_table(SwapShape{h, w}).plan(local);
      // Tokens of this block, indexed by local cell.
      std::vector<int> tok(static_cast<std::size_t>(h * w));
      for (int l = 0; l < h; ++l) {
        for (int c = 0; c < w; ++c) {
          tok[static_cast<std::size_t>(l * w + c)] = cur[static_cast<std::size_t>(l)][static_cast<std::size_t>(b.start + c)];
        }
      }
      for (std::size_t t = 1; t < plan.positions.size(); ++t) {
        for (int cell = 0; cell < h * w; ++cell) {
          const int to = plan.positions[t][static_cast<std::size_t>(cell)];
          path[static_cast<std::size_t>(tok[static_cast<std::size_t>(cell)])].push_back(
              strip.at(to / w, b.start + to % w));
        }
      }
      round_len = std::max(round_len, len + plan.positions.size() - 1);
      for (int cell = 0; cell < h * w; ++cell) {
        const int to = plan.positions.back()[static_cast<std::size_t>(cell)];
        cur[static_cast<std::size_t>(to / w)][static_cast<std::size_t>(b.start + to % w)] =
            tok[static_cast<std::size_t>(cell)];
      }
    }
    for (auto& p : path) pad_to(p, round_len);
    len = round_len;
  }
  result.rounds = round;
  result.segment.duration = static_cast<int>(len) - 1;
  for (int l = 0; l < h; ++l) {
    for (int p = 0; p < m; ++p) {
      const int a = occupant[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)];
      if (a < 0) continue;
      result.segment.tracks.push_back({a, std::move(path[static_cast<std::size_t>(l * m + p)])});
    }
  }
  return result;
}

int linear_merge_bound(int m) {
  int lg = 0;
  while ((1 << lg) < m) ++lg;
  return m + 2 * (lg + 1);
}

namespace {

struct MergeNode {
  int lo, mid, hi;
};

// Merge nodes grouped by depth. The left half takes the extra element: right-movers pay two extra
// steps for the bypass, so they should cross the smaller half. Level k then costs at most
// floor(ceil(m / 2^k) / 2) + 2, which telescopes to m - 1 + 2 ceil(log2 m).
void collect_merges(int lo, int hi, int depth, std::vector<std::vector<MergeNode>>& by_depth) {
  if (hi - lo <= 1) return;
  const int mid = lo + (hi - lo + 1) / 2;
  if (static_cast<int>(by_depth.size()) <= depth) by_depth.resize(static_cast<std::size_t>(depth) + 1);
  by_depth[static_cast<std::size_t>(depth)].push_back({lo, mid, hi});
  collect_merges(lo, mid, depth + 1, by_depth);
  collect_merges(mid, hi, depth + 1, by_depth);
}

void check_placements(const LaneView& band, std::span<const LinePlacement> agents,
                      std::vector<int>& agent_at, std::vector<int>& dest_at) {
  const int m = band.length;
  agent_at.assign(static_cast<std::size_t>(m), -1);
  dest_at.assign(static_cast<std::size_t>(m), -1);
  std::vector<char> taken(static_cast<std::size_t>(m), 0);
  for (const auto& a : agents) {
    if (a.pos < 0 || a.pos >= m || a.dest < 0 || a.dest >= m) {
      throw PreconditionError("agent " + std::to_string(a.agent) + " is not on the band's first lane");
    }
    if (agent_at[static_cast<std::size_t>(a.pos)] >= 0 || taken[static_cast<std::size_t>(a.dest)]) {
      throw PreconditionError("band positions or destinations collide");
    }
    agent_at[static_cast<std::size_t>(a.pos)] = a.agent;
    dest_at[static_cast<std::size_t>(a.pos)] = a.dest;
    taken[static_cast<std::size_t>(a.dest)] = 1;
  }
}

}  // namespace

Segment linear_merge(const GridSpec& grid, const LaneView& band, std::span<const LinePlacement> agents) {
  if (band.lanes != 2) throw PreconditionError("linear merge needs a 2-lane band");
  const int m = band.length;
  std::vector<int> agent_at, dest_at;
  check_placements(band, agents, agent_at, dest_at);
  for (int p = 0; p < m; ++p) {
    if (grid.blocked(band.at(0, p)) || grid.blocked(band.at(1, p))) {
      throw PreconditionError("linear merge band contains an obstacle");
    }
  }
  {
    // Phantoms take the unused destinations in position order.
    std::vector<char> taken(static_cast<std::size_t>(m), 0);
    for (int p = 0; p < m; ++p) {
      if (dest_at[static_cast<std::size_t>(p)] >= 0) taken[static_cast<std::size_t>(dest_at[static_cast<std::size_t>(p)])] = 1;
    }
    int d = 0;
    for (int p = 0; p < m; ++p) {
      if (dest_at[static_cast<std::size_t>(p)] >= 0) continue;
      while (taken[static_cast<std::size_t>(d)]) ++d;
      dest_at[static_cast<std::size_t>(p)] = d++;
    }
  }
  std::vector<std::vector<MergeNode>> by_depth;
  collect_merges(0, m, 0, by_depth);

  // tok_at[p] = token (start pos) currently at p.
  std::vector<int> tok_at(static_cast<std::size_t>(m));
  std::iota(tok_at.begin(), tok_at.end(), 0);
  std::vector<std::vector<VertexId>> path(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) path[static_cast<std::size_t>(p)].push_back(band.at(0, p));
  const auto real = [&](int tok) { return agent_at[static_cast<std::size_t>(tok)] >= 0; };

  std::size_t len = 1;
  for (std::size_t k = by_depth.size(); k-- > 0;) {
    int level = 0;
    // Timed moves per token for this level: (time, lane, pos) relative to the level start.
    std::vector<std::vector<VertexId>> local(static_cast<std::size_t>(m));
    std::vector<int> new_tok_at = tok_at;
    for (const auto& nd : by_depth[k]) {
      std::vector<int> order;
      for (int p = nd.lo; p < nd.hi; ++p) order.push_back(tok_at[static_cast<std::size_t>(p)]);
      std::vector<int> merged = order;
      std::stable_sort(merged.begin(), merged.end(), [&](int a, int b) {
        return dest_at[static_cast<std::size_t>(a)] < dest_at[static_cast<std::size_t>(b)];
      });
      std::vector<int> from(static_cast<std::size_t>(nd.hi - nd.lo));
      std::vector<int> to(static_cast<std::size_t>(nd.hi - nd.lo));
      for (int k = 0; k < nd.hi - nd.lo; ++k) {
        from[static_cast<std::size_t>(k)] = nd.lo + k;
        const int tok = order[static_cast<std::size_t>(k)];
        const auto it = std::find(merged.begin(), merged.end(), tok);
        to[static_cast<std::size_t>(k)] = nd.lo + static_cast<int>(it - merged.begin());
        new_tok_at[static_cast<std::size_t>(to[static_cast<std::size_t>(k)])] = tok;
      }
      for (int k = 0; k < nd.hi - nd.lo; ++k) {
        const int tok = order[static_cast<std::size_t>(k)];
        const int p = from[static_cast<std::size_t>(k)];
        const int q = to[static_cast<std::size_t>(k)];
        auto& lp = local[static_cast<std::size_t>(tok)];
        lp.push_back(band.at(0, p));
        if (q < p) {
          for (int x = p - 1; x >= q; --x) lp.push_back(band.at(0, x));
          if (real(tok)) level = std::max(level, p - q);
        } else if (q > p) {
          // Wait in the bypass until every left-mover crossing q has gone by.
          int up = 2 + (q - p);
          for (int j = 0; j < nd.hi - nd.lo; ++j) {
            const int pj = from[static_cast<std::size_t>(j)];
            const int qj = to[static_cast<std::size_t>(j)];
            if (qj < pj && qj < q && q <= pj) up = std::max(up, pj - q + 1);
          }
          lp.push_back(band.at(1, p));
          for (int x = p + 1; x <= q; ++x) lp.push_back(band.at(1, x));
          while (static_cast<int>(lp.size()) < up) lp.push_back(band.at(1, q));
          lp.push_back(band.at(0, q));
          if (real(tok)) level = std::max(level, up);
        }
      }
    }
    for (int tok = 0; tok < m; ++tok) {
      auto& lp = local[static_cast<std::size_t>(tok)];
      auto& gp = path[static_cast<std::size_t>(tok)];
      for (std::size_t t = 1; t < lp.size() && static_cast<int>(t) <= level; ++t) gp.push_back(lp[t]);
      pad_to(gp, len + static_cast<std::size_t>(level));
    }
    len += static_cast<std::size_t>(level);
    tok_at = std::move(new_tok_at);
  }
  Segment seg;
  seg.duration = static_cast<int>(len) - 1;
  if (seg.duration > linear_merge_bound(m)) {
    throw ScheduleError("linear merge exceeded m + 2(log m + 1)");
  }
  for (int p = 0; p < m; ++p) {
    if (real(p)) seg.tracks.push_back({agent_at[static_cast<std::size_t>(p)], std::move(path[static_cast<std::size_t>(p)])});
  }
  return seg;
}

Segment highway_route(const GridSpec& grid, const LaneView& band, std::span<const LinePlacement> agents) {
  if (band.lanes != 3) throw PreconditionError("highway needs a 3-lane band");
  std::vector<int> agent_at, dest_at;
  check_placements(band, agents, agent_at, dest_at);
  Segment seg;
  for (const auto& a : agents) {
    AgentTrack tr{a.agent, {band.at(1, a.pos)}};
    if (grid.blocked(band.at(1, a.pos)) || grid.blocked(band.at(1, a.dest))) {
      throw PreconditionError("highway slot on an obstacle");
    }
    if (a.dest != a.pos) {
      const int lane = a.dest > a.pos ? 2 : 0;
      const int step = a.dest > a.pos ? 1 : -1;
      for (int x = a.pos;; x += step) {
        const VertexId v = band.at(lane, x);
        if (grid.blocked(v)) throw PreconditionError("highway lane blocked");
        tr.path.push_back(v);
        if (x == a.dest) break;
      }
      tr.path.push_back(band.at(1, a.dest));
      seg.duration = std::max(seg.duration, static_cast<int>(tr.path.size()) - 1);
    }
    seg.tracks.push_back(std::move(tr));
  }
  return seg;
}

Segment highway_shuffle(const GridSpec& grid, const LaneView& band, int cell_width,
                        std::span<const CellBound> agents) {
  const int cells = band.length / cell_width;
  auto cell_of = [&](int pos) { return pos / cell_width; };
  std::vector<std::vector<int>> free_slots(static_cast<std::size_t>(cells));
  std::vector<char> reserved(static_cast<std::size_t>(band.length), 0);
  for (const auto& a : agents) {
    if (a.dest_cell < 0 || a.dest_cell >= cells) throw PreconditionError("destination cell out of range");
    if (a.dest_pos >= 0) {
      if (cell_of(a.dest_pos) != a.dest_cell) throw PreconditionError("exact slot outside destination cell");
      if (reserved[static_cast<std::size_t>(a.dest_pos)]) throw PreconditionError("exact slots collide");
      reserved[static_cast<std::size_t>(a.dest_pos)] = 1;
    }
  }
  // Agents already home without an exact slot keep their place if nobody reserved it.
  std::vector<int> dest(agents.size(), -1);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    if (a.dest_pos >= 0) {
      dest[i] = a.dest_pos;
    } else if (cell_of(a.pos) == a.dest_cell && !reserved[static_cast<std::size_t>(a.pos)]) {
      dest[i] = a.pos;
      reserved[static_cast<std::size_t>(a.pos)] = 1;
    }
  }
  for (int c = 0; c < cells; ++c) {
    for (int p = c * cell_width; p < (c + 1) * cell_width; ++p) {
      if (!reserved[static_cast<std::size_t>(p)] && !grid.blocked(band.at(1, p))) {
        free_slots[static_cast<std::size_t>(c)].push_back(p);
      }
    }
  }
  // Arrivals closest to the cell claim first; rightward from the far right end, leftward from the
  // far left end.
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (dest[i] < 0) pending.push_back(i);
  }
  std::vector<int> need(static_cast<std::size_t>(cells), 0);
  for (auto i : pending) ++need[static_cast<std::size_t>(agents[i].dest_cell)];
  for (int c = 0; c < cells; ++c) {
    if (need[static_cast<std::size_t>(c)] > static_cast<int>(free_slots[static_cast<std::size_t>(c)].size())) {
      throw CapacityError("cell " + std::to_string(c) + " of the band is over capacity", c);
    }
  }
  std::sort(pending.begin(), pending.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(agents[a].pos - agents[a].dest_cell * cell_width) <
           std::abs(agents[b].pos - agents[b].dest_cell * cell_width);
  });
  for (auto i : pending) {
    auto& fs = free_slots[static_cast<std::size_t>(agents[i].dest_cell)];
    const bool rightward = agents[i].pos < agents[i].dest_cell * cell_width;
    if (rightward) {
      dest[i] = fs.back();
      fs.pop_back();
    } else {
      dest[i] = fs.front();
      fs.erase(fs.begin());
    }
  }
  std::vector<LinePlacement> placements;
  placements.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) placements.push_back({agents[i].agent, agents[i].pos, dest[i]});
  return highway_route(grid, band, placements);
}

Segment compose_parallel_bands(std::vector<BandPlan> bands) {
  std::unordered_set<VertexId> used;
  std::vector<Segment> parts;
  for (auto& b : bands) {
    for (VertexId v : b.footprint) {
      if (!used.insert(v).second) throw PreconditionError("bands overlap at vertex " + std::to_string(v));
    }
    parts.push_back(std::move(b.segment));
  }
  return merge_segments(std::move(parts));
}

Segment merge_segments(std::vector<Segment> parts) {
  Segment out;
  for (auto& s : parts) {
    out.duration = std::max(out.duration, s.duration);
    for (auto& t : s.tracks) out.tracks.push_back(std::move(t));
  }
  return out;
}

}  // namespace grmapf
