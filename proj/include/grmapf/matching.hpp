#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "grmapf/error.hpp"

namespace grmapf {

/// Payload carried by padding edges that do not correspond to a real agent.
inline constexpr int kVirtualAgent = -1;

struct BipartiteEdge {
  int left = 0;
  int right = 0;
  int payload = kVirtualAgent;
  friend bool operator==(const BipartiteEdge&, const BipartiteEdge&) = default;
};

class BipartiteMultigraph {
 public:
  BipartiteMultigraph(int left_size, int right_size) : left_size_(left_size), right_size_(right_size) {}

  int left_size() const { return left_size_; }
  int right_size() const { return right_size_; }
  const std::vector<BipartiteEdge>& edges() const { return edges_; }
  void add_edge(int left, int right, int payload);

  std::vector<int> left_degrees() const;
  std::vector<int> right_degrees() const;
  /// Common degree when every node on both sides has the same degree.
  std::optional<int> regular_degree() const;

 private:
  int left_size_;
  int right_size_;
  std::vector<BipartiteEdge> edges_;
};

/// One perfect matching: edges[l] is the edge covering left node l.
struct Matching {
  std::vector<BipartiteEdge> edges;
};

struct MatchingSet {
  std::vector<Matching> matchings;
  std::size_t size() const { return matchings.size(); }
};

/// Maximum-cardinality bipartite matching (Hopcroft-Karp with greedy start).
/// Returns the right partner of each left node or -1.
std::vector<int> max_bipartite_matching(int left_size, int right_size,
                                        const std::vector<std::vector<int>>& adjacency);

/// Colour-by-row multigraph: one edge (colour, row) per agent. With pad_virtual, virtual
/// edges are added (own-row colour first) until every node has degree `capacity`.
BipartiteMultigraph build_color_row_graph(int rows, int capacity, std::span<const int> color_of,
                                          std::span<const int> row_of, bool pad_virtual);

/// Splits a d-regular multigraph into d edge-disjoint perfect matchings.
/// `seed` permutes the edge order; 0 keeps the input order.
MatchingSet decompose_regular_multigraph(const BipartiteMultigraph& graph, std::uint64_t seed = 0);

class CostMatrix {
 public:
  static constexpr int kForbidden = std::numeric_limits<int>::max();

  explicit CostMatrix(int n, int fill = 0) : n_(n), v_(static_cast<std::size_t>(n) * n, fill) {}
  int size() const { return n_; }
  int& operator()(int r, int c) { return v_[static_cast<std::size_t>(r) * n_ + c]; }
  int operator()(int r, int c) const { return v_[static_cast<std::size_t>(r) * n_ + c]; }

 private:
  int n_;
  std::vector<int> v_;
};

struct BottleneckAssignment {
  std::vector<int> col_of_row;
  int bottleneck = 0;
};

/// Perfect assignment minimising the largest chosen cost.
BottleneckAssignment lba_bottleneck_matching(const CostMatrix& costs);

/// Agent data for the matching heuristics. Positions are measured along the dimension the
/// matchings are mapped onto (column groups in 2D, levels in 3D).
struct AgentColumns {
  std::span<const int> color;
  std::span<const int> row;
  std::span<const int> start;
  std::span<const int> goal;
};

/// lambda|c - start| + (1 - lambda)|c - goal| with lambda in {0, 1}.
int lba_agent_cost(int column, int start, int goal, int lambda);

/// Chooses which column group each matching is sent to. Matching k may go to any group;
/// every group receives exactly `group_size` matchings. Returns group index per matching.
std::vector<int> lba_assign_matchings(const MatchingSet& matchings, const AgentColumns& agents,
                                      int lambda, int group_size = 1);

/// Builds the matchings one at a time: matching k (destined for group k / group_size) is a
/// bottleneck matching of the remaining (colour, row) pairs under the agent cost.
MatchingSet lba_greedy_per_row(int rows, int capacity, const AgentColumns& agents, int lambda,
                               int group_size = 1);

/// Checks that matchings are perfect, disjoint and together use exactly the graph's edges.
bool audit_decomposition(const BipartiteMultigraph& graph, const MatchingSet& set);

}  // namespace grmapf
