#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "supanova/geometry.hpp"
#include "supanova/poset.hpp"

namespace supanova {

// Undirected simple graph over 0-based vertex indices.
class InteractionGraph {
 public:
  InteractionGraph(std::size_t vertex_count,
                   const std::vector<std::pair<Vertex, Vertex>>& edges);

  // Edge-list text, one "i j" pair per line with 1-based indices; an optional
  // leading single-integer line fixes the vertex count (otherwise the largest
  // index seen determines it).
  static InteractionGraph from_edge_list_text(const std::string& text);
  static InteractionGraph from_edge_list_file(const std::string& path);

  std::size_t vertex_count() const { return adjacency_.size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const;
  bool has_edge(Vertex i, Vertex j) const;
  std::vector<std::pair<Vertex, Vertex>> edges() const;
  std::size_t edge_count() const { return edge_count_; }

  void require_vertex(Vertex v) const;
  void require_subset(const VertexSet& u) const;

 private:
  std::vector<std::vector<Vertex>> adjacency_;  // sorted
  std::size_t edge_count_ = 0;
};

// Edge iff the Euclidean distance is within the cutoff radius.
InteractionGraph build_thresholded_graph(const Geometry& geometry, double r_cut);

// Bond graph: one edge per bond, orders ignored.
InteractionGraph bond_graph(const Geometry& geometry);

// All-pairs hop counts by BFS; unreachable pairs report kUnreachable. For
// graphs of at most 64 vertices the geodesic intervals are additionally
// precomputed as bitmasks, which turns hulls and convexity checks into word
// operations.
class ShortestPathOracle {
 public:
  static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

  explicit ShortestPathOracle(const InteractionGraph& graph);

  std::uint32_t distance(Vertex i, Vertex j) const;
  bool reachable(Vertex i, Vertex j) const { return distance(i, j) != kUnreachable; }
  std::size_t vertex_count() const { return n_; }

  bool has_interval_masks() const { return !intervals_.empty(); }
  // Bit w is set iff w lies on some shortest i-j path (endpoints included);
  // zero for unreachable pairs.
  std::uint64_t interval_mask(Vertex i, Vertex j) const {
    return intervals_[static_cast<std::size_t>(i) * n_ + j];
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::uint64_t> intervals_;
};

// ---------------------------------------------------------------------------
// Connectivity and geodesic convexity
// ---------------------------------------------------------------------------

// The empty set and singletons count as connected.
bool is_connected_subset(const InteractionGraph& g, const VertexSet& u);

// Smallest geodesically convex superset of u: closes over every vertex lying
// on any shortest path between members. All members must be mutually
// reachable.
VertexSet geodesic_hull(const InteractionGraph& g, const ShortestPathOracle& oracle,
                        const VertexSet& u);

bool is_convex_subset(const InteractionGraph& g, const ShortestPathOracle& oracle,
                      const VertexSet& u);

// Covers in the poset of connected vertex subsets (with the empty set
// adjoined as least element).
std::vector<VertexSet> conn_covers_up(const InteractionGraph& g, const VertexSet& u);
std::vector<VertexSet> conn_covers_down(const InteractionGraph& g, const VertexSet& u);

// Minimal convex strict supersets: hulls of u plus one reachable vertex,
// reduced to the inclusion-minimal candidates.
std::vector<VertexSet> convex_covers_up(const InteractionGraph& g,
                                        const ShortestPathOracle& oracle,
                                        const VertexSet& u);

// Maximal convex strict subsets, found by branch-and-prune repair over
// single-vertex deletions.
std::vector<VertexSet> convex_covers_down(const InteractionGraph& g,
                                          const ShortestPathOracle& oracle,
                                          const VertexSet& u);

// Brute-force oracle: every convex subset with size at most max_size.
// Refuses graphs larger than vertex_limit.
std::vector<VertexSet> enumerate_convex_subsets(const InteractionGraph& g,
                                                const ShortestPathOracle& oracle,
                                                std::size_t max_size,
                                                std::size_t vertex_limit = 12);

std::vector<VertexSet> enumerate_connected_subsets(const InteractionGraph& g,
                                                   std::size_t max_size,
                                                   std::size_t vertex_limit = 12);

// All subsets inducing complete subgraphs of size at most R+1 (the empty set
// included; R = -1 gives only the empty set).
std::vector<VertexSet> simplex_ideal(const InteractionGraph& g, int rank_limit);

// ---------------------------------------------------------------------------
// Consistency diagnostics
// ---------------------------------------------------------------------------

struct ConnConsistencyReport {
  // Vertex sets inducing chordless cycles of length >= 4.
  std::vector<VertexSet> chordless_cycles;
  // Vertex sets inducing a four-cycle with exactly one chord.
  std::vector<VertexSet> chorded_four_cycles;
  bool forbidden_free() const {
    return chordless_cycles.empty() && chorded_four_cycles.empty();
  }
  // Whether connected subsets are closed under intersection (the
  // forbidden-subgraph verdict).
  bool meet_closed = true;
  // Exhaustive cross-check, run for small graphs only.
  std::optional<bool> exhaustive_meet_closed;
  std::optional<std::pair<VertexSet, VertexSet>> witness;  // failing pair
};

// Scans for the forbidden induced subgraphs that break intersection-closure
// of the connected-subset family; for graphs with at most exhaustive_limit
// vertices the verdict is cross-validated against an exhaustive meet-closure
// check.
ConnConsistencyReport diagnose_conn_consistency(const InteractionGraph& g,
                                                std::size_t exhaustive_limit = 12);

// ---------------------------------------------------------------------------
// Axes over induced-subgraph posets
// ---------------------------------------------------------------------------

// Posets are restricted per connected component: subsets spanning unreachable
// vertices are not members.
PosetAxis connected_subsets_axis(std::shared_ptr<const InteractionGraph> graph);
PosetAxis convex_subsets_axis(std::shared_ptr<const InteractionGraph> graph);
PosetAxis simplex_axis(std::shared_ptr<const InteractionGraph> graph, int rank_limit);

}  // namespace supanova
