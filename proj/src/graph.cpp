#include "supanova/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace supanova {

InteractionGraph::InteractionGraph(std::size_t vertex_count,
                                   const std::vector<std::pair<Vertex, Vertex>>& edges)
    : adjacency_(vertex_count) {
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto [i, j] : edges) {
    if (i >= vertex_count || j >= vertex_count) {
      throw std::domain_error("edge endpoint out of range");
    }
    if (i == j) throw std::domain_error("self-loops are not allowed");
    auto key = std::minmax(i, j);
    if (!seen.insert({key.first, key.second}).second) continue;
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
    ++edge_count_;
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

InteractionGraph InteractionGraph::from_edge_list_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::size_t declared = 0;
  bool have_declared = false;
  Vertex max_index = 0;
  bool any = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    long long a = 0, b = 0;
    if (!(ls >> a)) continue;  // blank or comment-ish line
    if (!(ls >> b)) {
      if (!have_declared && !any) {
        declared = static_cast<std::size_t>(a);
        have_declared = true;
        continue;
      }
      throw std::invalid_argument("malformed edge line: " + line);
    }
    if (a < 1 || b < 1) throw std::invalid_argument("edge indices are 1-based: " + line);
    Vertex i = static_cast<Vertex>(a - 1);
    Vertex j = static_cast<Vertex>(b - 1);
    edges.emplace_back(i, j);
    max_index = std::max({max_index, i, j});
    any = true;
  }
  std::size_t n = any ? max_index + 1 : 0;
  if (have_declared) n = std::max(n, declared);
  return InteractionGraph(n, edges);
}

InteractionGraph InteractionGraph::from_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_edge_list_text(buffer.str());
}

const std::vector<Vertex>& InteractionGraph::neighbors(Vertex v) const {
  require_vertex(v);
  return adjacency_[v];
}

bool InteractionGraph::has_edge(Vertex i, Vertex j) const {
  require_vertex(i);
  require_vertex(j);
  const auto& nbrs = adjacency_[i];
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::vector<std::pair<Vertex, Vertex>> InteractionGraph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex i = 0; i < adjacency_.size(); ++i) {
    for (Vertex j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

void InteractionGraph::require_vertex(Vertex v) const {
  if (v >= adjacency_.size()) {
    throw std::domain_error("vertex " + std::to_string(v) + " out of range");
  }
}

void InteractionGraph::require_subset(const VertexSet& u) const {
  if (!is_canonical_set(u)) throw std::domain_error("vertex set is not canonical");
  if (!u.empty()) require_vertex(u.back());
}

InteractionGraph build_thresholded_graph(const Geometry& geometry, double r_cut) {
  if (geometry.atoms.empty()) throw std::invalid_argument("geometry has no atoms");
  if (!(r_cut > 0)) throw std::invalid_argument("cutoff radius must be positive");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i < geometry.atoms.size(); ++i) {
    for (Vertex j = i + 1; j < geometry.atoms.size(); ++j) {
      if (atom_distance(geometry.atoms[i], geometry.atoms[j]) <= r_cut) {
        edges.emplace_back(i, j);
      }
    }
  }
  return InteractionGraph(geometry.atoms.size(), edges);
}

InteractionGraph bond_graph(const Geometry& geometry) {
  if (!geometry.has_bonds()) {
    throw std::invalid_argument("geometry carries no bond list");
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& b : *geometry.bonds) edges.emplace_back(b.i, b.j);
  return InteractionGraph(geometry.atoms.size(), edges);
}

ShortestPathOracle::ShortestPathOracle(const InteractionGraph& graph)
    : n_(graph.vertex_count()), dist_(n_ * n_, kUnreachable) {
  std::deque<Vertex> queue;
  for (Vertex s = 0; s < n_; ++s) {
    auto* row = dist_.data() + static_cast<std::size_t>(s) * n_;
    row[s] = 0;
    queue.clear();
    queue.push_back(s);
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (Vertex v : graph.neighbors(u)) {
        if (row[v] == kUnreachable) {
          row[v] = row[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  if (n_ <= 64) {
    intervals_.assign(n_ * n_, 0);
    for (Vertex i = 0; i < n_; ++i) {
      for (Vertex j = 0; j < n_; ++j) {
        std::uint32_t d = distance(i, j);
        if (d == kUnreachable) continue;
        std::uint64_t mask = 0;
        for (Vertex w = 0; w < n_; ++w) {
          std::uint32_t a = distance(i, w);
          std::uint32_t b = distance(w, j);
          if (a != kUnreachable && b != kUnreachable && a + b == d) {
            mask |= std::uint64_t{1} << w;
          }
        }
        intervals_[static_cast<std::size_t>(i) * n_ + j] = mask;
      }
    }
  }
}

std::uint32_t ShortestPathOracle::distance(Vertex i, Vertex j) const {
  if (i >= n_ || j >= n_) throw std::domain_error("vertex out of range");
  return dist_[static_cast<std::size_t>(i) * n_ + j];
}

// ---------------------------------------------------------------------------
// Connectivity and convexity
// ---------------------------------------------------------------------------

bool is_connected_subset(const InteractionGraph& g, const VertexSet& u) {
  g.require_subset(u);
  if (u.size() <= 1) return true;
  std::vector<Vertex> stack{u.front()};
  std::set<Vertex> seen{u.front()};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (set_contains(u, w) && seen.insert(w).second) stack.push_back(w);
    }
  }
  return seen.size() == u.size();
}

namespace {

enum class ConvexStatus { Convex, NotConvex, Unreachable };

std::uint64_t set_mask64(const VertexSet& u) {
  std::uint64_t mask = 0;
  for (Vertex v : u) mask |= std::uint64_t{1} << v;
  return mask;
}

VertexSet mask64_to_set(std::uint64_t mask, std::size_t n) {
  VertexSet u;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (std::uint64_t{1} << i)) u.push_back(static_cast<Vertex>(i));
  }
  return u;
}

ConvexStatus convex_status(const InteractionGraph& g, const ShortestPathOracle& oracle,
                           const VertexSet& u) {
  if (u.size() <= 1) return ConvexStatus::Convex;
  if (oracle.has_interval_masks()) {
    std::uint64_t inside = set_mask64(u);
    for (std::size_t a = 0; a < u.size(); ++a) {
      for (std::size_t b = a + 1; b < u.size(); ++b) {
        if (!oracle.reachable(u[a], u[b])) return ConvexStatus::Unreachable;
        if (oracle.interval_mask(u[a], u[b]) & ~inside) return ConvexStatus::NotConvex;
      }
    }
    return ConvexStatus::Convex;
  }
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      std::uint32_t d = oracle.distance(u[a], u[b]);
      if (d == ShortestPathOracle::kUnreachable) return ConvexStatus::Unreachable;
      for (Vertex w = 0; w < g.vertex_count(); ++w) {
        if (set_contains(u, w)) continue;
        std::uint32_t dw1 = oracle.distance(u[a], w);
        std::uint32_t dw2 = oracle.distance(w, u[b]);
        if (dw1 != ShortestPathOracle::kUnreachable &&
            dw2 != ShortestPathOracle::kUnreachable && dw1 + dw2 == d) {
          return ConvexStatus::NotConvex;
        }
      }
    }
  }
  return ConvexStatus::Convex;
}

}  // namespace

VertexSet geodesic_hull(const InteractionGraph& g, const ShortestPathOracle& oracle,
                        const VertexSet& u) {
  g.require_subset(u);
  if (u.size() <= 1) return u;
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      if (!oracle.reachable(u[a], u[b])) {
        throw std::domain_error("geodesic hull of mutually unreachable vertices " +
                                set_to_string(u));
      }
    }
  }
  if (oracle.has_interval_masks()) {
    std::uint64_t hull = set_mask64(u);
    for (;;) {
      std::uint64_t next = hull;
      VertexSet members = mask64_to_set(hull, g.vertex_count());
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          next |= oracle.interval_mask(members[a], members[b]);
        }
      }
      if (next == hull) return members;
      hull = next;
    }
  }
  VertexSet hull = u;
  bool grew = true;
  while (grew) {
    grew = false;
    VertexSet additions;
    for (std::size_t a = 0; a < hull.size(); ++a) {
      for (std::size_t b = a + 1; b < hull.size(); ++b) {
        std::uint32_t d = oracle.distance(hull[a], hull[b]);
        for (Vertex w = 0; w < g.vertex_count(); ++w) {
          if (set_contains(hull, w) || set_contains(additions, w)) continue;
          std::uint32_t dw1 = oracle.distance(hull[a], w);
          std::uint32_t dw2 = oracle.distance(w, hull[b]);
          if (dw1 != ShortestPathOracle::kUnreachable &&
              dw2 != ShortestPathOracle::kUnreachable && dw1 + dw2 == d) {
            additions = set_union(additions, {w});
          }
        }
      }
    }
    if (!additions.empty()) {
      hull = set_union(hull, additions);
      grew = true;
    }
  }
  return hull;
}

bool is_convex_subset(const InteractionGraph& g, const ShortestPathOracle& oracle,
                      const VertexSet& u) {
  g.require_subset(u);
  ConvexStatus status = convex_status(g, oracle, u);
  if (status == ConvexStatus::Unreachable) {
    throw std::domain_error("convexity query on mutually unreachable vertices " +
                            set_to_string(u));
  }
  return status == ConvexStatus::Convex;
}

std::vector<VertexSet> conn_covers_up(const InteractionGraph& g, const VertexSet& u) {
  if (!is_connected_subset(g, u)) {
    throw std::domain_error("subset does not induce a connected subgraph: " +
                            set_to_string(u));
  }
  std::set<VertexSet> out;
  if (u.empty()) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) out.insert({v});
  } else {
    for (Vertex v : u) {
      for (Vertex w : g.neighbors(v)) {
        if (!set_contains(u, w)) out.insert(set_union(u, {w}));
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<VertexSet> conn_covers_down(const InteractionGraph& g, const VertexSet& u) {
  if (!is_connected_subset(g, u)) {
    throw std::domain_error("subset does not induce a connected subgraph: " +
                            set_to_string(u));
  }
  if (u.empty()) return {};
  if (u.size() == 1) return {VertexSet{}};
  std::vector<VertexSet> out;
  for (Vertex v : u) {
    VertexSet candidate = set_difference(u, {v});
    if (is_connected_subset(g, candidate)) out.push_back(std::move(candidate));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexSet> convex_covers_up(const InteractionGraph& g,
                                        const ShortestPathOracle& oracle,
                                        const VertexSet& u) {
  if (!is_convex_subset(g, oracle, u)) {
    throw std::domain_error("subset is not convex: " + set_to_string(u));
  }
  std::set<VertexSet> candidates;
  if (u.empty()) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) candidates.insert({v});
  } else {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (set_contains(u, v)) continue;
      if (!oracle.reachable(u.front(), v)) continue;
      candidates.insert(geodesic_hull(g, oracle, set_union(u, {v})));
    }
  }
  std::vector<VertexSet> out;
  for (const auto& c : candidates) {
    bool minimal = true;
    for (const auto& other : candidates) {
      if (other != c && is_subset(other, c)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(c);
  }
  return out;
}

namespace {

// Maximal convex subsets of s, by branching on the endpoints of convexity
// violations. Results are memoized by candidate set across one query.
const std::vector<VertexSet>& max_convex_subsets(
    const InteractionGraph& g, const ShortestPathOracle& oracle, const VertexSet& s,
    std::map<VertexSet, std::vector<VertexSet>>& memo) {
  auto it = memo.find(s);
  if (it != memo.end()) return it->second;

  std::optional<std::pair<Vertex, Vertex>> violation;
  if (oracle.has_interval_masks()) {
    std::uint64_t inside = set_mask64(s);
    for (std::size_t a = 0; a < s.size() && !violation; ++a) {
      for (std::size_t b = a + 1; b < s.size() && !violation; ++b) {
        if (!oracle.reachable(s[a], s[b]) ||
            (oracle.interval_mask(s[a], s[b]) & ~inside)) {
          violation = {s[a], s[b]};
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < s.size() && !violation; ++a) {
      for (std::size_t b = a + 1; b < s.size() && !violation; ++b) {
        std::uint32_t d = oracle.distance(s[a], s[b]);
        if (d == ShortestPathOracle::kUnreachable) {
          violation = {s[a], s[b]};
          break;
        }
        for (Vertex w = 0; w < g.vertex_count(); ++w) {
          if (set_contains(s, w)) continue;
          std::uint32_t dw1 = oracle.distance(s[a], w);
          std::uint32_t dw2 = oracle.distance(w, s[b]);
          if (dw1 != ShortestPathOracle::kUnreachable &&
              dw2 != ShortestPathOracle::kUnreachable && dw1 + dw2 == d) {
            violation = {s[a], s[b]};
            break;
          }
        }
      }
    }
  }

  std::vector<VertexSet> result;
  if (!violation) {
    result.push_back(s);
  } else {
    std::set<VertexSet> merged;
    for (Vertex drop : {violation->first, violation->second}) {
      const auto& sub = max_convex_subsets(g, oracle, set_difference(s, {drop}), memo);
      merged.insert(sub.begin(), sub.end());
    }
    for (const auto& c : merged) {
      bool maximal = true;
      for (const auto& other : merged) {
        if (other != c && is_subset(c, other)) {
          maximal = false;
          break;
        }
      }
      if (maximal) result.push_back(c);
    }
  }
  return memo.emplace(s, std::move(result)).first->second;
}

}  // namespace

std::vector<VertexSet> convex_covers_down(const InteractionGraph& g,
                                          const ShortestPathOracle& oracle,
                                          const VertexSet& u) {
  if (!is_convex_subset(g, oracle, u)) {
    throw std::domain_error("subset is not convex: " + set_to_string(u));
  }
  if (u.empty()) return {};
  if (u.size() == 1) return {VertexSet{}};
  std::map<VertexSet, std::vector<VertexSet>> memo;
  std::set<VertexSet> merged;
  for (Vertex v : u) {
    const auto& sub = max_convex_subsets(g, oracle, set_difference(u, {v}), memo);
    merged.insert(sub.begin(), sub.end());
  }
  std::vector<VertexSet> out;
  for (const auto& c : merged) {
    bool maximal = true;
    for (const auto& other : merged) {
      if (other != c && is_subset(c, other)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void require_enumerable(const InteractionGraph& g, std::size_t vertex_limit) {
  if (g.vertex_count() > vertex_limit) {
    throw std::invalid_argument("graph too large for exhaustive enumeration (" +
                                std::to_string(g.vertex_count()) + " > " +
                                std::to_string(vertex_limit) + " vertices)");
  }
}

VertexSet mask_to_set(std::uint32_t mask, std::size_t n) {
  VertexSet u;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (std::uint32_t{1} << i)) u.push_back(static_cast<Vertex>(i));
  }
  return u;
}

}  // namespace

std::vector<VertexSet> enumerate_convex_subsets(const InteractionGraph& g,
                                                const ShortestPathOracle& oracle,
                                                std::size_t max_size,
                                                std::size_t vertex_limit) {
  require_enumerable(g, vertex_limit);
  std::size_t n = g.vertex_count();
  std::vector<VertexSet> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    VertexSet u = mask_to_set(mask, n);
    if (u.size() > max_size) continue;
    if (convex_status(g, oracle, u) == ConvexStatus::Convex) out.push_back(std::move(u));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexSet> enumerate_connected_subsets(const InteractionGraph& g,
                                                   std::size_t max_size,
                                                   std::size_t vertex_limit) {
  require_enumerable(g, vertex_limit);
  std::size_t n = g.vertex_count();
  std::vector<VertexSet> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    VertexSet u = mask_to_set(mask, n);
    if (u.size() > max_size) continue;
    if (is_connected_subset(g, u)) out.push_back(std::move(u));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool is_clique(const InteractionGraph& g, const VertexSet& u) {
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      if (!g.has_edge(u[a], u[b])) return false;
    }
  }
  return true;
}

void extend_cliques(const InteractionGraph& g, VertexSet& current, Vertex next,
                    std::size_t max_size, std::vector<VertexSet>& out) {
  if (current.size() >= max_size) return;
  for (Vertex v = next; v < g.vertex_count(); ++v) {
    bool ok = true;
    for (Vertex u : current) {
      if (!g.has_edge(u, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    current.push_back(v);
    out.push_back(current);
    extend_cliques(g, current, v + 1, max_size, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<VertexSet> simplex_ideal(const InteractionGraph& g, int rank_limit) {
  if (rank_limit < -1) throw std::invalid_argument("simplex rank must be >= -1");
  std::vector<VertexSet> out{VertexSet{}};
  if (rank_limit >= 0) {
    VertexSet current;
    extend_cliques(g, current, 0, static_cast<std::size_t>(rank_limit) + 1, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Consistency diagnostics
// ---------------------------------------------------------------------------

namespace {

// Induced subgraph facts for small subsets.
std::size_t induced_edge_count(const InteractionGraph& g, const VertexSet& u) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      if (g.has_edge(u[a], u[b])) ++count;
    }
  }
  return count;
}

bool induces_cycle(const InteractionGraph& g, const VertexSet& u) {
  if (u.size() < 3) return false;
  if (induced_edge_count(g, u) != u.size()) return false;
  for (Vertex v : u) {
    std::size_t deg = 0;
    for (Vertex w : u) {
      if (w != v && g.has_edge(v, w)) ++deg;
    }
    if (deg != 2) return false;
  }
  return is_connected_subset(g, u);
}

void scan_small_graph(const InteractionGraph& g, ConnConsistencyReport& report) {
  std::size_t n = g.vertex_count();
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    VertexSet u = mask_to_set(mask, n);
    if (u.size() < 4) continue;
    if (induces_cycle(g, u)) {
      report.chordless_cycles.push_back(u);
    } else if (u.size() == 4 && induced_edge_count(g, u) == 5) {
      report.chorded_four_cycles.push_back(u);
    }
  }
}

// Diamonds have a unique edge between their two degree-3 vertices, so a scan
// over edges and non-adjacent common-neighbor pairs finds every one.
void scan_diamonds(const InteractionGraph& g, ConnConsistencyReport& report,
                   std::size_t cap) {
  std::set<VertexSet> found;
  for (auto [a, b] : g.edges()) {
    VertexSet common = set_intersection(g.neighbors(a), g.neighbors(b));
    for (std::size_t x = 0; x < common.size(); ++x) {
      for (std::size_t y = x + 1; y < common.size(); ++y) {
        if (!g.has_edge(common[x], common[y])) {
          found.insert(canonical_set({a, b, common[x], common[y]}));
          if (found.size() >= cap) goto done;
        }
      }
    }
  }
done:
  report.chorded_four_cycles.assign(found.begin(), found.end());
}

// Holes through a vertex v with two non-adjacent neighbors x, y: a shortest
// x-y path avoiding the rest of N[v] closes an induced cycle of length >= 4.
void scan_holes(const InteractionGraph& g, ConnConsistencyReport& report,
                std::size_t cap) {
  std::set<VertexSet> found;
  std::size_t n = g.vertex_count();
  for (Vertex v = 0; v < n && found.size() < cap; ++v) {
    const auto& nbrs = g.neighbors(v);
    for (std::size_t a = 0; a < nbrs.size() && found.size() < cap; ++a) {
      for (std::size_t b = a + 1; b < nbrs.size() && found.size() < cap; ++b) {
        Vertex x = nbrs[a], y = nbrs[b];
        if (g.has_edge(x, y)) continue;
        // BFS from x to y in the graph minus (N[v] - {x, y}).
        std::vector<char> blocked(n, 0);
        blocked[v] = 1;
        for (Vertex w : nbrs) blocked[w] = 1;
        blocked[x] = 0;
        blocked[y] = 0;
        std::vector<Vertex> parent(n, 0);
        std::vector<char> seen(n, 0);
        std::deque<Vertex> queue{x};
        seen[x] = 1;
        bool reached = false;
        while (!queue.empty() && !reached) {
          Vertex u = queue.front();
          queue.pop_front();
          for (Vertex w : g.neighbors(u)) {
            if (blocked[w] || seen[w]) continue;
            seen[w] = 1;
            parent[w] = u;
            if (w == y) {
              reached = true;
              break;
            }
            queue.push_back(w);
          }
        }
        if (!reached) continue;
        VertexSet cycle{v};
        for (Vertex w = y; w != x; w = parent[w]) cycle.push_back(w);
        cycle.push_back(x);
        found.insert(canonical_set(cycle));
      }
    }
  }
  report.chordless_cycles.assign(found.begin(), found.end());
}

}  // namespace

ConnConsistencyReport diagnose_conn_consistency(const InteractionGraph& g,
                                                std::size_t exhaustive_limit) {
  ConnConsistencyReport report;
  if (g.vertex_count() <= 14) {
    scan_small_graph(g, report);
  } else {
    scan_holes(g, report, 64);
    scan_diamonds(g, report, 64);
  }
  report.meet_closed = report.forbidden_free();

  if (g.vertex_count() <= exhaustive_limit) {
    auto connected = enumerate_connected_subsets(g, g.vertex_count(), exhaustive_limit);
    bool closed = true;
    for (std::size_t a = 0; a < connected.size() && closed; ++a) {
      for (std::size_t b = a + 1; b < connected.size(); ++b) {
        VertexSet meet = set_intersection(connected[a], connected[b]);
        if (!is_connected_subset(g, meet)) {
          closed = false;
          report.witness = {connected[a], connected[b]};
          break;
        }
      }
    }
    report.exhaustive_meet_closed = closed;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Axes over induced-subgraph posets
// ---------------------------------------------------------------------------

namespace {

class SubsetFamilyAxis : public AxisImpl {
 public:
  explicit SubsetFamilyAxis(std::shared_ptr<const InteractionGraph> graph)
      : graph_(std::move(graph)) {
    if (!graph_) throw std::invalid_argument("null graph");
  }

  AxisElement least() const final { return AxisElement::subset({}); }
  bool less_equal(const AxisElement& s, const AxisElement& t) const final {
    return is_subset(s.subset(), t.subset());
  }
  std::uint64_t linear_extension_rank(const AxisElement& s) const final {
    return s.subset().size();
  }

 protected:
  std::shared_ptr<const InteractionGraph> graph_;
};

class ConnectedAxis final : public SubsetFamilyAxis {
 public:
  using SubsetFamilyAxis::SubsetFamilyAxis;
  std::string name() const override {
    return "conn[" + std::to_string(graph_->vertex_count()) + "]";
  }
  bool contains(const AxisElement& s) const override {
    if (!s.holds_subset()) return false;
    const VertexSet& u = s.subset();
    if (!u.empty() && u.back() >= graph_->vertex_count()) return false;
    return is_connected_subset(*graph_, u);
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    std::vector<AxisElement> out;
    for (auto& u : conn_covers_up(*graph_, s.subset())) {
      out.push_back(AxisElement::subset(std::move(u)));
    }
    return out;
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    std::vector<AxisElement> out;
    for (auto& u : conn_covers_down(*graph_, s.subset())) {
      out.push_back(AxisElement::subset(std::move(u)));
    }
    return out;
  }
};

class ConvexAxis final : public SubsetFamilyAxis {
 public:
  explicit ConvexAxis(std::shared_ptr<const InteractionGraph> graph)
      : SubsetFamilyAxis(std::move(graph)), oracle_(*graph_) {}
  std::string name() const override {
    return "convex[" + std::to_string(graph_->vertex_count()) + "]";
  }
  bool contains(const AxisElement& s) const override {
    if (!s.holds_subset()) return false;
    const VertexSet& u = s.subset();
    if (!u.empty() && u.back() >= graph_->vertex_count()) return false;
    return convex_status(*graph_, oracle_, u) == ConvexStatus::Convex;
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = up_cache_.find(s.subset());
      if (it != up_cache_.end()) return it->second;
    }
    std::vector<AxisElement> out;
    for (auto& u : convex_covers_up(*graph_, oracle_, s.subset())) {
      out.push_back(AxisElement::subset(std::move(u)));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return up_cache_.emplace(s.subset(), std::move(out)).first->second;
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = down_cache_.find(s.subset());
      if (it != down_cache_.end()) return it->second;
    }
    std::vector<AxisElement> out;
    for (auto& u : convex_covers_down(*graph_, oracle_, s.subset())) {
      out.push_back(AxisElement::subset(std::move(u)));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return down_cache_.emplace(s.subset(), std::move(out)).first->second;
  }

 private:
  ShortestPathOracle oracle_;
  mutable std::mutex mutex_;
  mutable std::map<VertexSet, std::vector<AxisElement>> up_cache_;
  mutable std::map<VertexSet, std::vector<AxisElement>> down_cache_;
};

class CliqueAxis final : public SubsetFamilyAxis {
 public:
  CliqueAxis(std::shared_ptr<const InteractionGraph> graph, int rank_limit)
      : SubsetFamilyAxis(std::move(graph)), rank_limit_(rank_limit) {
    if (rank_limit < -1) throw std::invalid_argument("simplex rank must be >= -1");
  }
  std::string name() const override {
    return "simplex[" + std::to_string(rank_limit_) + "]";
  }
  bool contains(const AxisElement& s) const override {
    if (!s.holds_subset()) return false;
    const VertexSet& u = s.subset();
    if (!u.empty() && u.back() >= graph_->vertex_count()) return false;
    if (static_cast<long long>(u.size()) > static_cast<long long>(rank_limit_) + 1) {
      return false;
    }
    return is_clique(*graph_, u);
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    const VertexSet& u = s.subset();
    if (!contains(s)) throw std::domain_error("not a simplex member: " + set_to_string(u));
    std::vector<AxisElement> out;
    if (static_cast<long long>(u.size()) >= static_cast<long long>(rank_limit_) + 1) {
      return out;
    }
    for (Vertex v = 0; v < graph_->vertex_count(); ++v) {
      if (set_contains(u, v)) continue;
      bool ok = true;
      for (Vertex w : u) {
        if (!graph_->has_edge(w, v)) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(AxisElement::subset(set_union(u, {v})));
    }
    return out;
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    const VertexSet& u = s.subset();
    if (!contains(s)) throw std::domain_error("not a simplex member: " + set_to_string(u));
    std::vector<AxisElement> out;
    for (Vertex v : u) out.push_back(AxisElement::subset(set_difference(u, {v})));
    return out;
  }

 private:
  int rank_limit_;
};

}  // namespace

PosetAxis connected_subsets_axis(std::shared_ptr<const InteractionGraph> graph) {
  return PosetAxis(std::make_shared<ConnectedAxis>(std::move(graph)));
}

PosetAxis convex_subsets_axis(std::shared_ptr<const InteractionGraph> graph) {
  return PosetAxis(std::make_shared<ConvexAxis>(std::move(graph)));
}

PosetAxis simplex_axis(std::shared_ptr<const InteractionGraph> graph, int rank_limit) {
  return PosetAxis(std::make_shared<CliqueAxis>(std::move(graph), rank_limit));
}

}  // namespace supanova
