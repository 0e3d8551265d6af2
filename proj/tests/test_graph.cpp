#include <doctest.h>

#include <random>
#include <set>

#include "supanova/graph.hpp"
#include "test_helpers.hpp"

using namespace supanova;
using namespace supanova::testing;

namespace {

// 0-based path 0-1-2-3-4-5.
InteractionGraph hexane_chain() {
  return InteractionGraph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
}

// The six-cycle; also the hexane chain augmented with the closing edge.
InteractionGraph benzene_ring() {
  return InteractionGraph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
}

InteractionGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices,
                              double edge_probability, bool force_connected) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_vertices);
  std::size_t n = size_dist(rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (coin(rng) < edge_probability) edges.emplace_back(i, j);
    }
  }
  if (force_connected) {
    // Random spanning tree underneath.
    for (Vertex v = 1; v < n; ++v) {
      std::uniform_int_distribution<Vertex> parent(0, v - 1);
      edges.emplace_back(parent(rng), v);
    }
  }
  return InteractionGraph(n, edges);
}

InteractionGraph random_tree(std::mt19937_64& rng, std::size_t max_vertices) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_vertices);
  std::size_t n = size_dist(rng);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) {
    std::uniform_int_distribution<Vertex> parent(0, v - 1);
    edges.emplace_back(parent(rng), v);
  }
  return InteractionGraph(n, edges);
}

}  // namespace

TEST_CASE("connected subsets") {
  InteractionGraph hex = hexane_chain();
  CHECK(is_connected_subset(hex, {0, 1, 2}));
  CHECK_FALSE(is_connected_subset(hex, {0, 2, 3}));
  CHECK(is_connected_subset(hex, {}));
  CHECK(is_connected_subset(hex, {4}));
  CHECK_THROWS_AS((void)is_connected_subset(hex, {0, 9}), std::domain_error);

  InteractionGraph ring = benzene_ring();
  CHECK(is_connected_subset(ring, {0, 3, 4, 5}));
}

TEST_CASE("geodesic hulls on the six-cycle") {
  InteractionGraph ring = benzene_ring();
  ShortestPathOracle oracle(ring);
  CHECK(geodesic_hull(ring, oracle, {0, 2}) == VertexSet{0, 1, 2});
  CHECK(geodesic_hull(ring, oracle, {0, 3}) == VertexSet{0, 1, 2, 3, 4, 5});
  CHECK(geodesic_hull(ring, oracle, {1, 2}) == VertexSet{1, 2});
  CHECK(geodesic_hull(ring, oracle, {4}) == VertexSet{4});

  InteractionGraph split(3, {{0, 1}});
  ShortestPathOracle split_oracle(split);
  CHECK_THROWS_AS((void)geodesic_hull(split, split_oracle, {0, 2}), std::domain_error);
}

TEST_CASE("hull is idempotent, extensive, and monotone") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    InteractionGraph g = random_graph(rng, 8, 0.3, true);
    ShortestPathOracle oracle(g);
    std::uniform_int_distribution<std::uint32_t> mask_dist(
        0, (1u << g.vertex_count()) - 1);
    std::uint32_t m1 = mask_dist(rng);
    std::uint32_t m2 = m1 | mask_dist(rng);
    VertexSet u, v;
    for (Vertex i = 0; i < g.vertex_count(); ++i) {
      if (m1 & (1u << i)) u.push_back(i);
      if (m2 & (1u << i)) v.push_back(i);
    }
    VertexSet hu = geodesic_hull(g, oracle, u);
    CHECK(is_subset(u, hu));
    CHECK(geodesic_hull(g, oracle, hu) == hu);
    VertexSet hv = geodesic_hull(g, oracle, v);
    CHECK(is_subset(hu, hv));
  }
}

TEST_CASE("convexity on the six-cycle") {
  InteractionGraph ring = benzene_ring();
  ShortestPathOracle oracle(ring);
  CHECK(is_convex_subset(ring, oracle, {0, 1, 2}));
  CHECK_FALSE(is_convex_subset(ring, oracle, {0, 3, 4, 5}));
  CHECK(is_convex_subset(ring, oracle, {}));
}

TEST_CASE("connected covers") {
  InteractionGraph hex = hexane_chain();
  auto ups = conn_covers_up(hex, {1, 2});
  CHECK(ups == std::vector<VertexSet>{{0, 1, 2}, {1, 2, 3}});
  auto downs = conn_covers_down(hex, {1, 2});
  CHECK(downs == std::vector<VertexSet>{{1}, {2}});

  auto from_empty = conn_covers_up(hex, {});
  CHECK(from_empty.size() == 6);
  CHECK(conn_covers_down(hex, {3}) == std::vector<VertexSet>{{}});

  // Star: removing the hub disconnects.
  InteractionGraph star(4, {{0, 1}, {0, 2}, {0, 3}});
  auto star_downs = conn_covers_down(star, {0, 1, 2});
  CHECK(star_downs == std::vector<VertexSet>{{0, 1}, {0, 2}});

  CHECK_THROWS_AS((void)conn_covers_up(hex, {0, 2}), std::domain_error);
}

TEST_CASE("convex covers on the six-cycle") {
  InteractionGraph ring = benzene_ring();
  ShortestPathOracle oracle(ring);
  // Adding any vertex to a three-arc pulls in an antipodal pair, whose
  // geodesics cover the whole cycle: the only convex superset is the full
  // vertex set. Size jumps across covers are exactly the convex-geometry
  // failure mode for cyclic graphs.
  auto ups = convex_covers_up(ring, oracle, {0, 1, 2});
  CHECK(ups == std::vector<VertexSet>{{0, 1, 2, 3, 4, 5}});
  auto edge_ups = convex_covers_up(ring, oracle, {0, 1});
  CHECK(edge_ups == std::vector<VertexSet>{{0, 1, 2}, {0, 1, 5}});

  auto downs = convex_covers_down(ring, oracle, {0, 1, 2, 3, 4, 5});
  CHECK(downs.size() == 6);
  for (const auto& arc : downs) CHECK(arc.size() == 3);

  // Path graphs: convexity coincides with connectivity.
  InteractionGraph path(3, {{0, 1}, {1, 2}});
  ShortestPathOracle path_oracle(path);
  auto path_ups = convex_covers_up(path, path_oracle, {1});
  CHECK(path_ups == std::vector<VertexSet>{{0, 1}, {1, 2}});
  auto path_downs = convex_covers_down(path, path_oracle, {0, 1, 2});
  CHECK(path_downs == std::vector<VertexSet>{{0, 1}, {1, 2}});
  CHECK(convex_covers_down(path, path_oracle, {2}) == std::vector<VertexSet>{{}});
  CHECK(convex_covers_up(ring, oracle, {0, 1, 2, 3, 4, 5}).empty());
}

TEST_CASE("the six-cycle convexity family") {
  // The empty set, singletons, edges, three-vertex arcs, and the full set.
  // Four- and five-arcs contain an antipodal pair whose two geodesics sweep
  // the whole cycle, so they are not convex.
  InteractionGraph ring = benzene_ring();
  ShortestPathOracle oracle(ring);
  auto family = enumerate_convex_subsets(ring, oracle, 6);
  CHECK(family.size() == 20);
  std::map<std::size_t, int> by_rank;
  for (const auto& u : family) by_rank[u.size()]++;
  CHECK(by_rank[0] == 1);
  CHECK(by_rank[1] == 6);
  CHECK(by_rank[2] == 6);
  CHECK(by_rank[3] == 6);
  CHECK(by_rank[4] == 0);
  CHECK(by_rank[5] == 0);
  CHECK(by_rank[6] == 1);
  for (const auto& u : family) {
    if (u.size() == 2 || u.size() == 3) CHECK(is_connected_subset(ring, u));
  }
}

TEST_CASE("convex families are intersection-closed and connected") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    InteractionGraph g = random_graph(rng, 9, 0.35, true);
    ShortestPathOracle oracle(g);
    auto family = enumerate_convex_subsets(g, oracle, g.vertex_count());
    std::set<VertexSet> members(family.begin(), family.end());
    for (const auto& u : family) {
      CHECK(is_connected_subset(g, u));
      for (const auto& v : family) {
        CHECK(members.count(set_intersection(u, v)) == 1);
      }
    }
  }
}

TEST_CASE("multi-component graphs restrict the families per component") {
  // Edgeless graph: every pair is mutually unreachable, so only the empty
  // set and singletons are queryable members.
  InteractionGraph edgeless(3, {});
  ShortestPathOracle oracle(edgeless);
  auto family = enumerate_convex_subsets(edgeless, oracle, 3);
  CHECK(family.size() == 4);
  CHECK_THROWS_AS((void)is_convex_subset(edgeless, oracle, {0, 1}), std::domain_error);

  // Two components: subsets spanning both are excluded from either family.
  InteractionGraph split(4, {{0, 1}, {2, 3}});
  ShortestPathOracle split_oracle(split);
  auto convex = enumerate_convex_subsets(split, split_oracle, 4);
  for (const auto& u : convex) {
    CHECK(is_connected_subset(split, u));
  }
  CHECK_FALSE(is_connected_subset(split, {0, 2}));
  auto axis = convex_subsets_axis(std::make_shared<InteractionGraph>(split));
  CHECK_FALSE(axis.contains(sub({0, 2})));
  CHECK(axis.contains(sub({2, 3})));
}

TEST_CASE("trees: convex equals connected") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    InteractionGraph tree = random_tree(rng, 9);
    ShortestPathOracle oracle(tree);
    auto convex = enumerate_convex_subsets(tree, oracle, tree.vertex_count());
    auto connected = enumerate_connected_subsets(tree, tree.vertex_count());
    CHECK(convex == connected);
  }
}

TEST_CASE("convex covers agree with the enumeration oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    InteractionGraph g = random_graph(rng, 9, 0.35, true);
    ShortestPathOracle oracle(g);
    auto family = enumerate_convex_subsets(g, oracle, g.vertex_count());

    for (const auto& u : family) {
      // Expected covers from the raw family.
      std::vector<VertexSet> expected_up;
      for (const auto& v : family) {
        if (v == u || !is_subset(u, v)) continue;
        bool is_cover = true;
        for (const auto& w : family) {
          if (w != u && w != v && is_subset(u, w) && is_subset(w, v)) {
            is_cover = false;
            break;
          }
        }
        if (is_cover) expected_up.push_back(v);
      }
      std::sort(expected_up.begin(), expected_up.end());
      auto actual_up = convex_covers_up(g, oracle, u);
      std::sort(actual_up.begin(), actual_up.end());
      CHECK(actual_up == expected_up);

      std::vector<VertexSet> expected_down;
      for (const auto& v : family) {
        if (v == u || !is_subset(v, u)) continue;
        bool is_cover = true;
        for (const auto& w : family) {
          if (w != u && w != v && is_subset(v, w) && is_subset(w, u)) {
            is_cover = false;
            break;
          }
        }
        if (is_cover) expected_down.push_back(v);
      }
      std::sort(expected_down.begin(), expected_down.end());
      auto actual_down = convex_covers_down(g, oracle, u);
      CHECK(actual_down == expected_down);
    }
  }
}

TEST_CASE("simplex families") {
  InteractionGraph chain(4, {{0, 1}, {1, 2}, {2, 3}});
  auto r1 = simplex_ideal(chain, 1);
  // Empty set, 4 singletons, 3 adjacent pairs.
  CHECK(r1.size() == 8);
  auto r2 = simplex_ideal(chain, 2);
  CHECK(r2 == r1);  // no triangles in a path

  InteractionGraph triangle(3, {{0, 1}, {1, 2}, {0, 2}});
  auto full = simplex_ideal(triangle, 2);
  CHECK(full.size() == 8);  // the full powerset

  CHECK(simplex_ideal(chain, -1) == std::vector<VertexSet>{{}});

  // Every simplex is convex, and the family is downward closed.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    InteractionGraph g = random_graph(rng, 8, 0.4, true);
    ShortestPathOracle oracle(g);
    auto family = simplex_ideal(g, 3);
    std::set<VertexSet> members(family.begin(), family.end());
    for (const auto& u : family) {
      CHECK(is_convex_subset(g, oracle, u));
      for (Vertex v : u) CHECK(members.count(set_difference(u, {v})) == 1);
    }
  }
}

TEST_CASE("forbidden-subgraph diagnostics") {
  // Plain path: consistent.
  auto path_report = diagnose_conn_consistency(hexane_chain());
  CHECK(path_report.meet_closed);
  CHECK(path_report.forbidden_free());
  REQUIRE(path_report.exhaustive_meet_closed.has_value());
  CHECK(*path_report.exhaustive_meet_closed);

  // The closed six-cycle: a chordless hexagon, and the classic failing
  // intersection {0,1,2,3} with {0,3,4,5}.
  auto ring_report = diagnose_conn_consistency(benzene_ring());
  CHECK_FALSE(ring_report.meet_closed);
  REQUIRE(ring_report.chordless_cycles.size() == 1);
  CHECK(ring_report.chordless_cycles[0] == VertexSet{0, 1, 2, 3, 4, 5});
  REQUIRE(ring_report.exhaustive_meet_closed.has_value());
  CHECK_FALSE(*ring_report.exhaustive_meet_closed);
  REQUIRE(ring_report.witness.has_value());

  // Four-cycle with one chord.
  InteractionGraph diamond(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
  auto diamond_report = diagnose_conn_consistency(diamond);
  CHECK_FALSE(diamond_report.meet_closed);
  REQUIRE(diamond_report.chorded_four_cycles.size() == 1);
  CHECK(diamond_report.chorded_four_cycles[0] == VertexSet{0, 1, 2, 3});
  CHECK_FALSE(*diamond_report.exhaustive_meet_closed);
}

TEST_CASE("forbidden-subgraph verdict matches exhaustive meet closure") {
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 200) {
    InteractionGraph g = random_graph(rng, 8, 0.3, false);
    auto report = diagnose_conn_consistency(g);
    REQUIRE(report.exhaustive_meet_closed.has_value());
    CHECK(report.meet_closed == *report.exhaustive_meet_closed);
    ++checked;
  }
}

TEST_CASE("large-graph scans find the same forbidden structures") {
  // A 16-vertex graph: a closed six-cycle at one end of a long path, plus a
  // pendant diamond.
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i + 1 < 15; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(0, 5);    // closes a six-cycle 0..5
  edges.emplace_back(15, 8);   // pendant diamond on {7, 8, 9, 15}
  edges.emplace_back(15, 7);
  edges.emplace_back(15, 9);
  InteractionGraph g(16, edges);
  auto report = diagnose_conn_consistency(g);
  CHECK_FALSE(report.meet_closed);
  CHECK(!report.chordless_cycles.empty());
  bool found_cycle = false;
  for (const auto& c : report.chordless_cycles) {
    if (c == VertexSet{0, 1, 2, 3, 4, 5}) found_cycle = true;
  }
  CHECK(found_cycle);
  REQUIRE(report.chorded_four_cycles.size() == 1);
  CHECK(report.chorded_four_cycles[0] == VertexSet{7, 8, 9, 15});
}

TEST_CASE("thresholded graphs") {
  Geometry g;
  g.atoms = {{1, {0, 0, 0}}, {1, {2.4, 0, 0}}, {1, {10, 0, 0}}};
  InteractionGraph close = build_thresholded_graph(g, 2.5);
  CHECK(close.edge_count() == 1);
  CHECK(close.has_edge(0, 1));

  Geometry far;
  far.atoms = {{1, {0, 0, 0}}, {1, {2.6, 0, 0}}};
  CHECK(build_thresholded_graph(far, 2.5).edge_count() == 0);

  Geometry lone;
  lone.atoms = {{6, {0, 0, 0}}};
  CHECK(build_thresholded_graph(lone, 2.5).edge_count() == 0);
  CHECK_THROWS_AS(build_thresholded_graph(lone, 0.0), std::invalid_argument);
}

TEST_CASE("edge list parsing") {
  InteractionGraph g = InteractionGraph::from_edge_list_text("6\n1 2\n2 3\n");
  CHECK(g.vertex_count() == 6);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK_THROWS_AS(InteractionGraph::from_edge_list_text("1 1\n"), std::domain_error);
  CHECK_THROWS_AS(InteractionGraph::from_edge_list_text("0 2\n"), std::invalid_argument);
}

TEST_CASE("graph-axis moebius values match the explicit-poset recursion") {
  auto ring = std::make_shared<InteractionGraph>(benzene_ring());
  ShortestPathOracle oracle(*ring);
  for (bool use_convex : {true, false}) {
    PosetAxis axis =
        use_convex ? convex_subsets_axis(ring) : connected_subsets_axis(ring);
    auto family = use_convex ? enumerate_convex_subsets(*ring, oracle, 6)
                             : enumerate_connected_subsets(*ring, 6);
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t a = 0; a < family.size(); ++a) {
      auto ups = use_convex ? convex_covers_up(*ring, oracle, family[a])
                            : conn_covers_up(*ring, family[a]);
      for (std::size_t b = 0; b < family.size(); ++b) {
        if (std::find(ups.begin(), ups.end(), family[b]) != ups.end()) {
          covers.push_back({a, b});
        }
      }
    }
    PosetAxis reference = PosetAxis::explicit_poset(family.size(), covers);
    for (std::size_t a = 0; a < family.size(); ++a) {
      for (std::size_t b = 0; b < family.size(); ++b) {
        CHECK(reference.moebius(AxisElement::index(a), AxisElement::index(b)) ==
              axis.moebius(AxisElement::subset(family[a]), AxisElement::subset(family[b])));
      }
    }
  }
}

TEST_CASE("graph-backed axes plug into the poset machinery") {
  auto ring = std::make_shared<InteractionGraph>(benzene_ring());
  PosetAxis convex = convex_subsets_axis(ring);
  CHECK(convex.contains(sub({0, 1, 2})));
  CHECK_FALSE(convex.contains(sub({0, 3, 4, 5})));
  CHECK(convex.least() == sub({}));

  // Vector entries over any nontrivial lower set sum to zero.
  auto vec = convex.moebius_vector(sub({0, 1, 2, 3, 4, 5}));
  std::int64_t total = 0;
  for (auto& [el, value] : vec) total += value;
  CHECK(total == 0);

  PosetAxis conn = connected_subsets_axis(ring);
  CHECK(conn.contains(sub({0, 3, 4, 5})));
  CHECK_FALSE(conn.contains(sub({0, 2})));

  PosetAxis cliques = simplex_axis(ring, 1);
  CHECK(cliques.contains(sub({0, 1})));
  CHECK_FALSE(cliques.contains(sub({0, 1, 2})));
  CHECK(cliques.covers_up(sub({0, 1})).empty());
}
