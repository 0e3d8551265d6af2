#include <doctest.h>

#include <cmath>
#include <set>

#include "supanova/fragment.hpp"
#include "supanova/geometry.hpp"
#include "supanova/graph.hpp"

using namespace supanova;

namespace {

Geometry load_fixture(const char* name) {
  return load_geometry(std::string(SUPANOVA_TEST_DATA_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("geometry parsing") {
  Geometry heptane = load_fixture("heptane.xyz");
  CHECK(heptane.atoms.size() == 23);
  CHECK(heptane.atoms[0].z == 6);
  CHECK(heptane.atoms[7].z == 1);
  REQUIRE(heptane.has_bonds());
  CHECK(heptane.bonds->size() == 22);

  CHECK_THROWS_AS(parse_geometry(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("1\nc\nQq 0 0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("2\nc\nH 0 0 0\n"), std::invalid_argument);

  // Digest is sensitive to tiny coordinate changes.
  Geometry a = parse_geometry("1\nc\nH 0 0 0\n");
  Geometry b = parse_geometry("1\nc\nH 0 0 0.000000001\n");
  CHECK(geometry_digest(a) != geometry_digest(b));
  CHECK(geometry_digest(a) == geometry_digest(parse_geometry("1\nx\nH 0 0 0\n")));
}

TEST_CASE("heptane fragments into one backbone carbon plus its hydrogens") {
  Geometry heptane = load_fixture("heptane.xyz");
  Fragmentation f = heuristic_fragment(heptane);
  REQUIRE(f.size() == 7);
  for (const auto& frag : f) {
    int heavy = 0;
    for (Vertex v : frag) {
      if (heptane.atoms[v].z == 6) ++heavy;
    }
    CHECK(heavy == 1);
  }
  // Terminal methyls carry three hydrogens, inner carbons two.
  CHECK(f.front().size() == 4);
  CHECK(f.back().size() == 4);
  CHECK(f[1].size() == 3);

  // Idempotence: rerunning from the output is a fixpoint.
  CHECK(heuristic_fragment(heptane, f) == f);
}

TEST_CASE("phase one merges double bonds and hydrogens") {
  Geometry ethene = load_fixture("ethene.xyz");
  Fragmentation f = heuristic_fragment(ethene);
  REQUIRE(f.size() == 1);
  CHECK(f[0].size() == 6);

  Geometry water = load_fixture("water.xyz");
  CHECK(heuristic_fragment(water).size() == 1);
}

TEST_CASE("no inter-fragment multiple bonds or stranded hydrogens remain") {
  for (const char* name : {"heptane.xyz", "ethene.xyz", "ethane.xyz"}) {
    Geometry g = load_fixture(name);
    Fragmentation f = heuristic_fragment(g);
    std::vector<std::size_t> owner(g.atoms.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      for (Vertex v : f[k]) owner[v] = k;
    }
    for (const auto& bond : *g.bonds) {
      if (owner[bond.i] != owner[bond.j]) {
        CHECK(bond.order == 1);
        CHECK(g.atoms[bond.i].z != 1);
        CHECK(g.atoms[bond.j].z != 1);
      }
    }
  }
}

TEST_CASE("fragmentation heuristic requires bonds") {
  Geometry bare;
  bare.atoms = {{6, {0, 0, 0}}};
  CHECK_THROWS_WITH_AS(heuristic_fragment(bare),
                       doctest::Contains("needs bonds"), std::invalid_argument);
}

TEST_CASE("phase two collapses shared-atom and triangle configurations") {
  // Atom 0 bonded to atoms 1 and 2, which are bonded to each other: starting
  // from {0} | {1, 2}, atom 0 is bonded twice into the other fragment.
  Geometry g;
  g.atoms = {{6, {0, 0, 0}}, {6, {1.5, 0.8, 0}}, {6, {1.5, -0.8, 0}}};
  g.bonds = std::vector<Bond>{{0, 1, 1}, {0, 2, 1}, {1, 2, 1}};
  Fragmentation start = {{0}, {1, 2}};
  Fragmentation merged = heuristic_fragment(g, start);
  CHECK(merged.size() == 1);

  // Triangle of three singleton fragments: case two merges them pairwise.
  Fragmentation singles = singleton_fragmentation(3);
  Fragmentation out = heuristic_fragment(g, singles);
  CHECK(out.size() == 1);
}

TEST_CASE("quotient graphs") {
  Geometry heptane = load_fixture("heptane.xyz");
  Fragmentation f = heuristic_fragment(heptane);
  InteractionGraph bonds = bond_graph(heptane);
  InteractionGraph quotient = quotient_graph(bonds, f);
  CHECK(quotient.vertex_count() == 7);
  CHECK(quotient.edge_count() == 6);
  // A path: every vertex has degree at most two and the graph is connected.
  for (Vertex v = 0; v < 7; ++v) CHECK(quotient.neighbors(v).size() <= 2);
  CHECK(is_connected_subset(quotient, {0, 1, 2, 3, 4, 5, 6}));

  InteractionGraph single = quotient_graph(bonds, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                                    11, 12, 13, 14, 15, 16, 17, 18, 19,
                                                    20, 21, 22}});
  CHECK(single.vertex_count() == 1);
  CHECK(single.edge_count() == 0);

  InteractionGraph edgeless(4, {});
  CHECK(quotient_graph(edgeless, {{0, 1}, {2, 3}}).edge_count() == 0);
}

TEST_CASE("subsystem extraction places hydrogen caps on severed bonds") {
  Geometry ethane = load_fixture("ethane.xyz");
  Fragmentation f = {{0, 2, 3, 4}, {1, 5, 6, 7}};  // two methyl-like halves
  RadiiTable radii = default_radii();

  Subsystem methyl = extract_subsystem(ethane, f, {0}, radii);
  CHECK(methyl.real_atoms == VertexSet{0, 2, 3, 4});
  REQUIRE(methyl.link_atoms.size() == 1);
  const auto& link = methyl.link_atoms[0];
  CHECK(link.bonded_inside == 0);
  CHECK(link.replaced_outside == 1);
  // The fixture bond length equals r_C + r_C, so the cap sits at r_C + r_H.
  CHECK(link.xyz[0] == doctest::Approx(1.07).epsilon(1e-9));
  CHECK(link.xyz[1] == doctest::Approx(0.0));
  // Strictly between the endpoints.
  CHECK(link.xyz[0] > 0.0);
  CHECK(link.xyz[0] < 1.52);

  Subsystem whole = extract_subsystem(ethane, f, {0, 1}, radii);
  CHECK(whole.link_atoms.empty());
  CHECK(whole.real_atoms.size() == 8);

  Subsystem none = extract_subsystem(ethane, f, {}, radii);
  CHECK(none.real_atoms.empty());
  CHECK(none.link_atoms.empty());
}

TEST_CASE("subsystem extraction refuses bad cuts") {
  Geometry ethene = load_fixture("ethene.xyz");
  Fragmentation split = {{0, 2, 3}, {1, 4, 5}};  // severs the double bond
  CHECK_THROWS_WITH_AS(extract_subsystem(ethene, split, {0}, default_radii()),
                       doctest::Contains("non-single"), std::invalid_argument);

  Geometry ethane = load_fixture("ethane.xyz");
  RadiiTable missing;  // no entries at all
  Fragmentation f = {{0, 2, 3, 4}, {1, 5, 6, 7}};
  CHECK_THROWS_AS(extract_subsystem(ethane, f, {0}, missing), std::invalid_argument);
}

TEST_CASE("radii tables parse") {
  RadiiTable t = parse_radii("# comment\nH 0.31\nC 0.76\n");
  CHECK(t.at(1) == doctest::Approx(0.31));
  CHECK(t.at(6) == doctest::Approx(0.76));
  CHECK_THROWS_AS(parse_radii("H -1\n"), std::invalid_argument);
}

TEST_CASE("fragmentation files round-trip") {
  Fragmentation f = {{0, 2}, {1}, {3, 4, 5}};
  std::string text = fragmentation_to_text(f);
  Fragmentation parsed = parse_fragmentation(text, 6);
  CHECK(parsed == f);
  CHECK_THROWS_AS(parse_fragmentation("1 2\n2 3\n", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_fragmentation("1\n", 2), std::invalid_argument);
}
