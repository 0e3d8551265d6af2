#pragma once

#include <string>
#include <vector>

#include "supanova/geometry.hpp"
#include "supanova/graph.hpp"
#include "supanova/poset.hpp"

namespace supanova {

// Disjoint nonempty vertex sets covering all atom indices, kept sorted by
// minimum atom index.
using Fragmentation = std::vector<VertexSet>;

Fragmentation singleton_fragmentation(std::size_t atom_count);
void validate_fragmentation(const Fragmentation& f, std::size_t atom_count);

// Two-phase coalescing heuristic over a bonded geometry. Phase one merges
// across non-single bonds and pulls hydrogens onto their bonded partners;
// phase two removes the configurations that would place two link atoms in
// close proximity. Pair enumeration is canonical (fragments ordered by
// minimum atom index, pairs lexicographic, first hit merges immediately), so
// the result is deterministic.
Fragmentation heuristic_fragment(const Geometry& geometry);

// Same, but starting from a given fragmentation; running it on its own
// output is a fixpoint.
Fragmentation heuristic_fragment(const Geometry& geometry, Fragmentation initial);

// One vertex per fragment; an edge wherever any cross-fragment edge exists.
InteractionGraph quotient_graph(const InteractionGraph& graph, const Fragmentation& f);

struct LinkAtom {
  std::array<double, 3> xyz{};
  Vertex bonded_inside = 0;   // severed bond endpoint kept in the subsystem
  Vertex replaced_outside = 0;  // endpoint the hydrogen stands in for
};

struct Subsystem {
  VertexSet real_atoms;
  std::vector<LinkAtom> link_atoms;
};

// Atoms of the selected fragments plus hydrogen caps on severed single bonds,
// placed along the bond vector at the covalent-radius ratio
// (r_inside + r_H) / (r_inside + r_outside).
Subsystem extract_subsystem(const Geometry& geometry, const Fragmentation& f,
                            const VertexSet& fragment_indices, const RadiiTable& radii);

// Fragmentation file: one fragment per line, 1-based atom indices.
std::string fragmentation_to_text(const Fragmentation& f);
Fragmentation parse_fragmentation(const std::string& text, std::size_t atom_count);
Fragmentation load_fragmentation(const std::string& path, std::size_t atom_count);

}  // namespace supanova
