#include "supanova/fragment.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace supanova {

Fragmentation singleton_fragmentation(std::size_t atom_count) {
  Fragmentation f;
  f.reserve(atom_count);
  for (Vertex i = 0; i < atom_count; ++i) f.push_back({i});
  return f;
}

void validate_fragmentation(const Fragmentation& f, std::size_t atom_count) {
  std::vector<char> seen(atom_count, 0);
  std::size_t total = 0;
  for (const auto& frag : f) {
    if (frag.empty()) throw std::invalid_argument("empty fragment");
    if (!is_canonical_set(frag)) throw std::invalid_argument("fragment not canonical");
    for (Vertex v : frag) {
      if (v >= atom_count) throw std::invalid_argument("fragment index out of range");
      if (seen[v]) throw std::invalid_argument("fragments overlap at atom " +
                                               std::to_string(v + 1));
      seen[v] = 1;
    }
    total += frag.size();
  }
  if (total != atom_count) {
    throw std::invalid_argument("fragmentation does not cover all atoms");
  }
}

namespace {

void sort_by_min_atom(Fragmentation& f) {
  std::sort(f.begin(), f.end(),
            [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
}

struct MergeScan {
  const Geometry& geometry;
  std::vector<std::size_t> owner;  // atom -> fragment position

  explicit MergeScan(const Geometry& g, const Fragmentation& f)
      : geometry(g), owner(g.atoms.size()) {
    rebuild(f);
  }

  void rebuild(const Fragmentation& f) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      for (Vertex v : f[k]) owner[v] = k;
    }
  }

  bool adjacent(const Fragmentation& f, std::size_t a, std::size_t b) const {
    for (const auto& bond : *geometry.bonds) {
      std::size_t oi = owner[bond.i], oj = owner[bond.j];
      if ((oi == a && oj == b) || (oi == b && oj == a)) return true;
    }
    (void)f;
    return false;
  }

  // Phase one: (a) a non-single bond crosses the pair, or (b) a hydrogen in
  // one fragment is bonded into the other.
  bool phase1_pair(const Fragmentation& f, std::size_t a, std::size_t b) const {
    for (const auto& bond : *geometry.bonds) {
      std::size_t oi = owner[bond.i], oj = owner[bond.j];
      bool crosses = (oi == a && oj == b) || (oi == b && oj == a);
      if (!crosses) continue;
      if (bond.order > 1) return true;
      if (geometry.atoms[bond.i].z == 1 || geometry.atoms[bond.j].z == 1) return true;
    }
    (void)f;
    return false;
  }

  // Phase two, case one: a single atom of one fragment bonded to two atoms of
  // the other (the fragments are then adjacent by those very bonds).
  bool phase2_case1(const Fragmentation& f, std::size_t a, std::size_t b) const {
    for (std::size_t from : {a, b}) {
      std::size_t to = (from == a) ? b : a;
      for (Vertex atom : f[from]) {
        int count = 0;
        for (const auto& bond : *geometry.bonds) {
          Vertex other;
          if (bond.i == atom) {
            other = bond.j;
          } else if (bond.j == atom) {
            other = bond.i;
          } else {
            continue;
          }
          if (owner[other] == to) ++count;
        }
        if (count >= 2) return true;
      }
    }
    return false;
  }

  // Phase two, case two: a bond joins the pair, and either endpoint is also
  // bonded into a third fragment adjacent to both.
  bool phase2_case2(const Fragmentation& f, std::size_t a, std::size_t b) const {
    for (const auto& bond : *geometry.bonds) {
      std::size_t oi = owner[bond.i], oj = owner[bond.j];
      bool crosses = (oi == a && oj == b) || (oi == b && oj == a);
      if (!crosses) continue;
      for (Vertex endpoint : {bond.i, bond.j}) {
        for (const auto& other : *geometry.bonds) {
          Vertex third;
          if (other.i == endpoint) {
            third = other.j;
          } else if (other.j == endpoint) {
            third = other.i;
          } else {
            continue;
          }
          std::size_t k = owner[third];
          if (k == a || k == b) continue;
          if (adjacent(f, k, a) && adjacent(f, k, b)) return true;
        }
      }
    }
    return false;
  }
};

using PairPredicate = bool (MergeScan::*)(const Fragmentation&, std::size_t,
                                          std::size_t) const;

// Lexicographic pair scan with immediate first-hit merges, repeated until no
// merge fires.
void run_phase(const Geometry& geometry, Fragmentation& f,
               const std::vector<PairPredicate>& predicates) {
  bool merged = true;
  while (merged) {
    merged = false;
    sort_by_min_atom(f);
    MergeScan scan(geometry, f);
    for (std::size_t a = 0; a < f.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < f.size() && !merged; ++b) {
        for (PairPredicate pred : predicates) {
          if ((scan.*pred)(f, a, b)) {
            f[a] = set_union(f[a], f[b]);
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(b));
            merged = true;
            break;
          }
        }
      }
    }
  }
}

}  // namespace

Fragmentation heuristic_fragment(const Geometry& geometry, Fragmentation initial) {
  if (!geometry.has_bonds()) {
    throw std::invalid_argument(
        "fragmentation heuristic needs bonds; supply a BONDS section or run a "
        "bond-perception step first");
  }
  validate_fragmentation(initial, geometry.atoms.size());
  Fragmentation f = std::move(initial);
  run_phase(geometry, f, {&MergeScan::phase1_pair});
  run_phase(geometry, f, {&MergeScan::phase2_case1, &MergeScan::phase2_case2});
  sort_by_min_atom(f);
  return f;
}

Fragmentation heuristic_fragment(const Geometry& geometry) {
  return heuristic_fragment(geometry, singleton_fragmentation(geometry.atoms.size()));
}

InteractionGraph quotient_graph(const InteractionGraph& graph, const Fragmentation& f) {
  validate_fragmentation(f, graph.vertex_count());
  std::vector<std::size_t> owner(graph.vertex_count());
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (Vertex v : f[k]) owner[v] = k;
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [i, j] : graph.edges()) {
    if (owner[i] != owner[j]) {
      edges.emplace_back(static_cast<Vertex>(owner[i]), static_cast<Vertex>(owner[j]));
    }
  }
  return InteractionGraph(f.size(), edges);
}

Subsystem extract_subsystem(const Geometry& geometry, const Fragmentation& f,
                            const VertexSet& fragment_indices, const RadiiTable& radii) {
  validate_fragmentation(f, geometry.atoms.size());
  Subsystem out;
  for (Vertex k : fragment_indices) {
    if (k >= f.size()) throw std::domain_error("fragment index out of range");
    out.real_atoms = set_union(out.real_atoms, f[k]);
  }
  if (out.real_atoms.empty()) return out;
  if (!geometry.has_bonds()) return out;

  auto radius = [&](int z) {
    auto it = radii.find(z);
    if (it == radii.end()) {
      throw std::invalid_argument("no covalent radius for element " + element_symbol(z));
    }
    return it->second;
  };
  double r_h = radius(1);

  for (const auto& bond : *geometry.bonds) {
    bool i_in = set_contains(out.real_atoms, bond.i);
    bool j_in = set_contains(out.real_atoms, bond.j);
    if (i_in == j_in) continue;
    if (bond.order != 1) {
      throw std::invalid_argument("severed bond has order " + std::to_string(bond.order) +
                                  "; refusing to cap a non-single bond");
    }
    Vertex inside = i_in ? bond.i : bond.j;
    Vertex outside = i_in ? bond.j : bond.i;
    const Atom& a = geometry.atoms[inside];
    const Atom& b = geometry.atoms[outside];
    double r_a = radius(a.z);
    double r_b = radius(b.z);
    double scale = (r_a + r_h) / (r_a + r_b);
    LinkAtom link;
    link.bonded_inside = inside;
    link.replaced_outside = outside;
    for (int c = 0; c < 3; ++c) {
      link.xyz[c] = a.xyz[c] + scale * (b.xyz[c] - a.xyz[c]);
    }
    out.link_atoms.push_back(link);
  }
  return out;
}

std::string fragmentation_to_text(const Fragmentation& f) {
  std::ostringstream os;
  for (const auto& frag : f) {
    for (std::size_t i = 0; i < frag.size(); ++i) {
      if (i) os << ' ';
      os << frag[i] + 1;
    }
    os << '\n';
  }
  return os.str();
}

Fragmentation parse_fragmentation(const std::string& text, std::size_t atom_count) {
  Fragmentation f;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    VertexSet frag;
    long long v = 0;
    while (ls >> v) {
      if (v < 1) throw std::invalid_argument("fragment indices are 1-based: " + line);
      frag.push_back(static_cast<Vertex>(v - 1));
    }
    if (!frag.empty()) f.push_back(canonical_set(std::move(frag)));
  }
  validate_fragmentation(f, atom_count);
  sort_by_min_atom(f);
  return f;
}

Fragmentation load_fragmentation(const std::string& path, std::size_t atom_count) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open fragmentation file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fragmentation(buffer.str(), atom_count);
}

}  // namespace supanova
