#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supanova/poset.hpp"

namespace supanova {

struct Atom {
  int z = 0;                          // atomic number
  std::array<double, 3> xyz{};        // Angstrom
};

struct Bond {
  Vertex i = 0;
  Vertex j = 0;
  int order = 1;
};

struct Geometry {
  std::vector<Atom> atoms;
  std::optional<std::vector<Bond>> bonds;

  std::size_t size() const { return atoms.size(); }
  bool has_bonds() const { return bonds.has_value(); }
};

double atom_distance(const Atom& a, const Atom& b);

int element_z(const std::string& symbol);       // throws on unknown symbol
std::string element_symbol(int z);

// Extended-XYZ-like text: atom count, comment, then "symbol x y z" lines; an
// optional trailing section started by a line "BONDS" holds "i j order"
// triples with 1-based atom indices.
Geometry parse_geometry(const std::string& text);
Geometry load_geometry(const std::string& path);

// Covalent radii in Angstrom, keyed by atomic number.
using RadiiTable = std::map<int, double>;
RadiiTable default_radii();
RadiiTable parse_radii(const std::string& text);  // "symbol radius" lines
RadiiTable load_radii(const std::string& path);

// Hex SHA-256 over atomic numbers, exact coordinate bytes, and bonds; any
// coordinate perturbation produces a different digest.
std::string geometry_digest(const Geometry& g);

}  // namespace supanova
