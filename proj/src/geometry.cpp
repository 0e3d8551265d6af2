#include "supanova/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "digest.hpp"

namespace supanova {

namespace {

const char* const kSymbols[] = {
    "X",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
    "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn",
    "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr",
    "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb",
    "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd",
    "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re", "Os", "Ir",
    "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn"};

constexpr int kMaxZ = static_cast<int>(sizeof(kSymbols) / sizeof(kSymbols[0])) - 1;

std::string normalize_symbol(const std::string& symbol) {
  std::string s;
  for (char c : symbol) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return s;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  for (std::size_t i = 1; i < s.size(); ++i) {
    s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  }
  return s;
}

}  // namespace

double atom_distance(const Atom& a, const Atom& b) {
  double dx = a.xyz[0] - b.xyz[0];
  double dy = a.xyz[1] - b.xyz[1];
  double dz = a.xyz[2] - b.xyz[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

int element_z(const std::string& symbol) {
  std::string s = normalize_symbol(symbol);
  for (int z = 1; z <= kMaxZ; ++z) {
    if (s == kSymbols[z]) return z;
  }
  throw std::invalid_argument("unknown element symbol: " + symbol);
}

std::string element_symbol(int z) {
  if (z < 1 || z > kMaxZ) {
    throw std::invalid_argument("atomic number out of range: " + std::to_string(z));
  }
  return kSymbols[z];
}

Geometry parse_geometry(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty geometry file");
  std::size_t count = 0;
  {
    std::istringstream ls(line);
    long long n = 0;
    if (!(ls >> n) || n < 1) {
      throw std::invalid_argument("first line must be the atom count");
    }
    count = static_cast<std::size_t>(n);
  }
  if (!std::getline(in, line)) throw std::invalid_argument("missing comment line");

  Geometry g;
  g.atoms.reserve(count);
  while (g.atoms.size() < count) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("geometry ends before all atoms were read");
    }
    std::istringstream ls(line);
    std::string symbol;
    double x = 0, y = 0, z = 0;
    if (!(ls >> symbol)) continue;
    if (!(ls >> x >> y >> z)) throw std::invalid_argument("malformed atom line: " + line);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw std::invalid_argument("non-finite coordinate: " + line);
    }
    g.atoms.push_back(Atom{element_z(symbol), {x, y, z}});
  }

  // Optional BONDS section.
  while (std::getline(in, line)) {
    std::string trimmed;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
    }
    if (trimmed.empty()) continue;
    if (trimmed == "BONDS") {
      std::vector<Bond> bonds;
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        long long i = 0, j = 0, order = 0;
        if (!(ls >> i)) continue;
        if (!(ls >> j >> order)) throw std::invalid_argument("malformed bond line: " + line);
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > count ||
            static_cast<std::size_t>(j) > count) {
          throw std::invalid_argument("bond index out of range: " + line);
        }
        if (i == j) throw std::invalid_argument("bond endpoints must differ: " + line);
        if (order < 1) throw std::invalid_argument("bond order must be >= 1: " + line);
        bonds.push_back(Bond{static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1),
                             static_cast<int>(order)});
      }
      g.bonds = std::move(bonds);
      break;
    }
    throw std::invalid_argument("unexpected trailing content: " + line);
  }
  return g;
}

Geometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open geometry file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_geometry(buffer.str());
}

RadiiTable default_radii() {
  // Single-bond covalent radii (Angstrom) for the bundled elements.
  return RadiiTable{{1, 0.31}, {6, 0.76}, {7, 0.71}, {8, 0.66}, {16, 1.05}};
}

RadiiTable parse_radii(const std::string& text) {
  RadiiTable table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string symbol;
    double r = 0;
    if (!(ls >> symbol)) continue;
    if (symbol[0] == '#') continue;
    if (!(ls >> r) || r <= 0) throw std::invalid_argument("malformed radius line: " + line);
    table[element_z(symbol)] = r;
  }
  return table;
}

RadiiTable load_radii(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open radii file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_radii(buffer.str());
}

std::string geometry_digest(const Geometry& g) {
  std::string bytes;
  detail::append_u64(bytes, g.atoms.size());
  for (const auto& atom : g.atoms) {
    detail::append_u64(bytes, static_cast<std::uint64_t>(atom.z));
    for (double c : atom.xyz) detail::append_double_bits(bytes, c);
  }
  if (g.bonds) {
    detail::append_u64(bytes, g.bonds->size() + 1);
    for (const auto& b : *g.bonds) {
      detail::append_u64(bytes, b.i);
      detail::append_u64(bytes, b.j);
      detail::append_u64(bytes, static_cast<std::uint64_t>(b.order));
    }
  } else {
    detail::append_u64(bytes, 0);
  }
  return detail::sha256_hex(bytes);
}

}  // namespace supanova
