#include "supanova/cost.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace supanova {

namespace {

double ipow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void require_sizes(const SystemSizes& s) {
  if (s.n_ao < 0 || s.n_occ < 0 || s.n_corr < 0 || s.n_virt < 0 || s.n_eri < 0) {
    throw std::invalid_argument("system sizes must be nonnegative");
  }
  if (s.n_corr > s.n_occ) {
    throw std::invalid_argument("correlated orbitals cannot exceed occupied orbitals");
  }
}

}  // namespace

double cost_hf(const CostParams& params, const SystemSizes& sizes) {
  require_sizes(sizes);
  double n_ao = static_cast<double>(sizes.n_ao);
  double n_eri = static_cast<double>(sizes.n_eri);
  return params.n_hf_iter * (params.f_eri * n_eri + ipow(n_ao, 3));
}

double cost_mp2(const CostParams& params, const SystemSizes& sizes) {
  require_sizes(sizes);
  double n_ao = static_cast<double>(sizes.n_ao);
  double n_eri = static_cast<double>(sizes.n_eri);
  double n_corr = static_cast<double>(sizes.n_corr);
  double n_virt = static_cast<double>(sizes.n_virt);
  return cost_hf(params, sizes) + ipow(n_corr, 2) * ipow(n_virt, 2) +
         params.f_eri * n_eri + n_corr * n_eri + ipow(n_corr, 2) * ipow(n_ao, 3) +
         ipow(n_corr, 2) * n_virt * n_ao + ipow(n_corr, 2) * ipow(n_virt, 2) * n_ao;
}

double cost_cc(const CostParams& params, const SystemSizes& sizes, int n) {
  require_sizes(sizes);
  if (n < 2) throw std::invalid_argument("coupled-cluster order must be >= 2");
  double n_ao = static_cast<double>(sizes.n_ao);
  double n_eri = static_cast<double>(sizes.n_eri);
  double n_corr = static_cast<double>(sizes.n_corr);
  double n_virt = static_cast<double>(sizes.n_virt);
  return params.f_eri * n_eri + n_ao * ipow(n_corr + n_virt, 4) +
         params.n_cc_iter * ipow(n_corr, n) * ipow(n_virt, n + 2);
}

double cost_cc_pert(const CostParams& params, const SystemSizes& sizes, int n) {
  double n_corr = static_cast<double>(sizes.n_corr);
  double n_virt = static_cast<double>(sizes.n_virt);
  return cost_cc(params, sizes, n) + ipow(n_corr, n + 1) * ipow(n_virt, n + 2);
}

MethodKind method_for_index(int method_index) {
  if (method_index < 1) throw std::invalid_argument("method index must be >= 1");
  if (method_index == 1) return {MethodKind::Hf, 0, "HF"};
  if (method_index == 2) return {MethodKind::Mp2, 0, "MP2"};
  if (method_index % 2 == 1) {
    int n = (method_index - 1) / 2 + 1;  // 3 -> CC(2), 5 -> CC(3), ...
    return {MethodKind::Cc, n, "CC(" + std::to_string(n) + ")"};
  }
  int n = method_index / 2;  // 4 -> CC(2)(3), 6 -> CC(3)(4), ...
  return {MethodKind::CcPert, n,
          "CC(" + std::to_string(n) + ")(" + std::to_string(n + 1) + ")"};
}

double cost_of_spec(const CostParams& params, int method_index, const SystemSizes& sizes) {
  MethodKind kind = method_for_index(method_index);
  switch (kind.family) {
    case MethodKind::Hf:
      return cost_hf(params, sizes);
    case MethodKind::Mp2:
      return cost_mp2(params, sizes);
    case MethodKind::Cc:
      return cost_cc(params, sizes, kind.excitation_order);
    case MethodKind::CcPert:
      return cost_cc_pert(params, sizes, kind.excitation_order);
  }
  throw std::logic_error("unreachable method family");
}

void AoTable::set(int z, int basis_index, std::int64_t ao_count, std::int64_t shellpairs) {
  if (ao_count < 0 || shellpairs < 0) {
    throw std::invalid_argument("AO table entries must be nonnegative");
  }
  rows_[{z, basis_index}] = {ao_count, shellpairs};
}

std::pair<std::int64_t, std::int64_t> AoTable::lookup(int z, int basis_index) const {
  auto it = rows_.find({z, basis_index});
  if (it == rows_.end()) {
    throw std::invalid_argument("no AO table entry for Z=" + std::to_string(z) +
                                " basis=" + std::to_string(basis_index));
  }
  return it->second;
}

AoTable AoTable::parse(const std::string& text) {
  AoTable table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    long long z = 0, p = 0, ao = 0, sp = 0;
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#') continue;
    z = std::stoll(first);
    if (!(ls >> p >> ao >> sp)) throw std::invalid_argument("malformed AO row: " + line);
    table.set(static_cast<int>(z), static_cast<int>(p), ao, sp);
  }
  return table;
}

AoTable AoTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open AO table: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

AoTable AoTable::bundled_default() {
  AoTable t;
  // Correlation-consistent style per-atom counts for basis levels 1..4.
  struct Row {
    int z;
    std::int64_t ao[4];
    std::int64_t sp[4];
  };
  const Row rows[] = {
      {1, {5, 14, 30, 55}, {3, 6, 10, 15}},
      {6, {14, 30, 55, 91}, {6, 10, 15, 21}},
      {7, {14, 30, 55, 91}, {6, 10, 15, 21}},
      {8, {14, 30, 55, 91}, {6, 10, 15, 21}},
      {16, {18, 34, 59, 95}, {7, 11, 16, 22}},
  };
  for (const auto& row : rows) {
    for (int p = 1; p <= 4; ++p) {
      t.set(row.z, p, row.ao[p - 1], row.sp[p - 1]);
    }
  }
  return t;
}

SystemSizes surrogate_sizes(const std::vector<Atom>& atoms, int basis_index,
                            const AoTable& table, double screening_radius,
                            const std::map<int, int>& frozen_core_orbitals) {
  SystemSizes s;
  std::int64_t electrons = 0;
  std::int64_t core = 0;
  std::vector<std::int64_t> shellpairs(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto [ao, sp] = table.lookup(atoms[i].z, basis_index);
    s.n_ao += ao;
    shellpairs[i] = sp;
    electrons += atoms[i].z;
    auto it = frozen_core_orbitals.find(atoms[i].z);
    if (it != frozen_core_orbitals.end()) core += it->second;
  }
  s.n_occ = (electrons + 1) / 2;
  s.n_corr = std::max<std::int64_t>(0, s.n_occ - core);
  s.n_virt = std::max<std::int64_t>(0, s.n_ao - s.n_occ);
  std::int64_t screened = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i; j < atoms.size(); ++j) {
      if (atom_distance(atoms[i], atoms[j]) <= screening_radius) {
        screened += shellpairs[i] * shellpairs[j];
      }
    }
  }
  s.n_eri = screened * screened;
  return s;
}

std::vector<Atom> subsystem_atoms(const Geometry& geometry, const Subsystem& subsystem) {
  std::vector<Atom> atoms;
  atoms.reserve(subsystem.real_atoms.size() + subsystem.link_atoms.size());
  for (Vertex v : subsystem.real_atoms) atoms.push_back(geometry.atoms[v]);
  for (const auto& link : subsystem.link_atoms) atoms.push_back(Atom{1, link.xyz});
  return atoms;
}

}  // namespace supanova
