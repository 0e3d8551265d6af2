#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "supanova/fragment.hpp"
#include "supanova/geometry.hpp"

namespace supanova {

struct CostParams {
  double n_hf_iter = 15;
  double n_cc_iter = 15;
  double f_eri = 50;
};

struct SystemSizes {
  std::int64_t n_ao = 0;
  std::int64_t n_occ = 0;
  std::int64_t n_corr = 0;
  std::int64_t n_virt = 0;
  std::int64_t n_eri = 0;
};

// Direct-SCF model: N_iter * (f_ERI * N_ERI + N_AO^3).
double cost_hf(const CostParams& params, const SystemSizes& sizes);

// HF start, amplitude evaluation, integral calculation, and the four
// transformation contractions.
double cost_mp2(const CostParams& params, const SystemSizes& sizes);

// nth-order coupled cluster; the perturbative variant adds the
// N_corr^(n+1) * N_virt^(n+2) correction term.
double cost_cc(const CostParams& params, const SystemSizes& sizes, int n);
double cost_cc_pert(const CostParams& params, const SystemSizes& sizes, int n);

struct MethodKind {
  enum Family { Hf, Mp2, Cc, CcPert } family;
  int excitation_order;  // n for Cc / CcPert, unused otherwise
  std::string label;
};

// 1 -> HF, 2 -> MP2, odd 2k+1 >= 3 -> CC(k+1), even 2k >= 4 -> CC(k)(k+1).
MethodKind method_for_index(int method_index);

double cost_of_spec(const CostParams& params, int method_index, const SystemSizes& sizes);

// Per-element, per-basis AO and shell-pair counts. Text rows are
// "Z p ao_count shellpairs".
class AoTable {
 public:
  void set(int z, int basis_index, std::int64_t ao_count, std::int64_t shellpairs);
  std::pair<std::int64_t, std::int64_t> lookup(int z, int basis_index) const;
  bool empty() const { return rows_.empty(); }

  static AoTable parse(const std::string& text);
  static AoTable load(const std::string& path);
  // cc-pVnZ-style counts for H, C, N, O, S at basis levels 1..4.
  static AoTable bundled_default();

 private:
  std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>> rows_;
};

// Size surrogate for a capped subsystem (link atoms included as Z=1 entries).
// AO counts come from the table; occupation from electron counts; the ERI
// count is the square of the screened shell-pair sum. Backend-reported exact
// sizes take precedence over this estimate when available.
SystemSizes surrogate_sizes(const std::vector<Atom>& atoms, int basis_index,
                            const AoTable& table, double screening_radius,
                            const std::map<int, int>& frozen_core_orbitals = {});

// Atoms of a subsystem plus its hydrogen caps, ready for the surrogate or an
// external backend request.
std::vector<Atom> subsystem_atoms(const Geometry& geometry, const Subsystem& subsystem);

}  // namespace supanova
