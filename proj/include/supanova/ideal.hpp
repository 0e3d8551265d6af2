#pragma once

#include <map>
#include <set>
#include <vector>

#include "supanova/poset.hpp"
#include "supanova/tensor.hpp"

namespace supanova {

// Finite downward-closed subset of a grid with its generating antichain
// maintained on every insertion.
class OrderIdeal {
 public:
  OrderIdeal() = default;

  bool contains(const GridElement& p) const { return elements_.count(p) != 0; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::set<GridElement>& elements() const { return elements_; }
  const std::set<GridElement>& antichain() const { return antichain_; }

  // Inserts p, which must be admissible: every element covered by p is
  // already present (the empty ideal accepts only the grid least element).
  // Returns the antichain members displaced by p.
  std::vector<GridElement> insert(const PosetGrid& grid, const GridElement& p);

  // Downward closure of a set of generators.
  static OrderIdeal down_closure(const PosetGrid& grid,
                                 const std::vector<GridElement>& generators);

  // Downward-closure audit, for tests and diagnostics.
  bool is_valid(const PosetGrid& grid) const;

 private:
  std::set<GridElement> elements_;
  std::set<GridElement> antichain_;
};

// D^(I): the combination coefficient of s is sum_{t in I, t >= s} mu(s, t),
// assembled as the sum of the Moebius tensors of all ideal members. Entries
// outside the ideal vanish identically.
SparseIntTensor combination_coefficients(const PosetGrid& grid, const OrderIdeal& ideal);

// Cross-check oracle: D_s == 1 - sum_{s < t in I} D_t for every s in I.
bool top_down_coefficient_check(const PosetGrid& grid, const OrderIdeal& ideal);

// Covers r of p whose own lower covers all lie inside the ideal.
std::vector<GridElement> admissible_covers(const PosetGrid& grid, const OrderIdeal& ideal,
                                           const GridElement& p);

// dS = sqrt(sum_p D_p^2 eps_p^2) over the nonzero entries of D. Every entry
// of D must carry an uncertainty.
double propagated_uncertainty(const SparseIntTensor& combination,
                              const std::map<GridElement, double>& uncertainty);

}  // namespace supanova
