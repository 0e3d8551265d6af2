#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "supanova/graph.hpp"
#include "supanova/ideal.hpp"
#include "supanova/poset.hpp"
#include "supanova/tensor.hpp"

namespace supanova {

using SubsetPotential = std::function<double(const VertexSet&)>;
using GridPotential = std::function<double(const GridElement&)>;

// Contribution of a subset, in the non-recursive alternating-sign form
// sum_{v <= u} (-1)^{|u - v|} V_v.
double mbe_contribution(const SubsetPotential& potential, const VertexSet& u);

// Same quantity by the defining recursion, kept as an independent oracle.
double mbe_contribution_recursive(const SubsetPotential& potential, const VertexSet& u);

// S_I = sum over nonzero combination coefficients of D_s * V_s; equals the
// sum of contributions over the ideal.
double truncation_sum(const PosetGrid& grid, const OrderIdeal& ideal,
                      const GridPotential& potential);

// n-body energy over possibly overlapping fragments: the alternating
// inclusion/exclusion sum over intersections of the C(K, n) n-fold unions.
// Duplicate intersections are collected into weighted terms by default; the
// literal expansion is retained for cross-checking. Requires V of the empty
// set to vanish.
double gmbe_energy(const std::vector<VertexSet>& fragments, int n,
                   const SubsetPotential& potential, bool collect_terms = true);

// The collected weight of each distinct intersection in that sum (zero
// weights dropped). Upward sums of these weights over supersets within the
// intersection family equal one.
std::map<VertexSet, std::int64_t> gmbe_collected_weights(
    const std::vector<VertexSet>& fragments, int n);

// The order ideal a combination-consistent rewrite must use: the downward
// closure (in the ambient boolean algebra) of the n-mers.
OrderIdeal gmbe_equivalent_ideal(std::size_t universe, const std::vector<VertexSet>& fragments,
                                 int n);

struct ConsistencyResult {
  bool consistent = false;
  OrderIdeal ambient_ideal;  // generated by the subposet ideal's antichain
  std::optional<GridElement> counterexample;
};

// Lifts an ideal of a subposet grid into the ambient grid by closing its
// generating antichain downward, then compares coefficients entry by entry:
// they must agree on subposet members and vanish elsewhere.
ConsistencyResult consistent_ideal(const PosetGrid& ambient, const PosetGrid& subposet,
                                   const OrderIdeal& subposet_ideal);

struct MeetClosureResult {
  bool meet_closed = false;
  std::optional<std::pair<VertexSet, VertexSet>> witness;
};

// Is the family closed under pairwise intersection?
MeetClosureResult check_meet_subsemilattice(const std::vector<VertexSet>& family);

// Nested layering I_1 superset-of ... superset-of I_n of ideals of B_M,
// viewed as one ideal of B_M x [n]. Coefficients per layer are computed two
// ways: directly on the product grid, and through the single-layer closed
// forms (layer n keeps its own coefficients; layer i (< n) takes the
// difference against layer i+1). Both are returned and must agree.
struct LayeredCoefficients {
  std::vector<std::map<VertexSet, std::int64_t>> direct;
  std::vector<std::map<VertexSet, std::int64_t>> closed_form;
  bool agree() const { return direct == closed_form; }
};

LayeredCoefficients mlfcr_coefficients(Vertex universe,
                                       const std::vector<std::vector<VertexSet>>& layers);

// Clique-expansion energy: alternating rank sums weighted by the counts of
// higher-rank simplices containing each clique. Equals the truncation over
// the simplex ideal of the boolean algebra. Requires V of the empty set to
// vanish.
double simplex_energy(const InteractionGraph& g, int rank_limit,
                      const SubsetPotential& potential);

}  // namespace supanova
