#include "supanova/expansions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace supanova {

namespace {

void for_each_subset(const VertexSet& u, const std::function<void(const VertexSet&)>& fn) {
  if (u.size() > 30) throw std::invalid_argument("subset enumeration over 2^30 members");
  std::uint64_t total = std::uint64_t{1} << u.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    VertexSet v;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) v.push_back(u[i]);
    }
    fn(v);
  }
}

}  // namespace

double mbe_contribution(const SubsetPotential& potential, const VertexSet& u) {
  KahanAccumulator acc;
  for_each_subset(u, [&](const VertexSet& v) {
    double sign = ((u.size() - v.size()) % 2 == 0) ? 1.0 : -1.0;
    acc.add(sign * potential(v));
  });
  return acc.value();
}

double mbe_contribution_recursive(const SubsetPotential& potential, const VertexSet& u) {
  double below = 0.0;
  {
    KahanAccumulator acc;
    for_each_subset(u, [&](const VertexSet& v) {
      if (v.size() == u.size()) return;
      acc.add(mbe_contribution_recursive(potential, v));
    });
    below = acc.value();
  }
  return potential(u) - below;
}

double truncation_sum(const PosetGrid& grid, const OrderIdeal& ideal,
                      const GridPotential& potential) {
  SparseIntTensor d = combination_coefficients(grid, ideal);
  return reduce_product(d, potential);
}

namespace {

std::vector<VertexSet> n_mers(const std::vector<VertexSet>& fragments, int n) {
  if (n < 1 || static_cast<std::size_t>(n) > fragments.size()) {
    throw std::invalid_argument("n-mer order out of range");
  }
  std::vector<VertexSet> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == static_cast<std::size_t>(n)) {
      VertexSet u;
      for (std::size_t k : pick) u = set_union(u, fragments[k]);
      out.push_back(std::move(u));
      return;
    }
    for (std::size_t i = start; i < fragments.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

std::map<VertexSet, std::int64_t> gmbe_collected_weights(
    const std::vector<VertexSet>& fragments, int n) {
  std::vector<VertexSet> mers = n_mers(fragments, n);
  if (mers.size() > 30) {
    throw std::invalid_argument("too many n-mers for an inclusion/exclusion sweep");
  }
  std::map<VertexSet, std::int64_t> weight;
  std::uint64_t total = std::uint64_t{1} << mers.size();
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    VertexSet inter;
    bool first = true;
    int bits = 0;
    for (std::size_t i = 0; i < mers.size(); ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      ++bits;
      inter = first ? mers[i] : set_intersection(inter, mers[i]);
      first = false;
    }
    auto it = weight.emplace(std::move(inter), 0).first;
    it->second += (bits % 2 == 1) ? 1 : -1;
  }
  std::erase_if(weight, [](const auto& kv) { return kv.second == 0; });
  return weight;
}

double gmbe_energy(const std::vector<VertexSet>& fragments, int n,
                   const SubsetPotential& potential, bool collect_terms) {
  if (potential({}) != 0.0) {
    throw std::invalid_argument("this expansion assumes a vanishing empty-set potential");
  }
  if (collect_terms) {
    KahanAccumulator acc;
    for (const auto& [u, w] : gmbe_collected_weights(fragments, n)) {
      acc.add(static_cast<double>(w) * potential(u));
    }
    return acc.value();
  }
  std::vector<VertexSet> mers = n_mers(fragments, n);
  if (mers.size() > 30) {
    throw std::invalid_argument("too many n-mers for an inclusion/exclusion sweep");
  }
  KahanAccumulator acc;
  std::uint64_t total = std::uint64_t{1} << mers.size();
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    VertexSet inter;
    bool first = true;
    int bits = 0;
    for (std::size_t i = 0; i < mers.size(); ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      ++bits;
      inter = first ? mers[i] : set_intersection(inter, mers[i]);
      first = false;
    }
    acc.add(((bits % 2 == 1) ? 1.0 : -1.0) * potential(inter));
  }
  return acc.value();
}

OrderIdeal gmbe_equivalent_ideal(std::size_t universe, const std::vector<VertexSet>& fragments,
                                 int n) {
  PosetGrid grid({PosetAxis::boolean_algebra(static_cast<Vertex>(universe))});
  std::vector<GridElement> generators;
  for (auto& m : n_mers(fragments, n)) {
    generators.push_back({AxisElement::subset(std::move(m))});
  }
  return OrderIdeal::down_closure(grid, generators);
}

ConsistencyResult consistent_ideal(const PosetGrid& ambient, const PosetGrid& subposet,
                                   const OrderIdeal& subposet_ideal) {
  if (ambient.dimension() != subposet.dimension()) {
    throw std::invalid_argument("ambient and subposet grids must share dimensions");
  }
  ConsistencyResult result;
  std::vector<GridElement> antichain(subposet_ideal.antichain().begin(),
                                     subposet_ideal.antichain().end());
  for (const auto& a : antichain) {
    if (!ambient.contains(a)) {
      throw std::domain_error("subposet element " + to_string(a) +
                              " is not an ambient grid member");
    }
  }
  result.ambient_ideal = OrderIdeal::down_closure(ambient, antichain);
  SparseIntTensor ambient_coeffs = combination_coefficients(ambient, result.ambient_ideal);
  SparseIntTensor sub_coeffs = combination_coefficients(subposet, subposet_ideal);

  std::set<GridElement> support;
  for (const auto& [p, v] : ambient_coeffs) support.insert(p);
  for (const auto& [p, v] : sub_coeffs) support.insert(p);
  for (const auto& p : support) {
    std::int64_t ambient_value = ambient_coeffs.at(p);
    std::int64_t expected = subposet.contains(p) ? sub_coeffs.at(p) : 0;
    if (ambient_value != expected) {
      result.consistent = false;
      result.counterexample = p;
      return result;
    }
  }
  result.consistent = true;
  return result;
}

MeetClosureResult check_meet_subsemilattice(const std::vector<VertexSet>& family) {
  std::set<VertexSet> members(family.begin(), family.end());
  for (auto a = members.begin(); a != members.end(); ++a) {
    for (auto b = std::next(a); b != members.end(); ++b) {
      VertexSet meet = set_intersection(*a, *b);
      if (!members.count(meet)) {
        return {false, std::make_pair(*a, *b)};
      }
    }
  }
  return {true, std::nullopt};
}

LayeredCoefficients mlfcr_coefficients(Vertex universe,
                                       const std::vector<std::vector<VertexSet>>& layers) {
  if (layers.empty()) throw std::invalid_argument("need at least one layer");
  std::size_t n = layers.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::set<VertexSet> outer(layers[i].begin(), layers[i].end());
    for (const auto& u : layers[i + 1]) {
      if (!outer.count(u)) {
        throw std::invalid_argument("layer ideals must be nested outermost-first");
      }
    }
  }

  PosetGrid product({PosetAxis::boolean_algebra(universe),
                     PosetAxis::chain_bounded(static_cast<std::uint64_t>(n))});
  std::vector<GridElement> members;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& u : layers[i]) {
      members.push_back({AxisElement::subset(u),
                         AxisElement::index(static_cast<std::uint64_t>(i + 1))});
    }
  }
  OrderIdeal product_ideal = OrderIdeal::down_closure(product, members);
  if (product_ideal.size() != members.size()) {
    throw std::invalid_argument("layers are not downward-closed ideals");
  }
  SparseIntTensor direct = combination_coefficients(product, product_ideal);

  LayeredCoefficients out;
  out.direct.resize(n);
  out.closed_form.resize(n);
  for (const auto& [p, v] : direct) {
    std::size_t layer = p[1].index() - 1;
    out.direct[layer][p[0].subset()] = v;
  }

  // Single-layer coefficients of an ideal of the boolean algebra.
  auto single_layer = [&](const std::vector<VertexSet>& ideal) {
    std::map<VertexSet, std::int64_t> coeffs;
    for (const auto& u : ideal) {
      std::int64_t total = 0;
      for (const auto& t : ideal) {
        if (!is_subset(u, t)) continue;
        total += ((t.size() - u.size()) % 2 == 0) ? 1 : -1;
      }
      if (total != 0) coeffs[u] = total;
    }
    return coeffs;
  };

  std::vector<std::map<VertexSet, std::int64_t>> per_layer(n);
  for (std::size_t i = 0; i < n; ++i) per_layer[i] = single_layer(layers[i]);
  out.closed_form[n - 1] = per_layer[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::map<VertexSet, std::int64_t> diff = per_layer[i];
    for (const auto& [u, v] : per_layer[i + 1]) {
      auto it = diff.find(u);
      if (it == diff.end()) {
        if (v != 0) diff[u] = -v;
      } else {
        it->second -= v;
        if (it->second == 0) diff.erase(it);
      }
    }
    out.closed_form[i] = std::move(diff);
  }
  return out;
}

double simplex_energy(const InteractionGraph& g, int rank_limit,
                      const SubsetPotential& potential) {
  if (potential({}) != 0.0) {
    throw std::invalid_argument("this expansion assumes a vanishing empty-set potential");
  }
  std::vector<VertexSet> cliques = simplex_ideal(g, rank_limit);

  // p^m_u: how many rank-m simplices contain the clique u.
  std::map<VertexSet, std::map<int, std::int64_t>> containment;
  for (const auto& w : cliques) {
    if (w.empty()) continue;
    int m = static_cast<int>(w.size()) - 1;
    for_each_subset(w, [&](const VertexSet& u) {
      if (u.empty()) return;
      containment[u][m] += 1;
    });
  }

  KahanAccumulator acc;
  for (const auto& u : cliques) {
    if (u.empty()) continue;
    int r = static_cast<int>(u.size()) - 1;
    std::int64_t inner = 0;
    const auto& counts = containment.at(u);
    for (int m = r; m <= rank_limit; ++m) {
      auto it = counts.find(m);
      if (it == counts.end()) continue;
      inner += ((m % 2 == 0) ? 1 : -1) * it->second;
    }
    double sign = (r % 2 == 0) ? 1.0 : -1.0;
    acc.add(sign * static_cast<double>(inner) * potential(u));
  }
  return acc.value();
}

}  // namespace supanova
