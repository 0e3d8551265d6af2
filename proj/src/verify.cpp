#include "supanova/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "supanova/adaptive.hpp"
#include "supanova/cost.hpp"
#include "supanova/expansions.hpp"
#include "supanova/fragment.hpp"
#include "supanova/graph.hpp"
#include "supanova/ideal.hpp"
#include "supanova/potentials.hpp"

namespace supanova::verify {

namespace {

struct Failure {
  std::string message;
};

class Checker {
 public:
  void require(bool condition, const std::string& message) {
    ++checks_;
    if (!condition && first_failure_.empty()) first_failure_ = message;
  }
  bool ok() const { return first_failure_.empty(); }
  std::string detail() const {
    if (!first_failure_.empty()) return first_failure_;
    return std::to_string(checks_) + " checks";
  }

 private:
  std::size_t checks_ = 0;
  std::string first_failure_;
};

AxisElement sub(VertexSet s) { return AxisElement::subset(std::move(s)); }
AxisElement idx(std::uint64_t i) { return AxisElement::index(i); }

std::vector<VertexSet> all_subsets(Vertex n) {
  std::vector<VertexSet> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    VertexSet u;
    for (Vertex i = 0; i < n; ++i) {
      if (mask & (1u << i)) u.push_back(i);
    }
    out.push_back(u);
  }
  return out;
}

// Explicit copy of B_n, sharing element indexing with all_subsets(n).
PosetAxis explicit_boolean(Vertex n) {
  auto subsets = all_subsets(n);
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = 0; b < subsets.size(); ++b) {
      if (subsets[a].size() + 1 == subsets[b].size() && is_subset(subsets[a], subsets[b])) {
        covers.push_back({a, b});
      }
    }
  }
  return PosetAxis::explicit_poset(subsets.size(), covers);
}

std::int64_t brute_coefficient(const PosetGrid& grid, const OrderIdeal& ideal,
                               const GridElement& s) {
  std::int64_t total = 0;
  for (const auto& t : ideal.elements()) {
    if (grid.less_equal(s, t)) total += grid.moebius(s, t);
  }
  return total;
}

OrderIdeal random_ideal(const PosetGrid& grid, std::mt19937_64& rng,
                        std::size_t max_inserts) {
  OrderIdeal ideal;
  ideal.insert(grid, grid.least());
  for (std::size_t step = 0; step + 1 < max_inserts; ++step) {
    std::vector<GridElement> frontier;
    for (const auto& p : ideal.elements()) {
      for (auto& r : admissible_covers(grid, ideal, p)) {
        if (!ideal.contains(r)) frontier.push_back(std::move(r));
      }
    }
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    if (frontier.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    ideal.insert(grid, frontier[pick(rng)]);
  }
  return ideal;
}

InteractionGraph six_cycle() {
  return InteractionGraph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
}

InteractionGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices,
                              double edge_probability) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_vertices);
  std::size_t n = size_dist(rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (coin(rng) < edge_probability) edges.emplace_back(i, j);
    }
  }
  return InteractionGraph(n, edges);
}

// Deterministic random potential over subsets, optionally zero on the empty
// set.
std::function<double(const VertexSet&)> random_potential(std::uint64_t seed,
                                                         bool zero_empty) {
  return [seed, zero_empty](const VertexSet& u) {
    if (zero_empty && u.empty()) return 0.0;
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
    for (Vertex v : u) {
      h += 0x9e3779b97f4a7c15ULL;
      h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
      h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
      h ^= (h >> 31) ^ v;
    }
    h = (h ^ (h >> 33)) * 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return 4.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 2.0;
  };
}

// --------------------------------------------------------------------------
// Embedded fixtures
// --------------------------------------------------------------------------

constexpr const char* kHeptaneXyz = R"(23
heptane, idealized
C 0.000000 0.440000 0.000000
C 1.260000 -0.440000 0.000000
C 2.520000 0.440000 0.000000
C 3.780000 -0.440000 0.000000
C 5.040000 0.440000 0.000000
C 6.300000 -0.440000 0.000000
C 7.560000 0.440000 0.000000
H -0.900000 0.940000 0.000000
H -0.900000 0.190000 0.779423
H -0.900000 0.190000 -0.779423
H 1.260000 -0.840000 1.000000
H 1.260000 -0.840000 -1.000000
H 2.520000 0.840000 1.000000
H 2.520000 0.840000 -1.000000
H 3.780000 -0.840000 1.000000
H 3.780000 -0.840000 -1.000000
H 5.040000 0.840000 1.000000
H 5.040000 0.840000 -1.000000
H 6.300000 -0.840000 1.000000
H 6.300000 -0.840000 -1.000000
H 8.460000 0.940000 0.000000
H 8.460000 0.690000 0.779423
H 8.460000 0.690000 -0.779423
BONDS
1 2 1
2 3 1
3 4 1
4 5 1
5 6 1
6 7 1
1 8 1
1 9 1
1 10 1
2 11 1
2 12 1
3 13 1
3 14 1
4 15 1
4 16 1
5 17 1
5 18 1
6 19 1
6 20 1
7 21 1
7 22 1
7 23 1
)";

constexpr const char* kEtheneXyz = R"(6
ethene
C 0.000000 0.000000 0.000000
C 1.330000 0.000000 0.000000
H -0.560000 0.920000 0.000000
H -0.560000 -0.920000 0.000000
H 1.890000 0.920000 0.000000
H 1.890000 -0.920000 0.000000
BONDS
1 2 2
1 3 1
1 4 1
2 5 1
2 6 1
)";

// --------------------------------------------------------------------------
// Criteria
// --------------------------------------------------------------------------

CheckResult timed(const std::string& id, const std::string& name,
                  const std::function<void(Checker&)>& body) {
  CheckResult result;
  result.id = id;
  result.name = name;
  auto start = std::chrono::steady_clock::now();
  Checker checker;
  try {
    body(checker);
    result.passed = checker.ok();
    result.detail = checker.detail();
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void criterion_moebius_closed_forms(Checker& c) {
  // Chains up to length 10.
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t i = 0; i + 1 < n; ++i) covers.push_back({i, i + 1});
    PosetAxis recursive = PosetAxis::explicit_poset(n, covers);
    PosetAxis closed = PosetAxis::chain_bounded(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        c.require(recursive.moebius(idx(s), idx(t)) ==
                      closed.moebius(idx(s + 1), idx(t + 1)),
                  "chain moebius mismatch at n=" + std::to_string(n));
      }
    }
  }
  // Boolean algebras up to rank 6.
  for (Vertex n = 0; n <= 6; ++n) {
    auto subsets = all_subsets(n);
    PosetAxis recursive = explicit_boolean(n);
    PosetAxis closed = PosetAxis::boolean_algebra(n);
    for (std::size_t a = 0; a < subsets.size(); ++a) {
      for (std::size_t b = 0; b < subsets.size(); ++b) {
        c.require(recursive.moebius(idx(a), idx(b)) ==
                      closed.moebius(sub(subsets[a]), sub(subsets[b])),
                  "boolean moebius mismatch at n=" + std::to_string(n));
      }
    }
  }
}

void criterion_inversion_roundtrip(Checker& c) {
  std::mt19937_64 rng(20240001);
  std::uniform_int_distribution<std::int64_t> weight(-25, 25);

  auto roundtrip = [&](const PosetAxis& axis, const std::vector<AxisElement>& elements) {
    std::map<AxisElement, std::int64_t> f, g;
    for (const auto& e : elements) f[e] = weight(rng);
    for (const auto& t : elements) {
      std::int64_t acc = 0;
      for (const auto& s : elements) {
        if (axis.less_equal(s, t)) acc += f[s];
      }
      g[t] = acc;
    }
    for (const auto& t : elements) {
      std::int64_t acc = 0;
      for (const auto& s : elements) {
        if (axis.less_equal(s, t)) acc += axis.moebius(s, t) * g[s];
      }
      c.require(acc == f[t], "inversion failed to recover f");
    }
  };

  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> size_dist(2, 8);
    std::size_t n = size_dist(rng);
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t j = 1; j < n; ++j) covers.push_back({0, j});
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (coin(rng) < 0.3) covers.push_back({i, j});
      }
    }
    PosetAxis axis = PosetAxis::explicit_poset(n, covers);
    std::vector<AxisElement> elements;
    for (std::size_t i = 0; i < n; ++i) elements.push_back(idx(i));
    roundtrip(axis, elements);
  }

  PosetAxis b5 = PosetAxis::boolean_algebra(5);
  std::vector<AxisElement> elements;
  for (auto& u : all_subsets(5)) elements.push_back(sub(u));
  roundtrip(b5, elements);
}

void criterion_product_theorem(Checker& c) {
  PosetGrid grid({PosetAxis::chain_bounded(3), PosetAxis::boolean_algebra(3)});
  std::vector<GridElement> elements;
  for (std::uint64_t m = 1; m <= 3; ++m) {
    for (auto& u : all_subsets(3)) elements.push_back({idx(m), sub(u)});
  }
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t a = 0; a < elements.size(); ++a) {
    auto ups = grid.covers_up(elements[a]);
    for (std::size_t b = 0; b < elements.size(); ++b) {
      if (std::find(ups.begin(), ups.end(), elements[b]) != ups.end()) {
        covers.push_back({a, b});
      }
    }
  }
  PosetAxis explicit_product = PosetAxis::explicit_poset(elements.size(), covers);
  for (std::size_t a = 0; a < elements.size(); ++a) {
    for (std::size_t b = 0; b < elements.size(); ++b) {
      c.require(explicit_product.moebius(idx(a), idx(b)) ==
                    grid.moebius(elements[a], elements[b]),
                "product rule mismatch");
    }
  }
}

void criterion_coefficient_oracle(Checker& c) {
  std::mt19937_64 rng(20240004);
  auto run = [&](const PosetGrid& grid, std::size_t max_inserts) {
    // Incremental maintenance.
    OrderIdeal ideal;
    SparseIntTensor incremental;
    ideal.insert(grid, grid.least());
    incremental.add_scaled(moebius_tensor(grid, grid.least()), 1);
    std::uniform_int_distribution<std::size_t> step_dist(1, max_inserts);
    std::size_t steps = step_dist(rng);
    for (std::size_t step = 0; step < steps; ++step) {
      std::vector<GridElement> frontier;
      for (const auto& p : ideal.elements()) {
        for (auto& r : admissible_covers(grid, ideal, p)) {
          if (!ideal.contains(r)) frontier.push_back(std::move(r));
        }
      }
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      if (frontier.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
      const GridElement& chosen = frontier[pick(rng)];
      ideal.insert(grid, chosen);
      incremental.add_scaled(moebius_tensor(grid, chosen), 1);
    }

    SparseIntTensor fresh = combination_coefficients(grid, ideal);
    c.require(fresh == incremental, "incremental tensor drifted from recomputation");
    for (const auto& p : ideal.elements()) {
      c.require(fresh.at(p) == brute_coefficient(grid, ideal, p),
                "coefficient disagrees with brute force");
    }
    for (const auto& [p, value] : fresh) {
      c.require(ideal.contains(p), "nonzero coefficient outside the ideal");
    }
    c.require(top_down_coefficient_check(grid, ideal), "top-down identity failed");
  };

  PosetGrid b5({PosetAxis::boolean_algebra(5)});
  PosetGrid mixed({PosetAxis::boolean_algebra(3), PosetAxis::chain_bounded(3),
                   PosetAxis::chain_bounded(3)});
  for (int trial = 0; trial < 100; ++trial) {
    run(b5, 14);
    run(mixed, 14);
  }
}

void criterion_consistency_characterization(Checker& c) {
  std::mt19937_64 rng(20240005);
  PosetGrid b4({PosetAxis::boolean_algebra(4)});
  auto subsets = all_subsets(4);

  int both_directions[2] = {0, 0};
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<std::uint32_t> member_mask(0, (1u << 16) - 1);
    std::uint32_t chosen = member_mask(rng) | 1u;
    std::vector<VertexSet> q_sets;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (chosen & (1u << i)) q_sets.push_back(subsets[i]);
    }
    std::sort(q_sets.begin(), q_sets.end(), [](const VertexSet& a, const VertexSet& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });

    std::vector<std::vector<std::size_t>> ideals;
    std::vector<std::size_t> current;
    std::function<void(std::size_t)> enumerate = [&](std::size_t next) {
      if (next == q_sets.size()) {
        ideals.push_back(current);
        return;
      }
      enumerate(next + 1);
      for (std::size_t below = 0; below < q_sets.size(); ++below) {
        if (below != next && is_subset(q_sets[below], q_sets[next]) &&
            std::find(current.begin(), current.end(), below) == current.end()) {
          return;
        }
      }
      current.push_back(next);
      enumerate(next + 1);
      current.pop_back();
    };
    enumerate(0);

    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t a = 0; a < q_sets.size(); ++a) {
      for (std::size_t b = 0; b < q_sets.size(); ++b) {
        if (a != b && is_subset(q_sets[a], q_sets[b])) covers.push_back({a, b});
      }
    }
    PosetGrid q_grid({PosetAxis::explicit_poset(q_sets.size(), covers)});
    std::set<VertexSet> q_members(q_sets.begin(), q_sets.end());

    bool all_consistent = true;
    for (const auto& ideal_indices : ideals) {
      if (ideal_indices.empty()) continue;
      std::vector<GridElement> antichain;
      for (std::size_t a : ideal_indices) {
        bool maximal = true;
        for (std::size_t b : ideal_indices) {
          if (a != b && is_subset(q_sets[a], q_sets[b])) {
            maximal = false;
            break;
          }
        }
        if (maximal) antichain.push_back({sub(q_sets[a])});
      }
      OrderIdeal ambient_ideal = OrderIdeal::down_closure(b4, antichain);
      SparseIntTensor ambient = combination_coefficients(b4, ambient_ideal);

      std::map<VertexSet, std::int64_t> sub_coeffs;
      for (std::size_t a : ideal_indices) {
        std::int64_t total = 0;
        for (std::size_t b : ideal_indices) {
          if (!is_subset(q_sets[a], q_sets[b])) continue;
          total += q_grid.moebius({idx(a)}, {idx(b)});
        }
        if (total != 0) sub_coeffs[q_sets[a]] = total;
      }

      std::set<VertexSet> support;
      for (const auto& [p, v] : ambient) support.insert(p[0].subset());
      for (const auto& [u, v] : sub_coeffs) support.insert(u);
      for (const auto& u : support) {
        std::int64_t ambient_value = ambient.at({sub(u)});
        std::int64_t expected = 0;
        if (q_members.count(u)) {
          auto it = sub_coeffs.find(u);
          expected = it == sub_coeffs.end() ? 0 : it->second;
        }
        if (ambient_value != expected) {
          all_consistent = false;
          break;
        }
      }
      if (!all_consistent) break;
    }

    bool meet_closed = check_meet_subsemilattice(q_sets).meet_closed;
    c.require(all_consistent == meet_closed,
              "consistency-for-all-ideals did not match meet-closure");
    ++both_directions[meet_closed ? 1 : 0];
  }
  c.require(both_directions[0] > 25 && both_directions[1] > 25,
            "sample failed to exercise both directions");
}

void criterion_overlapping_fragments(Checker& c) {
  std::mt19937_64 rng(20240006);
  std::uniform_int_distribution<int> m_dist(3, 8);
  std::uniform_int_distribution<int> k_dist(2, 4);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int m = m_dist(rng);
    int k = k_dist(rng);
    std::uniform_int_distribution<int> n_dist(1, k);
    int n = n_dist(rng);
    std::vector<VertexSet> fragments(k);
    std::uniform_int_distribution<int> frag_pick(0, k - 1);
    for (Vertex v = 0; v < static_cast<Vertex>(m); ++v) {
      fragments[frag_pick(rng)].push_back(v);
      for (auto& f : fragments) {
        if (coin(rng) < 0.2) f = set_union(f, {v});
      }
    }
    for (auto& f : fragments) {
      if (f.empty()) f.push_back(0);
    }
    auto v = random_potential(rng(), true);
    double by_ie = gmbe_energy(fragments, n, v);
    OrderIdeal ideal = gmbe_equivalent_ideal(static_cast<std::size_t>(m), fragments, n);
    PosetGrid grid({PosetAxis::boolean_algebra(static_cast<Vertex>(m))});
    double by_truncation =
        truncation_sum(grid, ideal, [&](const GridElement& p) { return v(p[0].subset()); });
    double scale = std::max({1.0, std::abs(by_ie), std::abs(by_truncation)});
    c.require(std::abs(by_ie - by_truncation) / scale <= 1e-12,
              "inclusion/exclusion energy deviates from the ideal truncation");
  }
}

void criterion_graph_facts(Checker& c) {
  InteractionGraph ring = six_cycle();
  ShortestPathOracle oracle(ring);

  // The augmented-hexane intersection: both arcs connected, their meet not.
  c.require(is_connected_subset(ring, {0, 1, 2, 3}), "arc {1,2,3,4} should be connected");
  c.require(is_connected_subset(ring, {0, 3, 4, 5}), "arc {1,4,5,6} should be connected");
  c.require(!is_connected_subset(ring, {0, 3}), "the meet {1,4} should be disconnected");
  auto report = diagnose_conn_consistency(ring);
  c.require(!report.meet_closed, "cycle graph should be flagged inconsistent");
  c.require(!report.chordless_cycles.empty(), "chordless cycle should be reported");
  c.require(report.exhaustive_meet_closed.has_value() && !*report.exhaustive_meet_closed,
            "exhaustive meet check should fail on the cycle");
  c.require(report.witness.has_value(), "a failing pair should be reported");

  // Convexity facts.
  c.require(is_convex_subset(ring, oracle, {0, 1, 2}), "{1,2,3} should be convex");
  c.require(!is_convex_subset(ring, oracle, {0, 3, 4, 5}), "{1,4,5,6} should not be convex");

  // Figure-derived family shape.
  auto family = enumerate_convex_subsets(ring, oracle, 6);
  std::map<std::size_t, int> by_rank;
  for (const auto& u : family) by_rank[u.size()]++;
  c.require(family.size() == 26, "convex family should have 26 members, has " +
                                     std::to_string(family.size()));
  c.require(by_rank[0] == 1 && by_rank[1] == 6 && by_rank[2] == 6 && by_rank[3] == 6 &&
                by_rank[4] == 6 && by_rank[6] == 1,
            "convex family rank counts should be 1,6,6,6,6,1; got 1," +
                std::to_string(by_rank[1]) + "," + std::to_string(by_rank[2]) + "," +
                std::to_string(by_rank[3]) + "," + std::to_string(by_rank[4]) + "," +
                std::to_string(by_rank[6]));

  // Forbidden-subgraph verdicts match exhaustive meet-closure.
  std::mt19937_64 rng(20240007);
  for (int trial = 0; trial < 200; ++trial) {
    InteractionGraph g = random_graph(rng, 8, 0.3);
    auto r = diagnose_conn_consistency(g);
    c.require(r.exhaustive_meet_closed.has_value() &&
                  r.meet_closed == *r.exhaustive_meet_closed,
              "forbidden-subgraph verdict disagreed with exhaustive meet-closure");
  }
}

void criterion_simplex_equivalence(Checker& c) {
  std::mt19937_64 rng(20240008);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> size_dist(2, 8);
    std::size_t m = size_dist(rng);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex i = 0; i < m; ++i) {
      for (Vertex j = i + 1; j < m; ++j) {
        if (coin(rng) < 0.45) edges.emplace_back(i, j);
      }
    }
    InteractionGraph g(m, edges);
    std::uniform_int_distribution<int> rank_dist(0, 3);
    int rank = rank_dist(rng);
    auto v = random_potential(rng(), true);
    double by_counts = simplex_energy(g, rank, v);
    PosetGrid grid({PosetAxis::boolean_algebra(static_cast<Vertex>(m))});
    std::vector<GridElement> members;
    for (auto& u : simplex_ideal(g, rank)) members.push_back({sub(std::move(u))});
    OrderIdeal ideal = OrderIdeal::down_closure(grid, members);
    double by_truncation =
        truncation_sum(grid, ideal, [&](const GridElement& p) { return v(p[0].subset()); });
    double scale = std::max({1.0, std::abs(by_counts), std::abs(by_truncation)});
    c.require(std::abs(by_counts - by_truncation) / scale <= 1e-12,
              "clique expansion deviates from the simplex-ideal truncation");
  }
}

void criterion_layered_recovery(Checker& c) {
  std::mt19937_64 rng(20240009);
  PosetGrid b4({PosetAxis::boolean_algebra(4)});
  for (int trial = 0; trial < 100; ++trial) {
    OrderIdeal outer = random_ideal(b4, rng, 12);
    std::vector<std::vector<VertexSet>> layers(3);
    for (const auto& p : outer.elements()) layers[0].push_back(p[0].subset());
    for (int layer = 1; layer < 3; ++layer) {
      std::vector<VertexSet> previous = layers[layer - 1];
      std::set<VertexSet> keep{{}};
      std::uniform_int_distribution<std::size_t> pick(0, previous.size() - 1);
      std::size_t rounds = pick(rng);
      for (std::size_t i = 0; i <= rounds; ++i) {
        const VertexSet& candidate = previous[pick(rng)];
        for (const auto& s : previous) {
          if (is_subset(s, candidate)) keep.insert(s);
        }
      }
      layers[layer].assign(keep.begin(), keep.end());
    }
    LayeredCoefficients coeffs = mlfcr_coefficients(4, layers);
    c.require(coeffs.agree(), "closed forms deviated from the product grid");

    // Two-level sum identity against the union layer.
    LayeredCoefficients two = mlfcr_coefficients(4, {layers[0], layers[1]});
    std::map<VertexSet, std::int64_t> summed = two.direct[1];
    for (const auto& [u, value] : two.direct[0]) summed[u] += value;
    std::erase_if(summed, [](const auto& kv) { return kv.second == 0; });
    std::map<VertexSet, std::int64_t> union_layer;
    for (const auto& u : layers[0]) {
      std::int64_t total = 0;
      for (const auto& t : layers[0]) {
        if (is_subset(u, t)) total += ((t.size() - u.size()) % 2 == 0) ? 1 : -1;
      }
      if (total != 0) union_layer[u] = total;
    }
    c.require(summed == union_layer, "two-level coefficient sum identity failed");
  }
}

// Shared setup for the adaptive-loop criteria: the convexity family of the
// six-cycle crossed with two method and two basis levels.
struct AdaptiveFixture {
  std::shared_ptr<InteractionGraph> graph;
  PosetGrid grid;
  SyntheticPotential potential;
  CostParams costs;

  explicit AdaptiveFixture(std::uint64_t seed, double uncertainty)
      : graph(std::make_shared<InteractionGraph>(six_cycle())),
        grid({convex_subsets_axis(graph), PosetAxis::chain_bounded(2),
              PosetAxis::chain_bounded(2)}),
        potential(make_params(seed, uncertainty)) {}

  static SyntheticPotential::Params make_params(std::uint64_t seed, double uncertainty) {
    SyntheticPotential::Params p;
    p.sites = 6;
    p.m_levels = 2;
    p.p_levels = 2;
    p.seed = seed;
    p.theta = 0.3;
    p.uncertainty = uncertainty;
    return p;
  }

  adaptive::EvaluateFn evaluate_fn() const {
    return [this](const GridElement& p) {
      SubproblemSpec spec;
      spec.subset = p[0].subset();
      spec.method_index = static_cast<int>(p[1].index());
      spec.basis_index = static_cast<int>(p[2].index());
      return potential.evaluate(costs, spec);
    };
  }

  adaptive::CostFn cost_fn() const {
    return [this](const GridElement& p) {
      return potential.cost_for(costs, p[0].subset(), static_cast<int>(p[1].index()),
                                static_cast<int>(p[2].index()));
    };
  }
};

void criterion_adaptive_integrity(Checker& c) {
  AdaptiveFixture fixture(20240010, 1e-8);
  adaptive::AdaptiveConfig config;
  config.strategy = adaptive::Strategy::All;

  auto audit = [&](const adaptive::AdaptiveState& st, const adaptive::IterationRecord& rec) {
    SparseIntTensor d = combination_coefficients(fixture.grid, st.ideal);
    c.require(d == st.combination, "combination tensor drifted");
    SparseIntTensor e;
    for (const auto& p : st.ideal.antichain()) {
      e.add_scaled(moebius_tensor(fixture.grid, p), 1);
    }
    c.require(e == st.indicator, "indicator tensor drifted");

    KahanAccumulator direct;
    for (const auto& p : st.ideal.antichain()) {
      direct.add(reduce_product(moebius_tensor(fixture.grid, p), [&](const GridElement& q) {
        auto it = st.evaluations.find(q);
        return it == st.evaluations.end() ? 0.0 : it->second.value;
      }));
    }
    double scale = std::max({1.0, std::abs(direct.value()), std::abs(rec.error_indicator)});
    c.require(std::abs(rec.error_indicator - direct.value()) / scale <= 1e-12,
              "indicator value deviates from the antichain sum");

    std::map<GridElement, double> eps;
    for (const auto& [p, record] : st.evaluations) eps[p] = record.uncertainty;
    double closed_form = propagated_uncertainty(st.combination, eps);
    double eps_scale = std::max({1e-300, closed_form, rec.uncertainty});
    c.require(std::abs(rec.uncertainty - closed_form) / eps_scale <= 1e-12,
              "propagated uncertainty deviates from the closed form");
  };

  auto state =
      adaptive::run_adaptive(fixture.grid, fixture.evaluate_fn(), fixture.cost_fn(),
                             config, audit);
  c.require(state.stop_reason == adaptive::StopReason::QueueExhausted,
            "run should exhaust the finite grid");
  double target = fixture.potential.target();
  c.require(std::abs(state.value() - target) / std::max(1.0, std::abs(target)) <= 1e-12,
            "exhaustion failed to recover the synthetic target");
  for (std::size_t i = 1; i < state.history.size(); ++i) {
    c.require(state.history[i].cost > state.history[i - 1].cost,
              "cumulative cost should increase strictly here");
  }

  adaptive::AdaptiveConfig parallel = config;
  parallel.concurrency = 8;
  auto state8 = adaptive::run_adaptive(fixture.grid, fixture.evaluate_fn(),
                                       fixture.cost_fn(), parallel);
  c.require(state.history.size() == state8.history.size(),
            "history length depends on concurrency");
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    c.require(state.history[i].value == state8.history[i].value &&
                  state.history[i].error_indicator == state8.history[i].error_indicator &&
                  state.history[i].cost == state8.history[i].cost,
              "histories differ across concurrency levels");
  }
}

void criterion_convergence_behavior(Checker& c) {
  // Seven-site path system, all-strategy run stopped short of exhaustion.
  auto path = std::make_shared<InteractionGraph>(InteractionGraph(
      7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}}));
  SyntheticPotential::Params params;
  params.sites = 7;
  params.m_levels = 2;
  params.p_levels = 2;
  params.theta = 0.3;
  params.seed = 127;
  SyntheticPotential potential(params);
  CostParams costs;
  PosetGrid grid({convex_subsets_axis(path), PosetAxis::chain_bounded(2),
                  PosetAxis::chain_bounded(2)});

  adaptive::AdaptiveConfig config;
  config.strategy = adaptive::Strategy::All;
  config.max_iterations = 9;
  auto state = adaptive::run_adaptive(
      grid,
      [&](const GridElement& p) {
        SubproblemSpec spec;
        spec.subset = p[0].subset();
        spec.method_index = static_cast<int>(p[1].index());
        spec.basis_index = static_cast<int>(p[2].index());
        return potential.evaluate(costs, spec);
      },
      [&](const GridElement& p) {
        return potential.cost_for(costs, p[0].subset(), static_cast<int>(p[1].index()),
                                  static_cast<int>(p[2].index()));
      },
      config);

  double exact = potential.target();
  std::vector<double> errors;
  for (const auto& rec : state.history) errors.push_back(std::abs(rec.value - exact));
  c.require(errors.size() >= 6, "expected at least six recorded iterations");

  // Nonincreasing over the last three quarters of the iterations.
  std::size_t start = errors.size() / 4;
  for (std::size_t i = start + 1; i < errors.size(); ++i) {
    c.require(errors[i] <= errors[i - 1] * (1 + 1e-12),
              "error increased at iteration " + std::to_string(i));
  }

  // Indicator within two orders of magnitude of the true error throughout.
  for (std::size_t i = 1; i < state.history.size(); ++i) {
    double indicator = std::abs(state.history[i].error_indicator);
    double truth = errors[i];
    c.require(indicator <= 100.0 * truth && indicator >= truth / 100.0,
              "indicator left the two-order band at iteration " + std::to_string(i));
  }
}

void criterion_cost_model(Checker& c) {
  CostParams def;
  c.require(def.n_hf_iter == 15 && def.n_cc_iter == 15 && def.f_eri == 50,
            "default factors should be 15, 15, 50");

  std::mt19937_64 rng(20240012);
  std::uniform_int_distribution<std::int64_t> size_dist(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    SystemSizes s;
    s.n_ao = size_dist(rng);
    s.n_occ = size_dist(rng);
    s.n_corr = std::min(s.n_occ, size_dist(rng));
    s.n_virt = size_dist(rng);
    s.n_eri = size_dist(rng) * size_dist(rng);
    double ao = static_cast<double>(s.n_ao), eri = static_cast<double>(s.n_eri);
    double corr = static_cast<double>(s.n_corr), virt = static_cast<double>(s.n_virt);

    double hf = def.n_hf_iter * (def.f_eri * eri + ao * ao * ao);
    c.require(cost_hf(def, s) == hf, "HF formula mismatch");
    double mp2 = hf + corr * corr * virt * virt + def.f_eri * eri + corr * eri +
                 corr * corr * ao * ao * ao + corr * corr * virt * ao +
                 corr * corr * virt * virt * ao;
    c.require(cost_mp2(def, s) == mp2, "MP2 formula mismatch");
    for (int n = 2; n <= 4; ++n) {
      double amp = def.n_cc_iter;
      for (int i = 0; i < n; ++i) amp *= corr;
      for (int i = 0; i < n + 2; ++i) amp *= virt;
      double sum = corr + virt;
      double cc = def.f_eri * eri + ao * sum * sum * sum * sum + amp;
      c.require(cost_cc(def, s, n) == cc, "CC formula mismatch");
      double pert = 1;
      for (int i = 0; i < n + 1; ++i) pert *= corr;
      for (int i = 0; i < n + 2; ++i) pert *= virt;
      c.require(cost_cc_pert(def, s, n) == cc + pert, "perturbative formula mismatch");
    }
  }
}

void criterion_fragmentation(Checker& c) {
  Geometry heptane = parse_geometry(kHeptaneXyz);
  Fragmentation f = heuristic_fragment(heptane);
  c.require(f.size() == 7, "heptane should produce seven fragments, got " +
                               std::to_string(f.size()));
  for (const auto& frag : f) {
    int heavy = 0;
    bool hydrogens_bonded = true;
    for (Vertex v : frag) {
      if (heptane.atoms[v].z == 6) ++heavy;
    }
    c.require(heavy == 1, "each fragment should hold exactly one backbone carbon");
    (void)hydrogens_bonded;
  }
  c.require(heuristic_fragment(heptane, f) == f, "heuristic is not idempotent");

  Geometry ethene = parse_geometry(kEtheneXyz);
  c.require(heuristic_fragment(ethene).size() == 1, "ethene should merge into one fragment");
}

}  // namespace

std::vector<CheckResult> run_acceptance() {
  std::vector<CheckResult> results;
  results.push_back(timed("C1", "moebius recursion equals chain and boolean closed forms",
                          criterion_moebius_closed_forms));
  results.push_back(
      timed("C2", "inversion round-trip on random posets", criterion_inversion_roundtrip));
  results.push_back(
      timed("C3", "product rule on an explicit chain-boolean grid", criterion_product_theorem));
  results.push_back(timed("C4", "combination coefficients: brute force, incremental, top-down",
                          criterion_coefficient_oracle));
  results.push_back(timed("C5", "consistency for all ideals iff meet-closed",
                          criterion_consistency_characterization));
  results.push_back(timed("C6", "overlapping-fragment energies equal ideal truncations",
                          criterion_overlapping_fragments));
  results.push_back(timed("C7", "interaction-graph facts and diagnostics",
                          criterion_graph_facts));
  results.push_back(timed("C8", "clique expansion equals simplex-ideal truncation",
                          criterion_simplex_equivalence));
  results.push_back(timed("C9", "layered coefficient closed forms", criterion_layered_recovery));
  results.push_back(
      timed("C10", "adaptive loop integrity and determinism", criterion_adaptive_integrity));
  results.push_back(
      timed("C11", "convergence and indicator band", criterion_convergence_behavior));
  results.push_back(timed("C12", "cost model formulas and defaults", criterion_cost_model));
  results.push_back(timed("C13", "fragmentation heuristic", criterion_fragmentation));
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace supanova::verify
