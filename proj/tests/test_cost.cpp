#include <doctest.h>

#include <random>

#include "supanova/cost.hpp"

using namespace supanova;

namespace {

// Independent restatement of the model formulas, kept deliberately separate
// from the implementation.
double oracle_hf(double it, double f, double eri, double ao) {
  return it * (f * eri + ao * ao * ao);
}

double oracle_mp2(const CostParams& p, const SystemSizes& s) {
  double ao = s.n_ao, eri = s.n_eri, c = s.n_corr, v = s.n_virt;
  return oracle_hf(p.n_hf_iter, p.f_eri, eri, ao) + c * c * v * v + p.f_eri * eri +
         c * eri + c * c * ao * ao * ao + c * c * v * ao + c * c * v * v * ao;
}

double oracle_cc(const CostParams& p, const SystemSizes& s, int n) {
  double ao = s.n_ao, eri = s.n_eri, c = s.n_corr, v = s.n_virt;
  double amp = p.n_cc_iter;
  for (int i = 0; i < n; ++i) amp *= c;
  for (int i = 0; i < n + 2; ++i) amp *= v;
  double sum = c + v;
  return p.f_eri * eri + ao * sum * sum * sum * sum + amp;
}

double oracle_cc_pert(const CostParams& p, const SystemSizes& s, int n) {
  double c = s.n_corr, v = s.n_virt;
  double corr = 1;
  for (int i = 0; i < n + 1; ++i) corr *= c;
  for (int i = 0; i < n + 2; ++i) corr *= v;
  return oracle_cc(p, s, n) + corr;
}

}  // namespace

TEST_CASE("cost formulas by direct substitution") {
  CostParams def;
  CHECK(def.n_hf_iter == 15);
  CHECK(def.n_cc_iter == 15);
  CHECK(def.f_eri == 50);

  SystemSizes s{10, 5, 5, 5, 1000};
  CHECK(cost_hf(def, s) == 15.0 * (50.0 * 1000 + 1000));
  CHECK(cost_hf(def, s) == 765000.0);

  SystemSizes zero{};
  CHECK(cost_hf(def, zero) == 0.0);

  SystemSizes doubled = s;
  doubled.n_ao = 20;
  CHECK(cost_hf(def, doubled) - 15.0 * 50.0 * 1000 ==
        8 * (cost_hf(def, s) - 15.0 * 50.0 * 1000));

  SystemSizes unit{1, 1, 1, 1, 1};
  CHECK(cost_mp2(def, unit) == oracle_mp2(def, unit));
  CHECK(cost_cc(def, unit, 2) == oracle_cc(def, unit, 2));

  SystemSizes corrfree{8, 4, 0, 4, 100};
  CHECK(cost_mp2(def, corrfree) == cost_hf(def, corrfree) + def.f_eri * 100);
}

TEST_CASE("cost formulas match the oracle on random sizes") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> size_dist(0, 12);
  CostParams def;
  for (int trial = 0; trial < 100; ++trial) {
    SystemSizes s;
    s.n_ao = size_dist(rng);
    s.n_occ = size_dist(rng);
    s.n_corr = std::min(s.n_occ, size_dist(rng));
    s.n_virt = size_dist(rng);
    s.n_eri = size_dist(rng) * size_dist(rng);
    CHECK(cost_hf(def, s) == oracle_hf(def.n_hf_iter, def.f_eri,
                                       static_cast<double>(s.n_eri),
                                       static_cast<double>(s.n_ao)));
    CHECK(cost_mp2(def, s) == oracle_mp2(def, s));
    for (int n = 2; n <= 4; ++n) {
      CHECK(cost_cc(def, s, n) == oracle_cc(def, s, n));
      CHECK(cost_cc_pert(def, s, n) == oracle_cc_pert(def, s, n));
      // The perturbative correction term, exactly.
      double c = static_cast<double>(s.n_corr), v = static_cast<double>(s.n_virt);
      double corr = 1;
      for (int i = 0; i < n + 1; ++i) corr *= c;
      for (int i = 0; i < n + 2; ++i) corr *= v;
      CHECK(cost_cc_pert(def, s, n) - cost_cc(def, s, n) == corr);
    }
    CHECK(cost_cc(def, s, 3) >= cost_cc(def, s, 2));
  }
}

TEST_CASE("method hierarchy dispatch") {
  CHECK(method_for_index(1).label == "HF");
  CHECK(method_for_index(2).label == "MP2");
  CHECK(method_for_index(3).label == "CC(2)");
  CHECK(method_for_index(4).label == "CC(2)(3)");
  CHECK(method_for_index(5).label == "CC(3)");
  CHECK(method_for_index(6).label == "CC(3)(4)");
  CHECK_THROWS_AS(method_for_index(0), std::invalid_argument);

  CostParams def;
  SystemSizes s{34, 5, 5, 29, 12769};
  CHECK(cost_of_spec(def, 1, s) == cost_hf(def, s));
  CHECK(cost_of_spec(def, 2, s) == cost_mp2(def, s));
  CHECK(cost_of_spec(def, 3, s) == cost_cc(def, s, 2));
  CHECK(cost_of_spec(def, 4, s) == cost_cc_pert(def, s, 2));

  // Monotone along the hierarchy for realistic subsystem sizes.
  double previous = 0;
  for (int m = 1; m <= 6; ++m) {
    double c = cost_of_spec(def, m, s);
    CHECK(c > 0);
    CHECK(c >= previous);
    previous = c;
  }
}

TEST_CASE("AO tables and the size surrogate") {
  AoTable table = AoTable::parse("# Z p ao shellpairs\n1 1 5 3\n6 1 14 6\n");
  CHECK(table.lookup(1, 1) == std::pair<std::int64_t, std::int64_t>{5, 3});
  CHECK_THROWS_AS(table.lookup(8, 1), std::invalid_argument);

  // A single hydrogen.
  std::vector<Atom> lone{{1, {0, 0, 0}}};
  SystemSizes s = surrogate_sizes(lone, 1, table, 10.0);
  CHECK(s.n_ao == 5);
  CHECK(s.n_occ == 1);  // one electron rounds up to one orbital
  CHECK(s.n_corr == 1);
  CHECK(s.n_virt == 4);
  CHECK(s.n_eri == 9 * 9);  // one diagonal pair of 3 shell pairs

  // Far-separated atoms: only diagonal pairs survive the screen.
  std::vector<Atom> split{{1, {0, 0, 0}}, {1, {100, 0, 0}}};
  SystemSizes far = surrogate_sizes(split, 1, table, 10.0);
  CHECK(far.n_eri == (9 + 9) * (9 + 9));
  std::vector<Atom> near{{1, {0, 0, 0}}, {1, {1, 0, 0}}};
  SystemSizes close = surrogate_sizes(near, 1, table, 10.0);
  CHECK(close.n_eri == (9 + 9 + 9) * (9 + 9 + 9));
  CHECK(close.n_eri > far.n_eri);

  // Monotone in subset size.
  std::vector<Atom> three = near;
  three.push_back({6, {0.5, 1, 0}});
  SystemSizes bigger = surrogate_sizes(three, 1, table, 10.0);
  CHECK(bigger.n_ao > close.n_ao);
  CHECK(bigger.n_eri > close.n_eri);

  // Frozen-core orbital counts reduce the correlated space.
  SystemSizes frozen = surrogate_sizes(three, 1, table, 10.0, {{6, 1}});
  CHECK(frozen.n_corr == frozen.n_occ - 1);

  CHECK_FALSE(AoTable::bundled_default().empty());
  CHECK(AoTable::bundled_default().lookup(1, 1).first == 5);
}
