#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "supanova/adaptive.hpp"
#include "supanova/graph.hpp"
#include "supanova/potentials.hpp"
#include "test_helpers.hpp"

using namespace supanova;
using namespace supanova::testing;
using namespace supanova::adaptive;

namespace {

// A small synthetic setup over the boolean algebra with both level axes.
struct Setup {
  SyntheticPotential potential;
  PosetGrid grid;
  CostParams costs;

  explicit Setup(std::size_t sites, int levels, std::uint64_t seed)
      : potential(make_params(sites, levels, seed)),
        grid({PosetAxis::boolean_algebra(static_cast<Vertex>(sites)),
              PosetAxis::chain_bounded(levels), PosetAxis::chain_bounded(levels)}) {}

  static SyntheticPotential::Params make_params(std::size_t sites, int levels,
                                                std::uint64_t seed) {
    SyntheticPotential::Params p;
    p.sites = sites;
    p.m_levels = levels;
    p.p_levels = levels;
    p.seed = seed;
    p.theta = 0.3;
    return p;
  }

  EvaluateFn evaluate_fn() const {
    return [this](const GridElement& p) {
      SubproblemSpec spec;
      spec.subset = p[0].subset();
      spec.method_index = static_cast<int>(p[1].index());
      spec.basis_index = static_cast<int>(p[2].index());
      return potential.evaluate(costs, spec);
    };
  }

  CostFn cost_fn() const {
    return [this](const GridElement& p) {
      return potential.cost_for(costs, p[0].subset(), static_cast<int>(p[1].index()),
                                static_cast<int>(p[2].index()));
    };
  }
};

double exact_total(const Setup& s) { return s.potential.target(); }

}  // namespace

TEST_CASE("queue keys") {
  CHECK(queue_key(0.0, 5.0) == 0.0);
  CHECK(queue_key(0.0, 0.0) == 0.0);
  CHECK(queue_key(2.0, 4.0) == 0.5);
  CHECK(std::isinf(queue_key(1.0, 0.0)));
}

TEST_CASE("single-element grid") {
  PosetGrid grid({PosetAxis::chain_bounded(1)});
  auto state = run_adaptive(
      grid, [](const GridElement&) { EvaluationRecord r; r.value = -2.5; return r; },
      [](const GridElement&) { return 1.0; }, AdaptiveConfig{});
  CHECK(state.history.size() == 1);
  CHECK(state.value() == -2.5);
  CHECK(state.error_indicator() == -2.5);
  CHECK(state.stop_reason == StopReason::QueueExhausted);
  CHECK(state.ideal.size() == 1);
}

TEST_CASE("exhaustion recovers the exact total on a finite grid") {
  Setup s(4, 2, 99);
  AdaptiveConfig config;
  config.strategy = Strategy::All;
  auto state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), config);
  CHECK(state.stop_reason == StopReason::QueueExhausted);
  CHECK(state.ideal.size() == 16 * 4);
  CHECK(state.value() ==
        doctest::Approx(exact_total(s)).epsilon(1e-12));
  // Once the whole grid is in, the indicator sums the top antichain only.
  CHECK(state.ideal.antichain().size() == 1);

  // History bookkeeping.
  double previous_cost = -1.0;
  for (const auto& rec : state.history) {
    CHECK(rec.cost >= previous_cost);
    previous_cost = rec.cost;
  }
  CHECK(state.history.front().ideal_size == 1);
  CHECK(state.history.back().queue_size == 0);
}

TEST_CASE("incremental tensors match from-scratch recomputation at every iteration") {
  Setup s(3, 2, 1234);
  AdaptiveConfig config;
  config.strategy = Strategy::All;
  int audited = 0;
  auto state = run_adaptive(
      s.grid, s.evaluate_fn(), s.cost_fn(), config,
      [&](const AdaptiveState& st, const IterationRecord& rec) {
        CHECK(st.ideal.is_valid(s.grid));
        SparseIntTensor d = combination_coefficients(s.grid, st.ideal);
        CHECK(d == st.combination);
        SparseIntTensor e;
        for (const auto& p : st.ideal.antichain()) {
          e.add_scaled(moebius_tensor(s.grid, p), 1);
        }
        CHECK(e == st.indicator);
        // Indicator value equals the antichain contribution sum.
        KahanAccumulator direct;
        for (const auto& p : st.ideal.antichain()) {
          direct.add(reduce_product(moebius_tensor(s.grid, p), [&](const GridElement& q) {
            auto it = st.evaluations.find(q);
            return it == st.evaluations.end() ? 0.0 : it->second.value;
          }));
        }
        CHECK(rec.error_indicator == doctest::Approx(direct.value()).epsilon(1e-12));
        // S from the combination tensor equals the contribution sum.
        KahanAccumulator by_contribution;
        for (const auto& p : st.ideal.elements()) {
          by_contribution.add(
              reduce_product(moebius_tensor(s.grid, p), [&](const GridElement& q) {
                auto it = st.evaluations.find(q);
                return it == st.evaluations.end() ? 0.0 : it->second.value;
              }));
        }
        CHECK(rec.value ==
              doctest::Approx(by_contribution.value()).epsilon(1e-12));
        ++audited;
      });
  CHECK(audited == static_cast<int>(state.history.size()));
  CHECK(audited > 3);
}

TEST_CASE("admissible covers") {
  PosetGrid grid({PosetAxis::boolean_algebra(2), PosetAxis::chain_bounded(2)});
  OrderIdeal ideal;
  ideal.insert(grid, grid.least());
  auto atoms = admissible_covers(grid, ideal, grid.least());
  CHECK(atoms.size() == 3);

  // With ({1}, 1) missing, ({0, 1}, 1) is inadmissible from ({0}, 1).
  ideal.insert(grid, {sub({0}), idx(1)});
  auto covers = admissible_covers(grid, ideal, {sub({0}), idx(1)});
  for (const auto& r : covers) {
    CHECK(r != GridElement{sub({0, 1}), idx(1)});
  }
  CHECK_THROWS_AS(admissible_covers(grid, ideal, {sub({0, 1}), idx(1)}),
                  std::logic_error);
}

TEST_CASE("strategies differ in expansion breadth") {
  Setup s(4, 2, 5);
  AdaptiveConfig all_config;
  all_config.strategy = Strategy::All;
  all_config.max_iterations = 3;
  auto all_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), all_config);

  AdaptiveConfig best_config;
  best_config.strategy = Strategy::Best;
  best_config.max_iterations = 3;
  auto best_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), best_config);

  CHECK(best_state.ideal.size() < all_state.ideal.size());

  // Threshold(0) behaves as All.
  AdaptiveConfig t0;
  t0.strategy = Strategy::Threshold;
  t0.threshold_alpha = 0.0;
  t0.max_iterations = 3;
  auto t0_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), t0);
  CHECK(t0_state.ideal.elements() == all_state.ideal.elements());
  for (std::size_t i = 0; i < t0_state.history.size(); ++i) {
    CHECK(t0_state.history[i].value == all_state.history[i].value);
  }

  // Threshold(1) behaves as Best when keys are distinct.
  AdaptiveConfig t1;
  t1.strategy = Strategy::Threshold;
  t1.threshold_alpha = 1.0;
  t1.max_iterations = 6;
  auto t1_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), t1);
  AdaptiveConfig best6 = best_config;
  best6.max_iterations = 6;
  auto best6_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), best6);
  CHECK(t1_state.ideal.elements() == best6_state.ideal.elements());

  // Every strategy run reaches the same exact total at exhaustion.
  AdaptiveConfig exhaust;
  exhaust.strategy = Strategy::Best;
  auto full = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), exhaust);
  CHECK(full.value() == doctest::Approx(exact_total(s)).epsilon(1e-12));
  AdaptiveConfig exhaust_threshold;
  exhaust_threshold.strategy = Strategy::Threshold;
  exhaust_threshold.threshold_alpha = 0.5;
  auto full_threshold =
      run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), exhaust_threshold);
  CHECK(full_threshold.value() == doctest::Approx(exact_total(s)).epsilon(1e-12));
}

TEST_CASE("zero-contribution elements stay expandable at key zero") {
  // All one-body and pair weights vanish: every proper-subset contribution
  // at the base level is zero, yet All still reaches the full grid.
  SyntheticPotential::Params p;
  p.sites = 3;
  p.m_levels = 1;
  p.p_levels = 1;
  p.one_body_scale = 0.0;
  p.pair_scale = 0.0;
  p.seed = 3;
  SyntheticPotential pot(p);
  PosetGrid grid({PosetAxis::boolean_algebra(3), PosetAxis::chain_bounded(1),
                  PosetAxis::chain_bounded(1)});
  CostParams costs;
  AdaptiveConfig config;
  config.strategy = Strategy::All;
  auto state = run_adaptive(
      grid,
      [&](const GridElement& q) {
        SubproblemSpec spec;
        spec.subset = q[0].subset();
        return pot.evaluate(costs, spec);
      },
      [&](const GridElement& q) { return pot.cost_for(costs, q[0].subset(), 1, 1); },
      config);
  CHECK(state.stop_reason == StopReason::QueueExhausted);
  CHECK(state.ideal.size() == 8);
  CHECK(state.value() == doctest::Approx(pot.target()).epsilon(1e-12));
}

TEST_CASE("termination criteria") {
  Setup s(4, 2, 11);

  AdaptiveConfig by_cost;
  by_cost.cost_budget = 1.0;  // tiny: stops as soon as any cost lands
  auto cost_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), by_cost);
  CHECK(cost_state.stop_reason == StopReason::CostBudget);
  CHECK(cost_state.total_cost() >= 1.0);

  AdaptiveConfig by_iter;
  by_iter.max_iterations = 2;
  auto iter_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), by_iter);
  CHECK(iter_state.stop_reason == StopReason::MaxIterations);
  CHECK(iter_state.history.size() == 2);

  AdaptiveConfig by_error;
  by_error.error_threshold = 1e30;  // everything qualifies from iteration 1
  auto error_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), by_error);
  CHECK(error_state.stop_reason == StopReason::ErrorThreshold);
  CHECK(error_state.history.size() == 2);

  AdaptiveConfig by_wall;
  by_wall.wall_clock_limit_s = 0.0;
  auto wall_state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), by_wall);
  CHECK(wall_state.stop_reason == StopReason::WallClock);
}

TEST_CASE("uncertainty propagation uses the combination coefficients") {
  Setup s(3, 1, 21);
  auto base = s.evaluate_fn();
  EvaluateFn with_eps = [&](const GridElement& p) {
    EvaluationRecord r = base(p);
    r.uncertainty = 1e-8;
    return r;
  };
  auto state = run_adaptive(s.grid, with_eps, s.cost_fn(), AdaptiveConfig{});
  std::map<GridElement, double> eps;
  for (const auto& [p, rec] : state.evaluations) eps[p] = rec.uncertainty;
  CHECK(state.history.back().uncertainty ==
        doctest::Approx(propagated_uncertainty(state.combination, eps)).epsilon(1e-12));
  CHECK(state.history.back().uncertainty > 0.0);
}

TEST_CASE("identical histories under different evaluation concurrency") {
  Setup s(4, 2, 31);
  AdaptiveConfig serial;
  serial.strategy = Strategy::All;
  serial.concurrency = 1;
  auto a = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), serial);

  AdaptiveConfig parallel = serial;
  parallel.concurrency = 8;
  auto b = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), parallel);

  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].value == b.history[i].value);
    CHECK(a.history[i].error_indicator == b.history[i].error_indicator);
    CHECK(a.history[i].cost == b.history[i].cost);
    CHECK(a.history[i].ideal_size == b.history[i].ideal_size);
  }
  CHECK(a.ideal.elements() == b.ideal.elements());
}

TEST_CASE("evaluator failures abort by default and can be excluded") {
  Setup s(3, 1, 41);
  GridElement poison{sub({0, 1}), idx(1), idx(1)};
  auto base = s.evaluate_fn();
  EvaluateFn failing = [&](const GridElement& p) {
    if (p == poison) throw EvaluationError("backend exploded");
    return base(p);
  };

  AdaptiveConfig abort_config;
  CHECK_THROWS_WITH_AS(run_adaptive(s.grid, failing, s.cost_fn(), abort_config),
                       doctest::Contains("({0,1},1,1)"), EvaluationError);

  AdaptiveConfig exclude_config;
  exclude_config.on_failure = FailurePolicy::Exclude;
  auto state = run_adaptive(s.grid, failing, s.cost_fn(), exclude_config);
  CHECK(state.stop_reason == StopReason::QueueExhausted);
  CHECK(state.failed == std::vector<GridElement>{poison});
  CHECK_FALSE(state.ideal.contains(poison));
  // Everything not above the failed element was still reached.
  CHECK(state.ideal.contains(GridElement{sub({0, 2}), idx(1), idx(1)}));
  CHECK(state.ideal.contains(GridElement{sub({1, 2}), idx(1), idx(1)}));
  CHECK_FALSE(state.ideal.contains(GridElement{sub({0, 1, 2}), idx(1), idx(1)}));
}

TEST_CASE("unbounded axes run under finite termination criteria") {
  // A single unbounded chain: each level contributes the increment of a
  // convergent sequence, so partial sums telescope to the last level value.
  PosetGrid grid({PosetAxis::chain_nat()});
  auto level_value = [](std::uint64_t k) { return 1.0 - std::pow(0.5, double(k + 1)); };
  AdaptiveConfig config;
  config.strategy = Strategy::All;
  config.max_iterations = 6;
  auto state = run_adaptive(
      grid,
      [&](const GridElement& p) {
        EvaluationRecord r;
        r.value = level_value(p[0].index());
        return r;
      },
      [](const GridElement&) { return 1.0; }, config);
  CHECK(state.stop_reason == StopReason::MaxIterations);
  CHECK(state.ideal.size() == 6);
  CHECK(state.value() == doctest::Approx(level_value(5)).epsilon(1e-14));
  // The indicator is the top contribution: the last increment.
  CHECK(state.error_indicator() ==
        doctest::Approx(level_value(5) - level_value(4)).epsilon(1e-12));
}

TEST_CASE("history serialization") {
  Setup s(3, 1, 51);
  AdaptiveConfig config;
  config.max_iterations = 2;
  auto state = run_adaptive(s.grid, s.evaluate_fn(), s.cost_fn(), config);
  std::string csv = history_csv(state.history);
  CHECK(csv.find("iteration,ideal_size,new_elements,S,E_ind,cost,dS,wall_s,queue_len") ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  std::string jsonl = history_jsonl(state.history);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2);
  CHECK(jsonl.find("\"E_ind\"") != std::string::npos);
}
