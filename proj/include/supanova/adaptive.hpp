#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supanova/ideal.hpp"
#include "supanova/poset.hpp"
#include "supanova/potentials.hpp"
#include "supanova/tensor.hpp"

namespace supanova::adaptive {

enum class Strategy { Best, All, Threshold };

enum class FailurePolicy {
  Abort,    // rethrow the evaluator error (default)
  Exclude,  // treat the element as permanently unaffordable and requeue others
};

struct AdaptiveConfig {
  Strategy strategy = Strategy::All;
  double threshold_alpha = 0.0;  // only read for Strategy::Threshold, in [0, 1]

  // Termination criteria; queue exhaustion is always active. The error
  // threshold is only consulted from iteration 1 onward.
  std::optional<double> cost_budget;
  std::optional<double> error_threshold;
  std::optional<std::int64_t> max_iterations;
  std::optional<double> wall_clock_limit_s;

  int concurrency = 1;
  FailurePolicy on_failure = FailurePolicy::Abort;
};

struct IterationRecord {
  std::int64_t iteration = 0;
  std::size_t ideal_size = 0;
  std::size_t new_elements = 0;
  double value = 0.0;             // S_i
  double error_indicator = 0.0;   // E_i
  double cost = 0.0;              // cumulative abstract cost
  double uncertainty = 0.0;       // dS_i
  double wall_s = 0.0;
  std::size_t queue_size = 0;
};

enum class StopReason {
  QueueExhausted,
  CostBudget,
  ErrorThreshold,
  MaxIterations,
  WallClock,
};

std::string to_string(StopReason reason);

struct AdaptiveState {
  OrderIdeal ideal;
  SparseIntTensor combination;  // D = sum of Moebius tensors over the ideal
  SparseIntTensor indicator;    // E = sum over the generating antichain
  std::map<GridElement, EvaluationRecord> evaluations;  // L plus metadata
  std::vector<IterationRecord> history;
  StopReason stop_reason = StopReason::QueueExhausted;
  std::vector<GridElement> failed;  // only under FailurePolicy::Exclude

  double value() const { return history.empty() ? 0.0 : history.back().value; }
  double error_indicator() const {
    return history.empty() ? 0.0 : history.back().error_indicator;
  }
  double total_cost() const { return history.empty() ? 0.0 : history.back().cost; }
};

using EvaluateFn = std::function<EvaluationRecord(const GridElement&)>;
using CostFn = std::function<double(const GridElement&)>;
using IterationObserver = std::function<void(const AdaptiveState&, const IterationRecord&)>;

// Benefit/cost queue key. A vanishing contribution keys to exactly zero (the
// element stays expandable); a nonzero contribution at zero cost keys to
// infinity.
double queue_key(double contribution, double cost);

// Grows a quasi-optimal truncation ideal: each iteration expands
// highest-benefit-per-cost queue elements by their admissible covers,
// evaluates the new subproblems (up to config.concurrency at a time, applied
// in canonical key order), maintains the combination and indicator tensors
// incrementally, and records value, error indicator, cumulative cost, and
// propagated uncertainty.
AdaptiveState run_adaptive(const PosetGrid& grid, const EvaluateFn& evaluate,
                           const CostFn& cost, const AdaptiveConfig& config,
                           const IterationObserver& observer = {});

// Per-iteration output. Columns:
//   iteration,ideal_size,new_elements,S,E_ind,cost,dS,wall_s,queue_len
std::string history_csv(const std::vector<IterationRecord>& history);
std::string history_jsonl(const std::vector<IterationRecord>& history);

}  // namespace supanova::adaptive
