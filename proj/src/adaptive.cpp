#include "supanova/adaptive.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace supanova::adaptive {

using nlohmann::json;

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::QueueExhausted:
      return "queue-exhausted";
    case StopReason::CostBudget:
      return "cost-budget";
    case StopReason::ErrorThreshold:
      return "error-threshold";
    case StopReason::MaxIterations:
      return "max-iterations";
    case StopReason::WallClock:
      return "wall-clock";
  }
  return "unknown";
}

double queue_key(double contribution, double cost) {
  double benefit = std::abs(contribution);
  if (benefit == 0.0) return 0.0;
  if (cost <= 0.0) return std::numeric_limits<double>::infinity();
  return benefit / cost;
}

namespace {

struct QueueEntry {
  double key = 0.0;
  double cost = 0.0;
  GridElement element;
  std::string canonical;

  // Descending key; ties by ascending cost, then canonical key order.
  bool operator<(const QueueEntry& other) const {
    if (key != other.key) return key < other.key;            // max-heap on key
    if (cost != other.cost) return cost > other.cost;        // prefer cheaper
    return canonical > other.canonical;                      // stable canonical order
  }
};

class Engine {
 public:
  Engine(const PosetGrid& grid, const EvaluateFn& evaluate, const CostFn& cost,
         const AdaptiveConfig& config, const IterationObserver& observer)
      : grid_(grid), evaluate_(evaluate), cost_fn_(cost), config_(config),
        observer_(observer), start_(std::chrono::steady_clock::now()) {
    if (config_.strategy == Strategy::Threshold &&
        !(config_.threshold_alpha >= 0.0 && config_.threshold_alpha <= 1.0)) {
      throw std::invalid_argument("threshold factor must lie in [0, 1]");
    }
    if (config_.concurrency < 1) {
      throw std::invalid_argument("evaluation concurrency must be >= 1");
    }
  }

  AdaptiveState run() {
    std::int64_t iteration = -1;
    for (;;) {
      ++iteration;
      std::vector<GridElement> fresh;
      if (iteration == 0) {
        fresh.push_back(grid_.least());
      } else {
        fresh = select_for_expansion();
      }
      if (iteration > 0 && fresh.empty()) {
        // Either the queue drained, or every remaining member is permanently
        // blocked behind an excluded element; no further progress is possible.
        state_.stop_reason = StopReason::QueueExhausted;
        break;
      }

      ingest(fresh);
      record_iteration(iteration, fresh.size());

      if (queue_.empty()) {
        state_.stop_reason = StopReason::QueueExhausted;
        break;
      }
      if (config_.cost_budget && state_.history.back().cost >= *config_.cost_budget) {
        state_.stop_reason = StopReason::CostBudget;
        break;
      }
      if (config_.error_threshold && iteration >= 1 &&
          std::abs(state_.history.back().error_indicator) <= *config_.error_threshold) {
        state_.stop_reason = StopReason::ErrorThreshold;
        break;
      }
      if (config_.max_iterations &&
          static_cast<std::int64_t>(state_.history.size()) >= *config_.max_iterations) {
        state_.stop_reason = StopReason::MaxIterations;
        break;
      }
      if (config_.wall_clock_limit_s && elapsed() >= *config_.wall_clock_limit_s) {
        state_.stop_reason = StopReason::WallClock;
        break;
      }
    }
    return std::move(state_);
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool excluded(const GridElement& p) const {
    return std::find(state_.failed.begin(), state_.failed.end(), p) != state_.failed.end();
  }

  std::vector<GridElement> proposable_covers(const GridElement& p) const {
    std::vector<GridElement> out;
    for (const auto& r : admissible_covers(grid_, state_.ideal, p)) {
      if (!excluded(r)) out.push_back(r);
    }
    return out;
  }

  // True when every cover of p already lies in the ideal (nothing left to
  // propose, now or later).
  bool fully_expanded(const GridElement& p) const {
    for (const auto& r : grid_.covers_up(p)) {
      if (!state_.ideal.contains(r) && !excluded(r)) return false;
    }
    return true;
  }

  std::vector<GridElement> select_for_expansion() {
    std::vector<QueueEntry> requeue;
    std::set<GridElement> selected;
    std::vector<GridElement> fresh;
    std::optional<double> best_key;

    // Working ideal view: admissibility is re-tested against the ideal plus
    // the elements already chosen this round, so one expansion can unlock the
    // next within a single iteration.
    auto admissible_now = [&](const GridElement& r) {
      for (const auto& q : grid_.covers_down(r)) {
        if (!state_.ideal.contains(q) && !selected.count(q)) return false;
      }
      return true;
    };

    std::size_t snapshot = queue_.size();  // nothing is pushed mid-scan
    std::size_t popped = 0;
    while (!queue_.empty() && popped < snapshot) {
      const QueueEntry top = queue_.top();

      bool expandable = false;
      std::vector<GridElement> proposals;
      for (const auto& r : grid_.covers_up(top.element)) {
        if (state_.ideal.contains(r) || selected.count(r) || excluded(r)) continue;
        if (admissible_now(r)) {
          expandable = true;
          proposals.push_back(r);
        }
      }

      bool expand_this = false;
      if (expandable) {
        if (config_.strategy == Strategy::Best) {
          expand_this = !best_key.has_value();
        } else if (config_.strategy == Strategy::All) {
          expand_this = true;
        } else {
          if (!best_key) {
            expand_this = true;
          } else if (config_.threshold_alpha == 0.0) {
            expand_this = true;
          } else {
            expand_this = top.key >= config_.threshold_alpha * *best_key;
          }
        }
        if (expand_this && !best_key) best_key = top.key;
      }

      if (expandable && !expand_this && config_.strategy == Strategy::Threshold &&
          config_.threshold_alpha > 0.0) {
        // Keys below the threshold band only get worse further down the heap.
        break;
      }

      queue_.pop();
      ++popped;

      if (expand_this) {
        for (auto& r : proposals) {
          selected.insert(r);
          fresh.push_back(std::move(r));
        }
      }

      bool retired = true;
      for (const auto& r : grid_.covers_up(top.element)) {
        if (!state_.ideal.contains(r) && !selected.count(r) && !excluded(r)) {
          retired = false;
          break;
        }
      }
      if (!retired) requeue.push_back(top);

      if (config_.strategy == Strategy::Best && best_key) break;
    }

    for (auto& entry : requeue) queue_.push(std::move(entry));
    std::sort(fresh.begin(), fresh.end());
    return fresh;
  }

  void ingest(std::vector<GridElement> fresh) {
    // Canonical insertion order must be a linear extension of the grid order
    // (structural element order is not one), so that within-batch cover
    // chains insert bottom-up.
    std::sort(fresh.begin(), fresh.end(), [&](const GridElement& a, const GridElement& b) {
      auto ra = grid_.linear_extension_rank(a);
      auto rb = grid_.linear_extension_rank(b);
      if (ra != rb) return ra < rb;
      return grid_key(a) < grid_key(b);
    });

    // Evaluate the batch, possibly concurrently; results are merged in
    // canonical element order below regardless of completion order.
    std::vector<std::optional<EvaluationRecord>> results(fresh.size());
    std::vector<std::exception_ptr> errors(fresh.size());
    if (config_.concurrency <= 1 || fresh.size() <= 1) {
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        try {
          results[i] = evaluate_(fresh[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::size_t workers = std::min<std::size_t>(config_.concurrency, fresh.size());
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= fresh.size()) return;
            try {
              results[i] = evaluate_(fresh[i]);
            } catch (...) {
              errors[i] = std::current_exception();
            }
          }
        });
      }
      for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const GridElement& p = fresh[i];
      if (errors[i]) {
        if (config_.on_failure == FailurePolicy::Abort) {
          try {
            std::rethrow_exception(errors[i]);
          } catch (const std::exception& e) {
            throw EvaluationError("evaluation of " + supanova::to_string(p) +
                                  " failed: " + e.what());
          }
        }
        state_.failed.push_back(p);
        continue;
      }

      // Insertion is admissible by construction unless an earlier element of
      // this batch failed; skip dependents of failures.
      bool dependencies_ok = true;
      for (const auto& q : grid_.covers_down(p)) {
        if (!state_.ideal.contains(q)) {
          dependencies_ok = false;
          break;
        }
      }
      if (!dependencies_ok) {
        state_.failed.push_back(p);
        continue;
      }

      std::vector<GridElement> displaced = state_.ideal.insert(grid_, p);
      state_.evaluations.emplace(p, *results[i]);

      SparseIntTensor m = moebius_tensor(grid_, p);
      state_.combination.add_scaled(m, 1);
      state_.indicator.add_scaled(m, 1);
      for (const auto& q : displaced) {
        state_.indicator.add_scaled(moebius_tensor(grid_, q), -1);
      }

      double contribution = reduce_product(m, [&](const GridElement& q) {
        auto it = state_.evaluations.find(q);
        return it == state_.evaluations.end() ? 0.0 : it->second.value;
      });
      double cost = cost_fn_(p);
      if (!fully_expanded(p)) {
        queue_.push(QueueEntry{queue_key(contribution, cost), cost, p, grid_key(p)});
      }
      cumulative_cost_.add(cost);
    }

    // Drop queue members that this batch finished off (their covers all
    // landed in the ideal); they would otherwise churn forever as
    // non-expandable pops.
    prune_retired();
  }

  void prune_retired() {
    std::vector<QueueEntry> keep;
    keep.reserve(queue_.size());
    while (!queue_.empty()) {
      if (!fully_expanded(queue_.top().element)) keep.push_back(queue_.top());
      queue_.pop();
    }
    for (auto& entry : keep) queue_.push(std::move(entry));
  }

  void record_iteration(std::int64_t iteration, std::size_t new_count) {
    IterationRecord rec;
    rec.iteration = iteration;
    rec.ideal_size = state_.ideal.size();
    rec.new_elements = new_count;
    rec.value = reduce_product(state_.combination, [&](const GridElement& q) {
      auto it = state_.evaluations.find(q);
      return it == state_.evaluations.end() ? 0.0 : it->second.value;
    });
    rec.error_indicator = reduce_product(state_.indicator, [&](const GridElement& q) {
      auto it = state_.evaluations.find(q);
      return it == state_.evaluations.end() ? 0.0 : it->second.value;
    });
    rec.cost = cumulative_cost_.value();
    KahanAccumulator variance;
    for (const auto& [q, coeff] : state_.combination) {
      auto it = state_.evaluations.find(q);
      if (it == state_.evaluations.end()) continue;
      double c = static_cast<double>(coeff);
      variance.add(c * c * it->second.uncertainty * it->second.uncertainty);
    }
    rec.uncertainty = std::sqrt(variance.value());
    rec.wall_s = elapsed();
    rec.queue_size = queue_.size();
    state_.history.push_back(rec);
    if (observer_) observer_(state_, rec);
  }

  const PosetGrid& grid_;
  const EvaluateFn& evaluate_;
  const CostFn& cost_fn_;
  const AdaptiveConfig& config_;
  const IterationObserver& observer_;
  std::chrono::steady_clock::time_point start_;

  AdaptiveState state_;
  std::priority_queue<QueueEntry> queue_;
  KahanAccumulator cumulative_cost_;
};

}  // namespace

AdaptiveState run_adaptive(const PosetGrid& grid, const EvaluateFn& evaluate,
                           const CostFn& cost, const AdaptiveConfig& config,
                           const IterationObserver& observer) {
  Engine engine(grid, evaluate, cost, config, observer);
  return engine.run();
}

std::string history_csv(const std::vector<IterationRecord>& history) {
  std::ostringstream os;
  os << "iteration,ideal_size,new_elements,S,E_ind,cost,dS,wall_s,queue_len\n";
  os.precision(17);
  for (const auto& r : history) {
    os << r.iteration << ',' << r.ideal_size << ',' << r.new_elements << ',' << r.value
       << ',' << r.error_indicator << ',' << r.cost << ',' << r.uncertainty << ','
       << r.wall_s << ',' << r.queue_size << '\n';
  }
  return os.str();
}

std::string history_jsonl(const std::vector<IterationRecord>& history) {
  std::ostringstream os;
  for (const auto& r : history) {
    json j;
    j["iteration"] = r.iteration;
    j["ideal_size"] = r.ideal_size;
    j["new_elements"] = r.new_elements;
    j["S"] = r.value;
    j["E_ind"] = r.error_indicator;
    j["cost"] = r.cost;
    j["dS"] = r.uncertainty;
    j["wall_s"] = r.wall_s;
    j["queue_len"] = r.queue_size;
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace supanova::adaptive
