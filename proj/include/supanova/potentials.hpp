#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "supanova/cost.hpp"
#include "supanova/geometry.hpp"
#include "supanova/poset.hpp"

namespace supanova {

// Defaulted when a backend reports no uncertainty of its own, consistent with
// typical iterative solver convergence thresholds (Hartree).
inline constexpr double kDefaultUncertainty = 1e-8;

struct SubproblemSpec {
  VertexSet subset;         // fragment or nuclear indices
  int method_index = 1;     // positive, per the method hierarchy
  int basis_index = 1;      // positive
  std::string geometry_digest;
  std::string linearization = "point-energy";
};

// Canonical identity of a subproblem evaluation (hex SHA-256).
std::string subproblem_key(const SubproblemSpec& spec);

struct EvaluationRecord {
  double value = 0.0;         // Hartree
  double uncertainty = 0.0;   // Hartree, >= 0
  double abstract_cost = 0.0;
  double wall_time_s = 0.0;
  std::string backend;
  // Exact sizes reported by an external backend; these take precedence over
  // the surrogate estimate when costing.
  std::optional<std::int64_t> reported_n_ao;
  std::optional<std::int64_t> reported_n_eri;

  bool operator==(const EvaluationRecord&) const = default;
};

class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Synthetic potentials
// ---------------------------------------------------------------------------

// Deterministic analytic stand-in for an ab initio hierarchy:
//
//   V(u, m, p) = V*(u) * (1 - a_m - b_p) + a_m * b_p * C(u)
//
// where V*(u) stacks seeded one-body, pair, and geometrically damped
// many-body weights, a_m and b_p are level deficiencies vanishing at the top
// indices, and C(u) is a seeded per-subset perturbation field, itself
// many-body damped so that contribution terms keep their geometric decay in
// body order. The top (m_levels, p_levels) cell reproduces V*(u) exactly, so
// a full-grid contribution sum recovers base_potential(full set) exactly.
class SyntheticPotential {
 public:
  struct Params {
    std::uint64_t seed = 1;
    std::size_t sites = 1;
    int m_levels = 1;
    int p_levels = 1;
    double theta = 0.3;          // many-body damping, in (0, 1)
    int max_body_order = 4;      // largest |v| carrying a many-body weight
    double one_body_scale = 1.0;
    double pair_scale = 1.0;
    std::map<std::pair<Vertex, Vertex>, double> pair_table;  // optional override
    double level_a0 = 0.4;       // method-axis deficiency at m = 1
    double level_a_decay = 0.25;
    double level_b0 = 0.4;       // basis-axis deficiency at p = 1
    double level_b_decay = 0.25;
    double uncertainty = 0.0;
    // Cost surrogate wiring.
    std::int64_t ao_per_site = 5;
    std::int64_t shellpairs_per_site = 2;
    std::int64_t electrons_per_site = 2;
  };

  explicit SyntheticPotential(Params params);

  const Params& params() const { return params_; }

  double value(const VertexSet& subset, int m, int p) const;
  // V* for a subset, independent of level indices.
  double base_potential(const VertexSet& subset) const;
  // The designated full-system target: base_potential of all sites.
  double target() const;

  double method_deficiency(int m) const;  // a_m, zero at m_levels
  double basis_deficiency(int p) const;   // b_p, zero at p_levels
  // C(u): seeded, many-body damped coupling between the level axes.
  double subset_perturbation(const VertexSet& subset) const;

  SystemSizes sizes_for(const VertexSet& subset, int basis_index) const;
  double cost_for(const CostParams& cost_params, const VertexSet& subset, int m,
                  int p) const;

  EvaluationRecord evaluate(const CostParams& cost_params, const SubproblemSpec& spec) const;

 private:
  double one_body_weight(Vertex i) const;
  double pair_weight(Vertex i, Vertex j) const;
  double many_body_weight(const VertexSet& v) const;

  Params params_;
  // Per-subset sums are shared across the level cells of one subset; copies
  // share the cache.
  struct Memo {
    std::mutex mutex;
    std::map<VertexSet, std::pair<double, double>> by_subset;  // base, perturbation
  };
  std::shared_ptr<Memo> memo_;
};

// ---------------------------------------------------------------------------
// Evaluation ledger
// ---------------------------------------------------------------------------

// Append-only persistent cache keyed by subproblem identity. Each record line
// carries a CRC32 trailer; any mismatch, truncation, or malformed line makes
// loading refuse with an IntegrityError.
class EvaluationLedger {
 public:
  explicit EvaluationLedger(std::string path);

  std::optional<EvaluationRecord> get(const std::string& key) const;
  // First write wins; re-putting an existing key is a no-op.
  void put(const std::string& key, const EvaluationRecord& record);
  std::size_t size() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mutex_;
  std::map<std::string, EvaluationRecord> entries_;
};

// ---------------------------------------------------------------------------
// External evaluator protocol
// ---------------------------------------------------------------------------

struct ExternalBackendConfig {
  std::vector<std::string> command;  // argv; command[0] is the executable
  double timeout_s = 60.0;
  int max_in_flight = 4;
  int charge = 0;
  int spin = 0;
};

// Speaks newline-delimited JSON over a worker child process: one request
// object per line on its stdin, responses matched by id from its stdout in
// any order. The worker is spawned lazily and reaped on destruction.
class ExternalEvaluator {
 public:
  explicit ExternalEvaluator(ExternalBackendConfig config);
  ~ExternalEvaluator();

  ExternalEvaluator(const ExternalEvaluator&) = delete;
  ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

  // real_atoms are the subsystem atoms; link_positions the hydrogen caps.
  EvaluationRecord evaluate(const SubproblemSpec& spec, const std::vector<Atom>& real_atoms,
                            const std::vector<std::array<double, 3>>& link_positions);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace supanova
