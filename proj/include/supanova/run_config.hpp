#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "supanova/adaptive.hpp"
#include "supanova/cost.hpp"
#include "supanova/fragment.hpp"
#include "supanova/geometry.hpp"
#include "supanova/graph.hpp"
#include "supanova/potentials.hpp"

namespace supanova {

// Declarative description of an adaptive run: structure ingestion, graph and
// fragmentation modes, the grid axes, the evaluator, the cost model, and
// output paths. Parsed from a JSON document; CLI flags override file values.
struct RunConfig {
  std::string structure_path;

  enum class GraphMode { Bonds, Threshold };
  GraphMode graph_mode = GraphMode::Bonds;
  double r_cut = 2.5;

  enum class FragmentationMode { Heuristic, Singleton, File };
  FragmentationMode fragmentation_mode = FragmentationMode::Heuristic;
  std::string fragmentation_path;

  enum class SubsetAxisKind { Boolean, Connected, Convex, Simplex };
  SubsetAxisKind subset_axis = SubsetAxisKind::Convex;
  int simplex_rank = 1;
  // Axis position (1-based) to method/basis hierarchy index.
  std::vector<int> method_indices = {1};
  std::vector<int> basis_indices = {1};

  enum class EvaluatorKind { Synthetic, External };
  EvaluatorKind evaluator = EvaluatorKind::Synthetic;
  SyntheticPotential::Params synthetic;  // sites is filled from the fragmentation
  ExternalBackendConfig external;
  std::string ledger_path;

  CostParams cost_params;
  std::string ao_table_path;
  double screening_radius = 10.0;
  std::string radii_path;

  adaptive::AdaptiveConfig engine;

  std::string csv_path;
  std::string jsonl_path;
  std::string summary_path;

  std::uint64_t seed = 1;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
};

// Everything assembled and ready to run.
struct RunContext {
  Geometry geometry;
  Fragmentation fragmentation;
  std::shared_ptr<InteractionGraph> quotient;
  PosetGrid grid;
  adaptive::EvaluateFn evaluate;
  adaptive::CostFn cost;
  std::optional<double> synthetic_target;
  // Owners for the callables above.
  std::shared_ptr<SyntheticPotential> synthetic;
  std::shared_ptr<ExternalEvaluator> external;
  std::shared_ptr<EvaluationLedger> ledger;
  std::shared_ptr<AoTable> ao_table;
};

RunContext build_run_context(const RunConfig& config);

struct RunOutput {
  adaptive::AdaptiveState state;
  std::optional<double> synthetic_target;
};

// Builds the context, runs the engine, and writes the configured CSV,
// JSON-lines, and summary outputs.
RunOutput run_adaptive_from_config(const RunConfig& config,
                                   const adaptive::IterationObserver& observer = {});

std::string summary_json(const RunConfig& config, const RunOutput& output);

}  // namespace supanova
