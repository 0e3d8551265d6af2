// Command-line frontend: structure ingestion, consistency diagnostics,
// adaptive runs, coefficient and Moebius queries, the cost model, and the
// property-check battery.
//
// Exit codes: 0 success, 1 usage, 2 input error, 3 evaluator failure,
// 4 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "supanova/adaptive.hpp"
#include "supanova/cost.hpp"
#include "supanova/expansions.hpp"
#include "supanova/fragment.hpp"
#include "supanova/geometry.hpp"
#include "supanova/graph.hpp"
#include "supanova/ideal.hpp"
#include "supanova/poset.hpp"
#include "supanova/potentials.hpp"
#include "supanova/run_config.hpp"
#include "supanova/verify.hpp"

using nlohmann::json;
using namespace supanova;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitEvaluator = 3;
constexpr int kExitVerification = 4;

json set_to_json(const VertexSet& u) {
  json out = json::array();
  for (Vertex v : u) out.push_back(v + 1);  // 1-based in all user-facing output
  return out;
}

// "{}", "2", "1,3,4", or "1 3 4" (1-based) into a canonical 0-based set.
VertexSet parse_set_arg(const std::string& text) {
  VertexSet out;
  std::string cleaned;
  for (char c : text) {
    if (c == '{' || c == '}') continue;
    cleaned.push_back(c == ',' ? ' ' : c);
  }
  std::istringstream in(cleaned);
  long long v = 0;
  while (in >> v) {
    if (v < 1) throw std::invalid_argument("set elements are 1-based: " + text);
    out.push_back(static_cast<Vertex>(v - 1));
  }
  return canonical_set(std::move(out));
}

struct AxisSpec {
  PosetAxis axis;
  bool subset_valued;
};

// "chain", "chain:N", "boolean:N", "conn:EDGEFILE", "convex:EDGEFILE",
// "simplex:R:EDGEFILE".
AxisSpec parse_axis_arg(const std::string& text) {
  auto next_field = [](const std::string& s, std::size_t& pos) {
    std::size_t colon = s.find(':', pos);
    std::string field =
        colon == std::string::npos ? s.substr(pos) : s.substr(pos, colon - pos);
    pos = colon == std::string::npos ? s.size() : colon + 1;
    return field;
  };
  std::size_t pos = 0;
  std::string kind = next_field(text, pos);
  if (kind == "chain") {
    if (pos >= text.size()) return {PosetAxis::chain_nat(), false};
    return {PosetAxis::chain_bounded(std::stoull(text.substr(pos))), false};
  }
  if (kind == "boolean") {
    return {PosetAxis::boolean_algebra(static_cast<Vertex>(std::stoul(text.substr(pos)))),
            true};
  }
  if (kind == "conn" || kind == "convex") {
    auto graph = std::make_shared<InteractionGraph>(
        InteractionGraph::from_edge_list_file(text.substr(pos)));
    return {kind == "conn" ? connected_subsets_axis(graph) : convex_subsets_axis(graph),
            true};
  }
  if (kind == "simplex") {
    std::string rank = next_field(text, pos);
    auto graph = std::make_shared<InteractionGraph>(
        InteractionGraph::from_edge_list_file(text.substr(pos)));
    return {simplex_axis(graph, std::stoi(rank)), true};
  }
  throw std::invalid_argument("unknown axis spec: " + text);
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write: " + path);
  out << content;
}

int cmd_fragment(const std::string& structure, const std::string& mode,
                 const std::string& fragments_in, const std::string& output,
                 const std::string& quotient_output) {
  Geometry geometry = load_geometry(structure);
  Fragmentation fragmentation;
  if (mode == "heuristic") {
    fragmentation = heuristic_fragment(geometry);
  } else if (mode == "singleton") {
    fragmentation = singleton_fragmentation(geometry.size());
  } else if (mode == "file") {
    fragmentation = load_fragmentation(fragments_in, geometry.size());
  } else {
    throw std::invalid_argument("unknown fragmentation mode: " + mode);
  }

  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw std::invalid_argument("cannot write: " + output);
    out << fragmentation_to_text(fragmentation);
  }
  if (!quotient_output.empty()) {
    InteractionGraph quotient = quotient_graph(bond_graph(geometry), fragmentation);
    std::ofstream out(quotient_output);
    if (!out) throw std::invalid_argument("cannot write: " + quotient_output);
    out << quotient.vertex_count() << "\n";
    for (auto [i, j] : quotient.edges()) out << i + 1 << ' ' << j + 1 << "\n";
  }

  json summary;
  summary["atoms"] = geometry.size();
  summary["fragments"] = fragmentation.size();
  json sizes = json::array();
  for (const auto& f : fragmentation) sizes.push_back(f.size());
  summary["fragment_sizes"] = sizes;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_check_consistency(const std::string& graph_path, const std::string& structure,
                          double r_cut, std::size_t exhaustive_limit, bool text) {
  std::optional<InteractionGraph> graph;
  if (!graph_path.empty()) {
    graph = InteractionGraph::from_edge_list_file(graph_path);
  } else if (!structure.empty()) {
    Geometry geometry = load_geometry(structure);
    graph = r_cut > 0 ? build_thresholded_graph(geometry, r_cut) : bond_graph(geometry);
  } else {
    throw std::invalid_argument("supply --graph or --structure");
  }

  ConnConsistencyReport report = diagnose_conn_consistency(*graph, exhaustive_limit);

  json j;
  j["vertices"] = graph->vertex_count();
  j["edges"] = graph->edge_count();
  j["conn_consistent"] = report.meet_closed;
  json cycles = json::array();
  for (const auto& c : report.chordless_cycles) cycles.push_back(set_to_json(c));
  j["chordless_cycles"] = cycles;
  json chords = json::array();
  for (const auto& c : report.chorded_four_cycles) chords.push_back(set_to_json(c));
  j["chorded_four_cycles"] = chords;
  if (report.exhaustive_meet_closed) {
    j["exhaustive_meet_closed"] = *report.exhaustive_meet_closed;
  }
  if (report.witness) {
    j["witness"] = {set_to_json(report.witness->first), set_to_json(report.witness->second)};
    j["witness_intersection"] =
        set_to_json(set_intersection(report.witness->first, report.witness->second));
  }

  // The convexity family is intersection-closed whenever queryable; verify
  // exhaustively on small graphs.
  if (graph->vertex_count() <= exhaustive_limit) {
    ShortestPathOracle oracle(*graph);
    auto family = enumerate_convex_subsets(*graph, oracle, graph->vertex_count(),
                                           exhaustive_limit);
    auto verdict = check_meet_subsemilattice(family);
    j["convex_consistent"] = verdict.meet_closed;
    j["convex_family_size"] = family.size();
  }

  if (text) {
    std::cout << "graph: " << graph->vertex_count() << " vertices, "
              << graph->edge_count() << " edges\n";
    std::cout << "connected-subset family: "
              << (report.meet_closed ? "closed under intersection"
                                     : "NOT closed under intersection")
              << "\n";
    for (const auto& c : report.chordless_cycles) {
      std::cout << "  chordless cycle: " << set_to_string(c) << "\n";
    }
    for (const auto& c : report.chorded_four_cycles) {
      std::cout << "  four-cycle with one chord: " << set_to_string(c) << "\n";
    }
    if (report.witness) {
      std::cout << "  failing pair: " << set_to_string(report.witness->first) << " and "
                << set_to_string(report.witness->second) << "\n";
    }
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_moebius(const std::string& axis_arg, const std::string& from,
                const std::string& to) {
  AxisSpec spec = parse_axis_arg(axis_arg);
  AxisElement s = spec.subset_valued ? AxisElement::subset(parse_set_arg(from))
                                     : AxisElement::index(std::stoull(from));
  AxisElement t = spec.subset_valued ? AxisElement::subset(parse_set_arg(to))
                                     : AxisElement::index(std::stoull(to));
  json j;
  j["axis"] = spec.axis.name();
  j["from"] = s.to_string();
  j["to"] = t.to_string();
  j["moebius"] = spec.axis.moebius(s, t);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_coeffs(const std::string& axis_arg, const std::string& generators_path,
               bool check_top_down) {
  AxisSpec spec = parse_axis_arg(axis_arg);
  PosetGrid grid({spec.axis});

  std::ifstream in(generators_path);
  if (!in) throw std::invalid_argument("cannot open generators file: " + generators_path);
  std::vector<GridElement> generators;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (spec.subset_valued) {
      generators.push_back({AxisElement::subset(parse_set_arg(line))});
    } else {
      generators.push_back({AxisElement::index(std::stoull(line))});
    }
  }
  if (generators.empty()) throw std::invalid_argument("no generators given");

  OrderIdeal ideal = OrderIdeal::down_closure(grid, generators);
  SparseIntTensor coeffs = combination_coefficients(grid, ideal);

  json j;
  j["axis"] = spec.axis.name();
  j["ideal_size"] = ideal.size();
  json entries = json::array();
  for (const auto& [p, value] : coeffs) {
    json entry;
    if (spec.subset_valued) {
      entry["set"] = set_to_json(p[0].subset());
    } else {
      entry["index"] = p[0].index();
    }
    entry["coefficient"] = value;
    entries.push_back(entry);
  }
  j["coefficients"] = entries;
  if (check_top_down) j["top_down_identity"] = top_down_coefficient_check(grid, ideal);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_cost(int method, const CostParams& params, const SystemSizes& sizes) {
  json j;
  j["method_index"] = method;
  j["method"] = method_for_index(method).label;
  j["n_hf_iter"] = params.n_hf_iter;
  j["n_cc_iter"] = params.n_cc_iter;
  j["f_eri"] = params.f_eri;
  j["sizes"] = {{"n_ao", sizes.n_ao},
                {"n_occ", sizes.n_occ},
                {"n_corr", sizes.n_corr},
                {"n_virt", sizes.n_virt},
                {"n_eri", sizes.n_eri}};
  j["cost"] = cost_of_spec(params, method, sizes);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_adapt(const RunConfig& config, bool progress) {
  adaptive::IterationObserver observer;
  if (progress) {
    observer = [](const adaptive::AdaptiveState&, const adaptive::IterationRecord& rec) {
      std::fprintf(stderr, "iteration %lld: |I|=%zu S=%.12g E=%.3g cost=%.3g queue=%zu\n",
                   static_cast<long long>(rec.iteration), rec.ideal_size, rec.value,
                   rec.error_indicator, rec.cost, rec.queue_size);
    };
  }
  RunOutput output = run_adaptive_from_config(config, observer);
  std::cout << summary_json(config, output);
  return kExitOk;
}

int cmd_verify() {
  auto results = verify::run_acceptance();
  for (const auto& r : results) {
    std::printf("[%s] %-4s %-55s (%.2fs) %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                r.name.c_str(), r.seconds, r.detail.c_str());
  }
  bool ok = verify::all_passed(results);
  std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poset-grid decomposition toolkit: adaptive truncation of "
               "many-body and multilevel expansions over interaction graphs"};
  app.require_subcommand(1);

  // fragment
  auto* fragment = app.add_subcommand("fragment", "Fragment a structure and emit the "
                                                  "fragment list and quotient graph");
  std::string structure, frag_mode = "heuristic", frag_in, frag_out, quotient_out;
  fragment->add_option("--structure", structure, "geometry file")->required();
  fragment->add_option("--mode", frag_mode, "heuristic | singleton | file");
  fragment->add_option("--fragments", frag_in, "fragment file for --mode file");
  fragment->add_option("--output", frag_out, "fragment list output path");
  fragment->add_option("--quotient", quotient_out, "quotient-graph edge list output path");

  // check-consistency
  auto* check = app.add_subcommand("check-consistency",
                                   "Diagnose intersection-closure of the "
                                   "connected-subset family of a graph");
  std::string check_graph, check_structure;
  double check_rcut = 0.0;
  std::size_t exhaustive_limit = 12;
  bool check_text = false;
  check->add_option("--graph", check_graph, "edge-list file (1-based)");
  check->add_option("--structure", check_structure, "geometry file");
  check->add_option("--r-cut", check_rcut,
                    "distance threshold (with --structure); 0 uses bonds");
  check->add_option("--exhaustive-limit", exhaustive_limit,
                    "max vertices for the exhaustive cross-check");
  check->add_flag("--text", check_text, "human-readable report instead of JSON");

  // adapt
  auto* adapt = app.add_subcommand("adapt", "Adaptively grow a truncation ideal");
  std::string config_path, csv_path, jsonl_path, summary_path, strategy_arg, structure_arg;
  double alpha = -1.0, cost_budget = 0.0, error_threshold = -1.0, wall_limit = 0.0;
  std::int64_t max_iterations = 0;
  int concurrency = 0;
  bool progress = false;
  adapt->add_option("--config", config_path, "JSON run configuration")->required();
  adapt->add_option("--structure", structure_arg, "override the structure path");
  adapt->add_option("--csv", csv_path, "per-iteration CSV output");
  adapt->add_option("--jsonl", jsonl_path, "per-iteration JSON-lines output");
  adapt->add_option("--summary", summary_path, "final summary JSON output");
  adapt->add_option("--strategy", strategy_arg, "best | all | threshold");
  adapt->add_option("--threshold-alpha", alpha, "threshold factor in [0,1]");
  adapt->add_option("--cost-budget", cost_budget, "stop once the cumulative cost passes");
  adapt->add_option("--error-threshold", error_threshold,
                    "stop once |error indicator| drops below");
  adapt->add_option("--max-iterations", max_iterations, "stop after this many iterations");
  adapt->add_option("--wall-clock-limit", wall_limit, "stop after this many seconds");
  adapt->add_option("--concurrency", concurrency, "parallel evaluations per batch");
  adapt->add_flag("--progress", progress, "log per-iteration progress to stderr");

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs",
                                    "Combination coefficients of an ideal given by "
                                    "generators");
  std::string coeffs_axis, generators_path;
  bool top_down = false;
  coeffs->add_option("--axis", coeffs_axis,
                     "chain[:N] | boolean:N | conn:FILE | convex:FILE | simplex:R:FILE")
      ->required();
  coeffs->add_option("--generators", generators_path,
                     "file of generating elements, one per line")
      ->required();
  coeffs->add_flag("--check-top-down", top_down, "also verify the top-down identity");

  // moebius
  auto* moebius_cmd = app.add_subcommand("moebius", "Moebius function value on an axis");
  std::string moebius_axis, from_arg, to_arg;
  moebius_cmd->add_option("--axis", moebius_axis, "axis spec, as for coeffs")->required();
  moebius_cmd->add_option("--from", from_arg, "lower element")->required();
  moebius_cmd->add_option("--to", to_arg, "upper element")->required();

  // cost
  auto* cost_cmd = app.add_subcommand("cost", "Evaluate the abstract cost model");
  int method = 1;
  CostParams cost_params;
  SystemSizes sizes;
  cost_cmd->add_option("--method", method, "method hierarchy index (1=HF, 2=MP2, ...)");
  cost_cmd->add_option("--n-hf-iter", cost_params.n_hf_iter, "SCF iteration factor");
  cost_cmd->add_option("--n-cc-iter", cost_params.n_cc_iter, "amplitude iteration factor");
  cost_cmd->add_option("--f-eri", cost_params.f_eri, "integral weight factor");
  cost_cmd->add_option("--n-ao", sizes.n_ao, "basis functions");
  cost_cmd->add_option("--n-occ", sizes.n_occ, "occupied orbitals");
  cost_cmd->add_option("--n-corr", sizes.n_corr, "correlated orbitals");
  cost_cmd->add_option("--n-virt", sizes.n_virt, "virtual orbitals");
  cost_cmd->add_option("--n-eri", sizes.n_eri, "non-negligible integrals");

  // verify
  app.add_subcommand("verify", "Run the full property-check battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fragment->parsed()) {
      return cmd_fragment(structure, frag_mode, frag_in, frag_out, quotient_out);
    }
    if (check->parsed()) {
      return cmd_check_consistency(check_graph, check_structure, check_rcut,
                                   exhaustive_limit, check_text);
    }
    if (adapt->parsed()) {
      RunConfig config = RunConfig::from_json_file(config_path);
      if (!structure_arg.empty()) config.structure_path = structure_arg;
      if (!csv_path.empty()) config.csv_path = csv_path;
      if (!jsonl_path.empty()) config.jsonl_path = jsonl_path;
      if (!summary_path.empty()) config.summary_path = summary_path;
      if (!strategy_arg.empty()) {
        if (strategy_arg == "best") config.engine.strategy = adaptive::Strategy::Best;
        else if (strategy_arg == "all") config.engine.strategy = adaptive::Strategy::All;
        else if (strategy_arg == "threshold")
          config.engine.strategy = adaptive::Strategy::Threshold;
        else throw std::invalid_argument("unknown strategy: " + strategy_arg);
      }
      if (alpha >= 0) config.engine.threshold_alpha = alpha;
      if (cost_budget > 0) config.engine.cost_budget = cost_budget;
      if (error_threshold >= 0) config.engine.error_threshold = error_threshold;
      if (max_iterations > 0) config.engine.max_iterations = max_iterations;
      if (wall_limit > 0) config.engine.wall_clock_limit_s = wall_limit;
      if (concurrency > 0) config.engine.concurrency = concurrency;
      return cmd_adapt(config, progress);
    }
    if (coeffs->parsed()) return cmd_coeffs(coeffs_axis, generators_path, top_down);
    if (moebius_cmd->parsed()) return cmd_moebius(moebius_axis, from_arg, to_arg);
    if (cost_cmd->parsed()) return cmd_cost(method, cost_params, sizes);
    return cmd_verify();
  } catch (const EvaluationError& e) {
    std::fprintf(stderr, "evaluator failure: %s\n", e.what());
    return kExitEvaluator;
  } catch (const IntegrityError& e) {
    std::fprintf(stderr, "store integrity failure: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
}
