#include "supanova/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace supanova {

using nlohmann::json;

namespace {

RunConfig::GraphMode parse_graph_mode(const std::string& s) {
  if (s == "bonds") return RunConfig::GraphMode::Bonds;
  if (s == "threshold") return RunConfig::GraphMode::Threshold;
  throw std::invalid_argument("unknown graph mode: " + s);
}

RunConfig::FragmentationMode parse_fragmentation_mode(const std::string& s) {
  if (s == "heuristic") return RunConfig::FragmentationMode::Heuristic;
  if (s == "singleton") return RunConfig::FragmentationMode::Singleton;
  if (s == "file") return RunConfig::FragmentationMode::File;
  throw std::invalid_argument("unknown fragmentation mode: " + s);
}

RunConfig::SubsetAxisKind parse_subset_axis(const std::string& s) {
  if (s == "boolean") return RunConfig::SubsetAxisKind::Boolean;
  if (s == "conn") return RunConfig::SubsetAxisKind::Connected;
  if (s == "convex") return RunConfig::SubsetAxisKind::Convex;
  if (s == "simplex") return RunConfig::SubsetAxisKind::Simplex;
  throw std::invalid_argument("unknown subset axis kind: " + s);
}

adaptive::Strategy parse_strategy(const std::string& s) {
  if (s == "best") return adaptive::Strategy::Best;
  if (s == "all") return adaptive::Strategy::All;
  if (s == "threshold") return adaptive::Strategy::Threshold;
  throw std::invalid_argument("unknown selection strategy: " + s);
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  RunConfig config;
  config.structure_path = j.value("structure", "");
  config.seed = j.value("seed", std::uint64_t{1});

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    config.graph_mode = parse_graph_mode(g.value("mode", "bonds"));
    config.r_cut = g.value("r_cut", 2.5);
  }
  if (j.contains("fragmentation")) {
    const json& f = j.at("fragmentation");
    config.fragmentation_mode = parse_fragmentation_mode(f.value("mode", "heuristic"));
    config.fragmentation_path = f.value("path", "");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    config.subset_axis = parse_subset_axis(g.value("subset_axis", "convex"));
    config.simplex_rank = g.value("simplex_rank", 1);
    if (g.contains("method_indices")) {
      config.method_indices = g.at("method_indices").get<std::vector<int>>();
    }
    if (g.contains("basis_indices")) {
      config.basis_indices = g.at("basis_indices").get<std::vector<int>>();
    }
    if (config.method_indices.empty() || config.basis_indices.empty()) {
      throw std::invalid_argument("axis index lists must be nonempty");
    }
  }
  if (j.contains("evaluator")) {
    const json& e = j.at("evaluator");
    std::string kind = e.value("kind", "synthetic");
    if (kind == "synthetic") {
      config.evaluator = EvaluatorKind::Synthetic;
      config.synthetic.seed = e.value("seed", config.seed);
      config.synthetic.theta = e.value("theta", config.synthetic.theta);
      config.synthetic.max_body_order =
          e.value("max_body_order", config.synthetic.max_body_order);
      config.synthetic.one_body_scale =
          e.value("one_body_scale", config.synthetic.one_body_scale);
      config.synthetic.pair_scale = e.value("pair_scale", config.synthetic.pair_scale);
      config.synthetic.level_a0 = e.value("level_a0", config.synthetic.level_a0);
      config.synthetic.level_a_decay =
          e.value("level_a_decay", config.synthetic.level_a_decay);
      config.synthetic.level_b0 = e.value("level_b0", config.synthetic.level_b0);
      config.synthetic.level_b_decay =
          e.value("level_b_decay", config.synthetic.level_b_decay);
      config.synthetic.uncertainty = e.value("uncertainty", config.synthetic.uncertainty);
      config.synthetic.ao_per_site = e.value("ao_per_site", config.synthetic.ao_per_site);
      config.synthetic.shellpairs_per_site =
          e.value("shellpairs_per_site", config.synthetic.shellpairs_per_site);
      config.synthetic.electrons_per_site =
          e.value("electrons_per_site", config.synthetic.electrons_per_site);
    } else if (kind == "external") {
      config.evaluator = EvaluatorKind::External;
      config.external.command = e.at("command").get<std::vector<std::string>>();
      config.external.timeout_s = e.value("timeout_s", config.external.timeout_s);
      config.external.max_in_flight = e.value("concurrency", config.external.max_in_flight);
      config.external.charge = e.value("charge", 0);
      config.external.spin = e.value("spin", 0);
      config.ledger_path = e.value("ledger", "");
    } else {
      throw std::invalid_argument("unknown evaluator kind: " + kind);
    }
  }
  if (j.contains("cost")) {
    const json& cj = j.at("cost");
    config.cost_params.n_hf_iter = cj.value("n_hf_iter", config.cost_params.n_hf_iter);
    config.cost_params.n_cc_iter = cj.value("n_cc_iter", config.cost_params.n_cc_iter);
    config.cost_params.f_eri = cj.value("f_eri", config.cost_params.f_eri);
    config.ao_table_path = cj.value("ao_table", "");
    config.screening_radius = cj.value("screening_radius", config.screening_radius);
    config.radii_path = cj.value("radii", "");
  }
  if (j.contains("adaptive")) {
    const json& a = j.at("adaptive");
    config.engine.strategy = parse_strategy(a.value("strategy", "all"));
    config.engine.threshold_alpha = a.value("threshold_alpha", 0.0);
    if (a.contains("cost_budget")) config.engine.cost_budget = a.at("cost_budget").get<double>();
    if (a.contains("error_threshold")) {
      config.engine.error_threshold = a.at("error_threshold").get<double>();
    }
    if (a.contains("max_iterations")) {
      config.engine.max_iterations = a.at("max_iterations").get<std::int64_t>();
    }
    if (a.contains("wall_clock_limit_s")) {
      config.engine.wall_clock_limit_s = a.at("wall_clock_limit_s").get<double>();
    }
    config.engine.concurrency = a.value("concurrency", 1);
    std::string policy = a.value("on_failure", "abort");
    if (policy == "abort") {
      config.engine.on_failure = adaptive::FailurePolicy::Abort;
    } else if (policy == "exclude") {
      config.engine.on_failure = adaptive::FailurePolicy::Exclude;
    } else {
      throw std::invalid_argument("unknown failure policy: " + policy);
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    config.csv_path = o.value("csv", "");
    config.jsonl_path = o.value("jsonl", "");
    config.summary_path = o.value("summary", "");
  }
  return config;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

RunContext build_run_context(const RunConfig& config) {
  if (config.structure_path.empty()) {
    throw std::invalid_argument("a structure path is required");
  }
  Geometry geometry = load_geometry(config.structure_path);

  Fragmentation fragmentation;
  switch (config.fragmentation_mode) {
    case RunConfig::FragmentationMode::Heuristic:
      fragmentation = heuristic_fragment(geometry);
      break;
    case RunConfig::FragmentationMode::Singleton:
      fragmentation = singleton_fragmentation(geometry.size());
      break;
    case RunConfig::FragmentationMode::File:
      fragmentation = load_fragmentation(config.fragmentation_path, geometry.size());
      break;
  }

  InteractionGraph atom_graph = config.graph_mode == RunConfig::GraphMode::Bonds
                                    ? bond_graph(geometry)
                                    : build_thresholded_graph(geometry, config.r_cut);
  auto quotient =
      std::make_shared<InteractionGraph>(quotient_graph(atom_graph, fragmentation));

  std::size_t sites = fragmentation.size();
  PosetAxis subset_axis = [&] {
    switch (config.subset_axis) {
      case RunConfig::SubsetAxisKind::Boolean:
        return PosetAxis::boolean_algebra(static_cast<Vertex>(sites));
      case RunConfig::SubsetAxisKind::Connected:
        return connected_subsets_axis(quotient);
      case RunConfig::SubsetAxisKind::Convex:
        return convex_subsets_axis(quotient);
      case RunConfig::SubsetAxisKind::Simplex:
        return simplex_axis(quotient, config.simplex_rank);
    }
    throw std::logic_error("unreachable axis kind");
  }();

  RunContext ctx{std::move(geometry),
                 std::move(fragmentation),
                 quotient,
                 PosetGrid({subset_axis,
                            PosetAxis::chain_bounded(config.method_indices.size()),
                            PosetAxis::chain_bounded(config.basis_indices.size())}),
                 {},
                 {},
                 {},
                 {},
                 {},
                 {},
                 {}};

  auto method_map = config.method_indices;
  auto basis_map = config.basis_indices;
  auto mapped = [method_map, basis_map](const GridElement& p) {
    int m = method_map.at(p[1].index() - 1);
    int b = basis_map.at(p[2].index() - 1);
    return std::pair<int, int>{m, b};
  };

  std::string digest = geometry_digest(ctx.geometry);
  CostParams cost_params = config.cost_params;

  if (config.evaluator == RunConfig::EvaluatorKind::Synthetic) {
    SyntheticPotential::Params params = config.synthetic;
    params.sites = sites;
    int max_m = *std::max_element(method_map.begin(), method_map.end());
    int max_b = *std::max_element(basis_map.begin(), basis_map.end());
    params.m_levels = std::max(params.m_levels, max_m);
    params.p_levels = std::max(params.p_levels, max_b);
    ctx.synthetic = std::make_shared<SyntheticPotential>(params);
    ctx.synthetic_target = ctx.synthetic->target();

    auto synthetic = ctx.synthetic;
    ctx.evaluate = [synthetic, cost_params, mapped, digest](const GridElement& p) {
      auto [m, b] = mapped(p);
      SubproblemSpec spec;
      spec.subset = p[0].subset();
      spec.method_index = m;
      spec.basis_index = b;
      spec.geometry_digest = digest;
      return synthetic->evaluate(cost_params, spec);
    };
    ctx.cost = [synthetic, cost_params, mapped](const GridElement& p) {
      auto [m, b] = mapped(p);
      return synthetic->cost_for(cost_params, p[0].subset(), m, b);
    };
    return ctx;
  }

  // External backend: subsystems are cut from the geometry, capped, costed
  // by the surrogate (overridden by backend-reported sizes once cached), and
  // cached in the ledger when configured.
  ctx.external = std::make_shared<ExternalEvaluator>(config.external);
  if (!config.ledger_path.empty()) {
    ctx.ledger = std::make_shared<EvaluationLedger>(config.ledger_path);
  }
  ctx.ao_table = std::make_shared<AoTable>(config.ao_table_path.empty()
                                               ? AoTable::bundled_default()
                                               : AoTable::load(config.ao_table_path));
  RadiiTable radii =
      config.radii_path.empty() ? default_radii() : load_radii(config.radii_path);

  auto shared_geometry = std::make_shared<Geometry>(ctx.geometry);
  auto shared_fragmentation = std::make_shared<Fragmentation>(ctx.fragmentation);
  auto external = ctx.external;
  auto ledger = ctx.ledger;
  auto ao_table = ctx.ao_table;
  double screening_radius = config.screening_radius;

  ctx.evaluate = [geometry = shared_geometry, fragmentation = shared_fragmentation,
                  external, ledger, mapped, digest, radii](const GridElement& p) {
    auto [m, b] = mapped(p);
    SubproblemSpec spec;
    spec.subset = p[0].subset();
    spec.method_index = m;
    spec.basis_index = b;
    spec.geometry_digest = digest;
    std::string key = subproblem_key(spec);
    if (ledger) {
      if (auto hit = ledger->get(key)) return *hit;
    }
    Subsystem subsystem = extract_subsystem(*geometry, *fragmentation, spec.subset, radii);
    std::vector<Atom> atoms;
    for (Vertex v : subsystem.real_atoms) atoms.push_back(geometry->atoms[v]);
    std::vector<std::array<double, 3>> links;
    for (const auto& link : subsystem.link_atoms) links.push_back(link.xyz);
    EvaluationRecord record = external->evaluate(spec, atoms, links);
    if (ledger) ledger->put(key, record);
    return record;
  };
  ctx.cost = [geometry = shared_geometry, fragmentation = shared_fragmentation,
              ao_table, cost_params, mapped, screening_radius,
              radii](const GridElement& p) {
    if (p[0].subset().empty()) return 0.0;
    auto [m, b] = mapped(p);
    Subsystem subsystem = extract_subsystem(*geometry, *fragmentation, p[0].subset(), radii);
    SystemSizes sizes =
        surrogate_sizes(subsystem_atoms(*geometry, subsystem), b, *ao_table,
                        screening_radius);
    return cost_of_spec(cost_params, m, sizes);
  };
  return ctx;
}

RunOutput run_adaptive_from_config(const RunConfig& config,
                                   const adaptive::IterationObserver& observer) {
  RunContext ctx = build_run_context(config);
  RunOutput output;
  output.synthetic_target = ctx.synthetic_target;
  output.state = adaptive::run_adaptive(ctx.grid, ctx.evaluate, ctx.cost, config.engine,
                                        observer);

  auto write_file = [](const std::string& path, const std::string& content) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write output file: " + path);
    out << content;
  };
  write_file(config.csv_path, adaptive::history_csv(output.state.history));
  write_file(config.jsonl_path, adaptive::history_jsonl(output.state.history));
  write_file(config.summary_path, summary_json(config, output));
  return output;
}

std::string summary_json(const RunConfig& config, const RunOutput& output) {
  json j;
  j["stop_reason"] = adaptive::to_string(output.state.stop_reason);
  j["iterations"] = output.state.history.size();
  j["ideal_size"] = output.state.ideal.size();
  j["value"] = output.state.value();
  j["error_indicator"] = output.state.error_indicator();
  j["cost"] = output.state.total_cost();
  j["uncertainty"] =
      output.state.history.empty() ? 0.0 : output.state.history.back().uncertainty;
  j["evaluations"] = output.state.evaluations.size();
  if (output.synthetic_target) {
    j["synthetic_target"] = *output.synthetic_target;
    j["target_error"] = std::abs(output.state.value() - *output.synthetic_target);
  }
  if (!output.state.failed.empty()) {
    json failed = json::array();
    for (const auto& p : output.state.failed) failed.push_back(to_string(p));
    j["failed_elements"] = failed;
  }
  j["seed"] = config.seed;
  return j.dump(2) + "\n";
}

}  // namespace supanova
