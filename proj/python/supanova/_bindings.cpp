#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace supanova;

namespace {

AxisElement element_from_py(py::handle h) {
  if (py::isinstance<py::int_>(h)) {
    return AxisElement::index(h.cast<std::uint64_t>());
  }
  return AxisElement::subset(canonical_set(h.cast<VertexSet>()));
}

py::object element_to_py(const AxisElement& e) {
  if (e.holds_index()) return py::int_(e.index());
  py::tuple out(e.subset().size());
  for (std::size_t i = 0; i < e.subset().size(); ++i) out[i] = e.subset()[i];
  return out;
}

GridElement grid_element_from_py(py::handle h) {
  GridElement out;
  for (py::handle item : h.cast<py::sequence>()) out.push_back(element_from_py(item));
  return out;
}

py::tuple grid_element_to_py(const GridElement& p) {
  py::tuple out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = element_to_py(p[i]);
  return out;
}

py::list elements_to_py(const std::vector<AxisElement>& elements) {
  py::list out;
  for (const auto& e : elements) out.append(element_to_py(e));
  return out;
}

py::dict tensor_to_py(const SparseIntTensor& t) {
  py::dict out;
  for (const auto& [p, v] : t) out[grid_element_to_py(p)] = v;
  return out;
}

py::dict record_to_py(const EvaluationRecord& r) {
  py::dict out;
  out["value"] = r.value;
  out["uncertainty"] = r.uncertainty;
  out["cost"] = r.abstract_cost;
  out["wall_s"] = r.wall_time_s;
  out["backend"] = r.backend;
  return out;
}

py::dict iteration_to_py(const adaptive::IterationRecord& rec) {
  py::dict out;
  out["iteration"] = rec.iteration;
  out["ideal_size"] = rec.ideal_size;
  out["new_elements"] = rec.new_elements;
  out["S"] = rec.value;
  out["E_ind"] = rec.error_indicator;
  out["cost"] = rec.cost;
  out["dS"] = rec.uncertainty;
  out["wall_s"] = rec.wall_s;
  out["queue_len"] = rec.queue_size;
  return out;
}

py::dict state_to_py(const adaptive::AdaptiveState& state) {
  py::dict out;
  out["value"] = state.value();
  out["error_indicator"] = state.error_indicator();
  out["cost"] = state.total_cost();
  out["stop_reason"] = adaptive::to_string(state.stop_reason);
  py::list history;
  for (const auto& rec : state.history) history.append(iteration_to_py(rec));
  out["history"] = history;
  py::list ideal;
  for (const auto& p : state.ideal.elements()) ideal.append(grid_element_to_py(p));
  out["ideal"] = ideal;
  py::list antichain;
  for (const auto& p : state.ideal.antichain()) antichain.append(grid_element_to_py(p));
  out["antichain"] = antichain;
  out["combination"] = tensor_to_py(state.combination);
  out["indicator"] = tensor_to_py(state.indicator);
  py::dict evaluations;
  for (const auto& [p, r] : state.evaluations) {
    evaluations[grid_element_to_py(p)] = record_to_py(r);
  }
  out["evaluations"] = evaluations;
  py::list failed;
  for (const auto& p : state.failed) failed.append(grid_element_to_py(p));
  out["failed"] = failed;
  return out;
}

SyntheticPotential::Params synthetic_params_from_kwargs(
    std::size_t sites, int m_levels, int p_levels, std::uint64_t seed, double theta,
    int max_body_order, double one_body_scale, double pair_scale, double uncertainty) {
  SyntheticPotential::Params params;
  params.sites = sites;
  params.m_levels = m_levels;
  params.p_levels = p_levels;
  params.seed = seed;
  params.theta = theta;
  params.max_body_order = max_body_order;
  params.one_body_scale = one_body_scale;
  params.pair_scale = pair_scale;
  params.uncertainty = uncertainty;
  return params;
}

adaptive::AdaptiveConfig adaptive_config_from_kwargs(
    const std::string& strategy, double threshold_alpha, py::object cost_budget,
    py::object error_threshold, py::object max_iterations, py::object wall_clock_limit_s,
    int concurrency, const std::string& on_failure) {
  adaptive::AdaptiveConfig config;
  if (strategy == "best") {
    config.strategy = adaptive::Strategy::Best;
  } else if (strategy == "all") {
    config.strategy = adaptive::Strategy::All;
  } else if (strategy == "threshold") {
    config.strategy = adaptive::Strategy::Threshold;
  } else {
    throw std::invalid_argument("unknown strategy: " + strategy);
  }
  config.threshold_alpha = threshold_alpha;
  if (!cost_budget.is_none()) config.cost_budget = cost_budget.cast<double>();
  if (!error_threshold.is_none()) config.error_threshold = error_threshold.cast<double>();
  if (!max_iterations.is_none()) {
    config.max_iterations = max_iterations.cast<std::int64_t>();
  }
  if (!wall_clock_limit_s.is_none()) {
    config.wall_clock_limit_s = wall_clock_limit_s.cast<double>();
  }
  config.concurrency = concurrency;
  if (on_failure == "abort") {
    config.on_failure = adaptive::FailurePolicy::Abort;
  } else if (on_failure == "exclude") {
    config.on_failure = adaptive::FailurePolicy::Exclude;
  } else {
    throw std::invalid_argument("unknown failure policy: " + on_failure);
  }
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Poset-grid decompositions of set- and graph-indexed potentials: "
            "Moebius machinery, interaction-graph families, fragmentation, "
            "synthetic and external evaluators, and the adaptive truncation engine.";

  // ----- poset axes and grids -----
  py::class_<PosetAxis>(m, "PosetAxis")
      .def_static("chain_nat", &PosetAxis::chain_nat)
      .def_static("chain_bounded", &PosetAxis::chain_bounded, py::arg("n"))
      .def_static("boolean_algebra", &PosetAxis::boolean_algebra, py::arg("n"))
      .def_static("explicit_poset", &PosetAxis::explicit_poset, py::arg("n"),
                  py::arg("covers"))
      .def_property_readonly("name", &PosetAxis::name)
      .def("least", [](const PosetAxis& a) { return element_to_py(a.least()); })
      .def("contains",
           [](const PosetAxis& a, py::handle e) { return a.contains(element_from_py(e)); })
      .def("less_equal",
           [](const PosetAxis& a, py::handle s, py::handle t) {
             return a.less_equal(element_from_py(s), element_from_py(t));
           })
      .def("covers_up",
           [](const PosetAxis& a, py::handle e) {
             return elements_to_py(a.covers_up(element_from_py(e)));
           })
      .def("covers_down",
           [](const PosetAxis& a, py::handle e) {
             return elements_to_py(a.covers_down(element_from_py(e)));
           })
      .def("moebius",
           [](const PosetAxis& a, py::handle s, py::handle t) {
             return a.moebius(element_from_py(s), element_from_py(t));
           })
      .def("moebius_vector",
           [](const PosetAxis& a, py::handle p) {
             py::dict out;
             for (const auto& [e, v] : a.moebius_vector(element_from_py(p))) {
               out[element_to_py(e)] = v;
             }
             return out;
           })
      .def("lower_set", [](const PosetAxis& a, py::handle p) {
        return elements_to_py(a.lower_set(element_from_py(p)));
      });

  py::class_<PosetGrid>(m, "PosetGrid")
      .def(py::init<std::vector<PosetAxis>>(), py::arg("axes"))
      .def_property_readonly("dimension", &PosetGrid::dimension)
      .def("least", [](const PosetGrid& g) { return grid_element_to_py(g.least()); })
      .def("contains",
           [](const PosetGrid& g, py::handle p) {
             return g.contains(grid_element_from_py(p));
           })
      .def("less_equal",
           [](const PosetGrid& g, py::handle p, py::handle q) {
             return g.less_equal(grid_element_from_py(p), grid_element_from_py(q));
           })
      .def("covers_up",
           [](const PosetGrid& g, py::handle p) {
             py::list out;
             for (const auto& q : g.covers_up(grid_element_from_py(p))) {
               out.append(grid_element_to_py(q));
             }
             return out;
           })
      .def("covers_down",
           [](const PosetGrid& g, py::handle p) {
             py::list out;
             for (const auto& q : g.covers_down(grid_element_from_py(p))) {
               out.append(grid_element_to_py(q));
             }
             return out;
           })
      .def("moebius",
           [](const PosetGrid& g, py::handle p, py::handle q) {
             return g.moebius(grid_element_from_py(p), grid_element_from_py(q));
           })
      .def("lower_set", [](const PosetGrid& g, py::handle p) {
        py::list out;
        for (const auto& q : g.lower_set(grid_element_from_py(p))) {
          out.append(grid_element_to_py(q));
        }
        return out;
      });

  py::class_<OrderIdeal>(m, "OrderIdeal")
      .def(py::init<>())
      .def_static("down_closure",
                  [](const PosetGrid& grid, py::handle generators) {
                    std::vector<GridElement> gens;
                    for (py::handle g : generators.cast<py::sequence>()) {
                      gens.push_back(grid_element_from_py(g));
                    }
                    return OrderIdeal::down_closure(grid, gens);
                  },
                  py::arg("grid"), py::arg("generators"))
      .def("insert",
           [](OrderIdeal& ideal, const PosetGrid& grid, py::handle p) {
             py::list removed;
             for (const auto& q : ideal.insert(grid, grid_element_from_py(p))) {
               removed.append(grid_element_to_py(q));
             }
             return removed;
           },
           py::arg("grid"), py::arg("element"))
      .def("contains",
           [](const OrderIdeal& ideal, py::handle p) {
             return ideal.contains(grid_element_from_py(p));
           })
      .def("__len__", &OrderIdeal::size)
      .def("elements",
           [](const OrderIdeal& ideal) {
             py::list out;
             for (const auto& p : ideal.elements()) out.append(grid_element_to_py(p));
             return out;
           })
      .def("antichain", [](const OrderIdeal& ideal) {
        py::list out;
        for (const auto& p : ideal.antichain()) out.append(grid_element_to_py(p));
        return out;
      });

  m.def("moebius_tensor",
        [](const PosetGrid& grid, py::handle p) {
          return tensor_to_py(moebius_tensor(grid, grid_element_from_py(p)));
        },
        py::arg("grid"), py::arg("element"));
  m.def("combination_coefficients",
        [](const PosetGrid& grid, const OrderIdeal& ideal) {
          return tensor_to_py(combination_coefficients(grid, ideal));
        },
        py::arg("grid"), py::arg("ideal"));
  m.def("top_down_coefficient_check", &top_down_coefficient_check, py::arg("grid"),
        py::arg("ideal"));
  m.def("admissible_covers",
        [](const PosetGrid& grid, const OrderIdeal& ideal, py::handle p) {
          py::list out;
          for (const auto& q : admissible_covers(grid, ideal, grid_element_from_py(p))) {
            out.append(grid_element_to_py(q));
          }
          return out;
        },
        py::arg("grid"), py::arg("ideal"), py::arg("element"));

  // ----- interaction graphs -----
  py::class_<InteractionGraph, std::shared_ptr<InteractionGraph>>(m, "InteractionGraph")
      .def(py::init<std::size_t, const std::vector<std::pair<Vertex, Vertex>>&>(),
           py::arg("vertex_count"), py::arg("edges"))
      .def_static("from_edge_list_text", &InteractionGraph::from_edge_list_text)
      .def_static("from_edge_list_file", &InteractionGraph::from_edge_list_file)
      .def_property_readonly("vertex_count", &InteractionGraph::vertex_count)
      .def_property_readonly("edge_count", &InteractionGraph::edge_count)
      .def("edges", &InteractionGraph::edges)
      .def("neighbors", &InteractionGraph::neighbors, py::arg("vertex"))
      .def("has_edge", &InteractionGraph::has_edge, py::arg("i"), py::arg("j"));

  py::class_<ShortestPathOracle>(m, "ShortestPathOracle")
      .def(py::init<const InteractionGraph&>(), py::arg("graph"))
      .def("distance", &ShortestPathOracle::distance, py::arg("i"), py::arg("j"))
      .def("reachable", &ShortestPathOracle::reachable, py::arg("i"), py::arg("j"));

  m.def("is_connected_subset", &is_connected_subset, py::arg("graph"), py::arg("subset"));
  m.def("geodesic_hull", &geodesic_hull, py::arg("graph"), py::arg("oracle"),
        py::arg("subset"));
  m.def("is_convex_subset", &is_convex_subset, py::arg("graph"), py::arg("oracle"),
        py::arg("subset"));
  m.def("conn_covers_up", &conn_covers_up, py::arg("graph"), py::arg("subset"));
  m.def("conn_covers_down", &conn_covers_down, py::arg("graph"), py::arg("subset"));
  m.def("convex_covers_up", &convex_covers_up, py::arg("graph"), py::arg("oracle"),
        py::arg("subset"));
  m.def("convex_covers_down", &convex_covers_down, py::arg("graph"), py::arg("oracle"),
        py::arg("subset"));
  m.def("enumerate_convex_subsets", &enumerate_convex_subsets, py::arg("graph"),
        py::arg("oracle"), py::arg("max_size"), py::arg("vertex_limit") = 12);
  m.def("enumerate_connected_subsets", &enumerate_connected_subsets, py::arg("graph"),
        py::arg("max_size"), py::arg("vertex_limit") = 12);
  m.def("simplex_ideal", &simplex_ideal, py::arg("graph"), py::arg("rank_limit"));
  m.def("diagnose_conn_consistency",
        [](const InteractionGraph& g, std::size_t exhaustive_limit) {
          auto report = diagnose_conn_consistency(g, exhaustive_limit);
          py::dict out;
          out["meet_closed"] = report.meet_closed;
          out["chordless_cycles"] = report.chordless_cycles;
          out["chorded_four_cycles"] = report.chorded_four_cycles;
          if (report.exhaustive_meet_closed) {
            out["exhaustive_meet_closed"] = *report.exhaustive_meet_closed;
          }
          if (report.witness) {
            out["witness"] = py::make_tuple(report.witness->first, report.witness->second);
          }
          return out;
        },
        py::arg("graph"), py::arg("exhaustive_limit") = 12);
  m.def("connected_subsets_axis", &connected_subsets_axis, py::arg("graph"));
  m.def("convex_subsets_axis", &convex_subsets_axis, py::arg("graph"));
  m.def("simplex_axis", &simplex_axis, py::arg("graph"), py::arg("rank_limit"));

  // ----- geometry and fragmentation -----
  py::class_<Geometry>(m, "Geometry")
      .def_property_readonly("size", &Geometry::size)
      .def_property_readonly("atomic_numbers",
                             [](const Geometry& g) {
                               std::vector<int> out;
                               for (const auto& a : g.atoms) out.push_back(a.z);
                               return out;
                             })
      .def_property_readonly("coordinates",
                             [](const Geometry& g) {
                               std::vector<std::array<double, 3>> out;
                               for (const auto& a : g.atoms) out.push_back(a.xyz);
                               return out;
                             })
      .def_property_readonly("bonds", [](const Geometry& g) -> py::object {
        if (!g.bonds) return py::none();
        py::list out;
        for (const auto& b : *g.bonds) out.append(py::make_tuple(b.i, b.j, b.order));
        return out;
      });
  m.def("load_geometry", &load_geometry, py::arg("path"));
  m.def("parse_geometry", &parse_geometry, py::arg("text"));
  m.def("geometry_digest", &geometry_digest, py::arg("geometry"));
  m.def("bond_graph", &bond_graph, py::arg("geometry"));
  m.def("build_thresholded_graph", &build_thresholded_graph, py::arg("geometry"),
        py::arg("r_cut"));
  m.def("heuristic_fragment",
        py::overload_cast<const Geometry&>(&heuristic_fragment), py::arg("geometry"));
  m.def("singleton_fragmentation", &singleton_fragmentation, py::arg("atom_count"));
  m.def("quotient_graph", &quotient_graph, py::arg("graph"), py::arg("fragmentation"));
  m.def("default_radii", &default_radii);
  m.def("extract_subsystem",
        [](const Geometry& geometry, const Fragmentation& fragmentation,
           const VertexSet& fragment_indices, const RadiiTable& radii) {
          Subsystem s = extract_subsystem(geometry, fragmentation,
                                          canonical_set(fragment_indices), radii);
          py::list links;
          for (const auto& link : s.link_atoms) {
            links.append(py::make_tuple(link.xyz, link.bonded_inside,
                                        link.replaced_outside));
          }
          return py::make_tuple(s.real_atoms, links);
        },
        py::arg("geometry"), py::arg("fragmentation"), py::arg("fragment_indices"),
        py::arg("radii"));

  // ----- cost model -----
  py::class_<CostParams>(m, "CostParams")
      .def(py::init([](double n_hf_iter, double n_cc_iter, double f_eri) {
             return CostParams{n_hf_iter, n_cc_iter, f_eri};
           }),
           py::arg("n_hf_iter") = 15, py::arg("n_cc_iter") = 15, py::arg("f_eri") = 50)
      .def_readwrite("n_hf_iter", &CostParams::n_hf_iter)
      .def_readwrite("n_cc_iter", &CostParams::n_cc_iter)
      .def_readwrite("f_eri", &CostParams::f_eri);
  py::class_<SystemSizes>(m, "SystemSizes")
      .def(py::init([](std::int64_t n_ao, std::int64_t n_occ, std::int64_t n_corr,
                       std::int64_t n_virt, std::int64_t n_eri) {
             return SystemSizes{n_ao, n_occ, n_corr, n_virt, n_eri};
           }),
           py::arg("n_ao") = 0, py::arg("n_occ") = 0, py::arg("n_corr") = 0,
           py::arg("n_virt") = 0, py::arg("n_eri") = 0)
      .def_readwrite("n_ao", &SystemSizes::n_ao)
      .def_readwrite("n_occ", &SystemSizes::n_occ)
      .def_readwrite("n_corr", &SystemSizes::n_corr)
      .def_readwrite("n_virt", &SystemSizes::n_virt)
      .def_readwrite("n_eri", &SystemSizes::n_eri);
  m.def("cost_hf", &cost_hf, py::arg("params"), py::arg("sizes"));
  m.def("cost_mp2", &cost_mp2, py::arg("params"), py::arg("sizes"));
  m.def("cost_cc", &cost_cc, py::arg("params"), py::arg("sizes"), py::arg("n"));
  m.def("cost_cc_pert", &cost_cc_pert, py::arg("params"), py::arg("sizes"), py::arg("n"));
  m.def("cost_of_spec", &cost_of_spec, py::arg("params"), py::arg("method_index"),
        py::arg("sizes"));
  m.def("method_label",
        [](int method_index) { return method_for_index(method_index).label; },
        py::arg("method_index"));

  // ----- potentials -----
  py::class_<SyntheticPotential>(m, "SyntheticPotential")
      .def(py::init([](std::size_t sites, int m_levels, int p_levels, std::uint64_t seed,
                       double theta, int max_body_order, double one_body_scale,
                       double pair_scale, double uncertainty) {
             return SyntheticPotential(synthetic_params_from_kwargs(
                 sites, m_levels, p_levels, seed, theta, max_body_order, one_body_scale,
                 pair_scale, uncertainty));
           }),
           py::arg("sites"), py::arg("m_levels") = 1, py::arg("p_levels") = 1,
           py::arg("seed") = 1, py::arg("theta") = 0.3, py::arg("max_body_order") = 4,
           py::arg("one_body_scale") = 1.0, py::arg("pair_scale") = 1.0,
           py::arg("uncertainty") = 0.0)
      .def("value", &SyntheticPotential::value, py::arg("subset"), py::arg("m"),
           py::arg("p"))
      .def("base_potential", &SyntheticPotential::base_potential, py::arg("subset"))
      .def("target", &SyntheticPotential::target);

  // ----- expansions -----
  m.def("mbe_contribution",
        [](const std::function<double(const VertexSet&)>& potential, const VertexSet& u) {
          return mbe_contribution(potential, canonical_set(u));
        },
        py::arg("potential"), py::arg("subset"));
  m.def("truncation_sum",
        [](const PosetGrid& grid, const OrderIdeal& ideal, py::function potential) {
          return truncation_sum(grid, ideal, [&](const GridElement& p) {
            return potential(grid_element_to_py(p)).cast<double>();
          });
        },
        py::arg("grid"), py::arg("ideal"), py::arg("potential"));
  m.def("gmbe_energy",
        [](const std::vector<VertexSet>& fragments, int n,
           const std::function<double(const VertexSet&)>& potential, bool collect) {
          return gmbe_energy(fragments, n, potential, collect);
        },
        py::arg("fragments"), py::arg("n"), py::arg("potential"),
        py::arg("collect_terms") = true);
  m.def("simplex_energy", &simplex_energy, py::arg("graph"), py::arg("rank_limit"),
        py::arg("potential"));
  m.def("check_meet_subsemilattice",
        [](const std::vector<VertexSet>& family) {
          auto result = check_meet_subsemilattice(family);
          py::dict out;
          out["meet_closed"] = result.meet_closed;
          if (result.witness) {
            out["witness"] = py::make_tuple(result.witness->first, result.witness->second);
          }
          return out;
        },
        py::arg("family"));
  m.def("mlfcr_coefficients",
        [](Vertex universe, const std::vector<std::vector<VertexSet>>& layers) {
          auto result = mlfcr_coefficients(universe, layers);
          auto convert = [](const std::vector<std::map<VertexSet, std::int64_t>>& maps) {
            py::list out;
            for (const auto& layer : maps) {
              py::dict d;
              for (const auto& [u, v] : layer) {
                py::tuple key(u.size());
                for (std::size_t i = 0; i < u.size(); ++i) key[i] = u[i];
                d[key] = v;
              }
              out.append(d);
            }
            return out;
          };
          return py::make_tuple(convert(result.direct), convert(result.closed_form));
        },
        py::arg("universe"), py::arg("layers"));
  m.def("consistent_ideal",
        [](const PosetGrid& ambient, const PosetGrid& subposet, const OrderIdeal& ideal) {
          auto result = consistent_ideal(ambient, subposet, ideal);
          py::dict out;
          out["consistent"] = result.consistent;
          if (result.counterexample) {
            out["counterexample"] = grid_element_to_py(*result.counterexample);
          }
          return out;
        },
        py::arg("ambient"), py::arg("subposet"), py::arg("ideal"));

  // ----- adaptive engine -----
  m.def("run_adaptive",
        [](const PosetGrid& grid, py::function evaluate, py::function cost,
           const std::string& strategy, double threshold_alpha, py::object cost_budget,
           py::object error_threshold, py::object max_iterations,
           py::object wall_clock_limit_s, int concurrency, const std::string& on_failure) {
          adaptive::AdaptiveConfig config = adaptive_config_from_kwargs(
              strategy, threshold_alpha, cost_budget, error_threshold, max_iterations,
              wall_clock_limit_s, concurrency, on_failure);
          adaptive::EvaluateFn evaluate_fn = [&evaluate](const GridElement& p) {
            py::gil_scoped_acquire gil;
            py::object result = evaluate(grid_element_to_py(p));
            EvaluationRecord record;
            record.backend = "python";
            if (py::isinstance<py::tuple>(result)) {
              py::tuple t = result.cast<py::tuple>();
              record.value = t[0].cast<double>();
              if (t.size() > 1) record.uncertainty = t[1].cast<double>();
            } else {
              record.value = result.cast<double>();
            }
            return record;
          };
          adaptive::CostFn cost_fn = [&cost](const GridElement& p) {
            py::gil_scoped_acquire gil;
            return cost(grid_element_to_py(p)).cast<double>();
          };
          adaptive::AdaptiveState state;
          {
            py::gil_scoped_release release;
            state = adaptive::run_adaptive(grid, evaluate_fn, cost_fn, config);
          }
          return state_to_py(state);
        },
        py::arg("grid"), py::arg("evaluate"), py::arg("cost"), py::arg("strategy") = "all",
        py::arg("threshold_alpha") = 0.0, py::arg("cost_budget") = py::none(),
        py::arg("error_threshold") = py::none(), py::arg("max_iterations") = py::none(),
        py::arg("wall_clock_limit_s") = py::none(), py::arg("concurrency") = 1,
        py::arg("on_failure") = "abort");

  m.def("run_adaptive_from_config",
        [](const std::string& config_json) {
          RunConfig config = RunConfig::from_json_text(config_json);
          RunOutput output;
          {
            py::gil_scoped_release release;
            output = run_adaptive_from_config(config);
          }
          py::dict out = state_to_py(output.state);
          if (output.synthetic_target) out["synthetic_target"] = *output.synthetic_target;
          return out;
        },
        py::arg("config_json"));

  // ----- verification -----
  m.def("run_acceptance", [] {
    py::list out;
    for (const auto& r : verify::run_acceptance()) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["passed"] = r.passed;
      d["detail"] = r.detail;
      d["seconds"] = r.seconds;
      out.append(d);
    }
    return out;
  });

  py::register_exception<EvaluationError>(m, "EvaluationError");
  py::register_exception<IntegrityError>(m, "IntegrityError");
}
