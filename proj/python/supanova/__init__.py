"""Poset-grid decompositions of set- and graph-indexed potentials.

Moebius machinery over chains, boolean algebras, and induced-subgraph
families; combination coefficients of order-ideal truncations; a fragmentation
heuristic with hydrogen caps; an abstract cost model; synthetic and external
subproblem evaluators; and the adaptive truncation engine.
"""

from supanova._core import (
    CostParams,
    EvaluationError,
    Geometry,
    IntegrityError,
    InteractionGraph,
    OrderIdeal,
    PosetAxis,
    PosetGrid,
    ShortestPathOracle,
    SyntheticPotential,
    SystemSizes,
    admissible_covers,
    bond_graph,
    build_thresholded_graph,
    check_meet_subsemilattice,
    combination_coefficients,
    conn_covers_down,
    conn_covers_up,
    connected_subsets_axis,
    consistent_ideal,
    convex_covers_down,
    convex_covers_up,
    convex_subsets_axis,
    cost_cc,
    cost_cc_pert,
    cost_hf,
    cost_mp2,
    cost_of_spec,
    default_radii,
    diagnose_conn_consistency,
    enumerate_connected_subsets,
    enumerate_convex_subsets,
    extract_subsystem,
    geodesic_hull,
    geometry_digest,
    gmbe_energy,
    heuristic_fragment,
    is_connected_subset,
    is_convex_subset,
    load_geometry,
    mbe_contribution,
    method_label,
    mlfcr_coefficients,
    moebius_tensor,
    parse_geometry,
    quotient_graph,
    run_acceptance,
    run_adaptive,
    run_adaptive_from_config,
    simplex_axis,
    simplex_energy,
    simplex_ideal,
    singleton_fragmentation,
    top_down_coefficient_check,
    truncation_sum,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
