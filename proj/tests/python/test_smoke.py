"""End-to-end smoke tests over the python module and the CLI binary."""

import json
import math
import os
import subprocess
import sys

import pytest

import supanova as sn

DATA = os.environ.get("SUPANOVA_TEST_DATA", "")
CLI = os.environ.get("SUPANOVA_CLI", "")


def test_moebius_and_vectors():
    b6 = sn.PosetAxis.boolean_algebra(6)
    assert b6.moebius((0,), (0, 1, 2)) == 1
    assert b6.moebius((0, 1), (0, 1, 2)) == -1
    assert b6.moebius((3,), (0, 1)) == 0

    nat = sn.PosetAxis.chain_nat()
    assert nat.moebius_vector(3) == {3: 1, 2: -1}
    assert nat.covers_up(4) == [5]

    diamond = sn.PosetAxis.explicit_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert diamond.moebius(0, 3) == 1


def test_combination_coefficients_two_body():
    grid = sn.PosetGrid([sn.PosetAxis.boolean_algebra(6)])
    pairs = [[(i, j)] for i in range(6) for j in range(i + 1, 6)]
    ideal = sn.OrderIdeal.down_closure(grid, pairs)
    coeffs = sn.combination_coefficients(grid, ideal)
    assert coeffs[((),)] == 10
    assert coeffs[((0,),)] == -4
    assert coeffs[((0, 1),)] == 1
    assert sn.top_down_coefficient_check(grid, ideal)


def test_graph_families():
    ring = sn.InteractionGraph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
    oracle = sn.ShortestPathOracle(ring)
    assert sn.is_convex_subset(ring, oracle, [0, 1, 2])
    assert not sn.is_convex_subset(ring, oracle, [0, 3, 4, 5])
    assert sn.geodesic_hull(ring, oracle, [0, 2]) == [0, 1, 2]
    assert len(sn.enumerate_convex_subsets(ring, oracle, 6)) == 20

    report = sn.diagnose_conn_consistency(ring)
    assert not report["meet_closed"]
    assert [0, 1, 2, 3, 4, 5] in report["chordless_cycles"]

    chain = sn.InteractionGraph(4, [(0, 1), (1, 2), (2, 3)])
    assert len(sn.simplex_ideal(chain, 1)) == 8


def test_fragmentation_and_subsystems():
    geometry = sn.load_geometry(os.path.join(DATA, "heptane.xyz"))
    fragments = sn.heuristic_fragment(geometry)
    assert len(fragments) == 7
    quotient = sn.quotient_graph(sn.bond_graph(geometry), fragments)
    assert quotient.vertex_count == 7
    assert quotient.edge_count == 6

    real, links = sn.extract_subsystem(geometry, fragments, [0], sn.default_radii())
    assert len(links) == 1


def test_cost_model():
    params = sn.CostParams()
    sizes = sn.SystemSizes(n_ao=10, n_eri=1000)
    assert sn.cost_hf(params, sizes) == 765000.0
    assert sn.method_label(4) == "CC(2)(3)"
    assert sn.cost_of_spec(params, 1, sizes) == 765000.0


def test_adaptive_run_recovers_target():
    pot = sn.SyntheticPotential(sites=5, m_levels=2, p_levels=2, seed=42, theta=0.3)
    grid = sn.PosetGrid(
        [
            sn.PosetAxis.boolean_algebra(5),
            sn.PosetAxis.chain_bounded(2),
            sn.PosetAxis.chain_bounded(2),
        ]
    )
    result = sn.run_adaptive(
        grid,
        lambda p: pot.value(list(p[0]), p[1], p[2]),
        lambda p: max(1.0, float(len(p[0]) ** 3)),
        strategy="all",
        concurrency=2,
    )
    assert result["stop_reason"] == "queue-exhausted"
    assert math.isclose(result["value"], pot.target(), rel_tol=1e-12)
    costs = [rec["cost"] for rec in result["history"]]
    assert costs == sorted(costs)


def test_expansions():
    def potential(u):
        u = tuple(u)
        if not u:
            return 0.0
        return math.sin(sum(2.0 * v + 1.0 for v in u))

    two = [[0, 1], [1, 2]]
    expected = potential([0, 1]) + potential([1, 2]) - potential([1])
    assert math.isclose(sn.gmbe_energy(two, 1, potential), expected, rel_tol=1e-12)

    triangle = sn.InteractionGraph(3, [(0, 1), (1, 2), (0, 2)])
    assert math.isclose(
        sn.simplex_energy(triangle, 2, potential), potential([0, 1, 2]), rel_tol=1e-12
    )

    family = [(), (0,), (1,), (0, 1)]
    assert sn.check_meet_subsemilattice(list(map(list, family)))["meet_closed"]


def test_cli_adapt_with_external_backend_and_ledger(tmp_path):
    if not CLI:
        pytest.skip("CLI path not provided")
    backend = os.environ["SUPANOVA_BACKENDS"]
    ledger = tmp_path / "run.ledger"
    config = {
        "graph": {"mode": "bonds"},
        "fragmentation": {"mode": "singleton"},
        "grid": {"subset_axis": "boolean", "method_indices": [1], "basis_indices": [1]},
        "evaluator": {
            "kind": "external",
            "command": ["python3", os.path.join(backend, "echo_backend.py"), "--sizes"],
            "timeout_s": 60,
            "concurrency": 2,
            "ledger": str(ledger),
        },
        "adaptive": {"strategy": "all", "concurrency": 2},
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    structure = os.path.join(DATA, "water.xyz")

    first = subprocess.run(
        [CLI, "adapt", "--config", str(config_path), "--structure", structure],
        capture_output=True,
        text=True,
        check=True,
    )
    summary = json.loads(first.stdout)
    assert summary["stop_reason"] == "queue-exhausted"
    assert summary["ideal_size"] == 8  # full boolean algebra over three fragments
    assert ledger.exists()

    # Rerun against a backend that dies instantly: every evaluation must be
    # served from the ledger.
    config["evaluator"]["command"] = ["python3", "-c", "import sys; sys.exit(9)"]
    config_path.write_text(json.dumps(config))
    second = subprocess.run(
        [CLI, "adapt", "--config", str(config_path), "--structure", structure],
        capture_output=True,
        text=True,
        check=True,
    )
    resummary = json.loads(second.stdout)
    assert resummary["value"] == summary["value"]
    assert resummary["stop_reason"] == "queue-exhausted"

    # Without the ledger the dead backend is a hard evaluator failure: exit 3.
    config["evaluator"].pop("ledger")
    config_path.write_text(json.dumps(config))
    third = subprocess.run(
        [CLI, "adapt", "--config", str(config_path), "--structure", structure],
        capture_output=True,
        text=True,
    )
    assert third.returncode == 3


def test_run_from_config_over_other_axes():
    structure = os.path.join(DATA, "heptane.xyz")

    def run(subset_axis, **extra):
        config = {
            "structure": structure,
            "graph": {"mode": "bonds"},
            "fragmentation": {"mode": "heuristic"},
            "grid": {
                "subset_axis": subset_axis,
                "method_indices": [1, 2],
                "basis_indices": [1],
                **extra,
            },
            "evaluator": {"kind": "synthetic", "seed": 11, "theta": 0.3},
            "adaptive": {"strategy": "all"},
        }
        return sn.run_adaptive_from_config(json.dumps(config))

    convex = run("convex")
    conn = run("conn")
    assert convex["stop_reason"] == "queue-exhausted"
    # The backbone quotient is a tree, so the two families coincide.
    assert conn["value"] == convex["value"]
    assert math.isclose(convex["value"], convex["synthetic_target"], rel_tol=1e-12)

    simplex = run("simplex", simplex_rank=1)
    assert simplex["stop_reason"] == "queue-exhausted"
    # Empty set, seven sites, six adjacent pairs, two method levels.
    assert len(simplex["ideal"]) == 14 * 2


def test_threshold_graph_mode(tmp_path):
    # No bonds at all: a thresholded graph plus singleton fragments.
    xyz = tmp_path / "trimer.xyz"
    xyz.write_text(
        "3\nthree sites\nHe 0.0 0.0 0.0\nHe 2.0 0.0 0.0\nHe 4.0 0.0 0.0\n"
    )
    config = {
        "structure": str(xyz),
        "graph": {"mode": "threshold", "r_cut": 2.5},
        "fragmentation": {"mode": "singleton"},
        "grid": {"subset_axis": "conn", "method_indices": [1], "basis_indices": [1]},
        "evaluator": {"kind": "synthetic", "seed": 5},
        "adaptive": {"strategy": "all"},
    }
    result = sn.run_adaptive_from_config(json.dumps(config))
    assert result["stop_reason"] == "queue-exhausted"
    # Path graph on three sites: empty set, three singletons, two edges, one
    # triple = 7 connected subsets.
    assert len(result["ideal"]) == 7


def test_best_strategy_with_cost_budget():
    structure = os.path.join(DATA, "water.xyz")
    config = {
        "structure": structure,
        "fragmentation": {"mode": "singleton"},
        "grid": {"subset_axis": "boolean", "method_indices": [1], "basis_indices": [1]},
        "evaluator": {"kind": "synthetic", "seed": 3},
        "adaptive": {"strategy": "best", "cost_budget": 1.0},
    }
    result = sn.run_adaptive_from_config(json.dumps(config))
    assert result["stop_reason"] == "cost-budget"
    assert result["cost"] >= 1.0


def _cyclohexane_text():
    # Chair-free idealized ring: six CH2 units on a hexagon.
    lines = ["18", "cyclohexane, idealized"]
    bonds = []
    for i in range(6):
        angle = math.tau * i / 6.0
        x, y = 1.5 * math.cos(angle), 1.5 * math.sin(angle)
        lines.append(f"C {x:.6f} {y:.6f} 0.0")
        bonds.append((i + 1, (i + 1) % 6 + 1, 1))
    h = 7
    for i in range(6):
        angle = math.tau * i / 6.0
        x, y = 2.2 * math.cos(angle), 2.2 * math.sin(angle)
        lines.append(f"H {x:.6f} {y:.6f} 0.8")
        lines.append(f"H {x:.6f} {y:.6f} -0.8")
        bonds.append((i + 1, h, 1))
        bonds.append((i + 1, h + 1, 1))
        h += 2
    lines.append("BONDS")
    lines.extend(f"{i} {j} {o}" for i, j, o in bonds)
    return "\n".join(lines) + "\n"


def test_ring_system_end_to_end(tmp_path):
    # Ring quotient graphs are where the convex family differs from the
    # connected one; exhaustion must still recover the target exactly.
    xyz = tmp_path / "cyclohexane.xyz"
    xyz.write_text(_cyclohexane_text())
    geometry = sn.load_geometry(str(xyz))
    fragments = sn.heuristic_fragment(geometry)
    assert len(fragments) == 6
    quotient = sn.quotient_graph(sn.bond_graph(geometry), fragments)
    assert quotient.edge_count == 6  # the six-ring survives quotienting
    report = sn.diagnose_conn_consistency(quotient)
    assert not report["meet_closed"]

    config = {
        "structure": str(xyz),
        "graph": {"mode": "bonds"},
        "fragmentation": {"mode": "heuristic"},
        "grid": {"subset_axis": "convex", "method_indices": [1, 2], "basis_indices": [1]},
        "evaluator": {"kind": "synthetic", "seed": 19, "theta": 0.3},
        "adaptive": {"strategy": "threshold", "threshold_alpha": 0.25, "concurrency": 2},
    }
    result = sn.run_adaptive_from_config(json.dumps(config))
    assert result["stop_reason"] == "queue-exhausted"
    assert len(result["ideal"]) == 20 * 2  # six-cycle convex family, two methods
    assert math.isclose(result["value"], result["synthetic_target"], rel_tol=1e-12)


def test_cli_verify_reports_all_criteria():
    if not CLI:
        pytest.skip("CLI path not provided")
    result = subprocess.run([CLI, "verify"], capture_output=True, text=True)
    lines = [line for line in result.stdout.splitlines() if line.startswith("[")]
    assert len(lines) == 13
    for line in lines:
        assert line.startswith("[PASS]") or line.startswith("[FAIL]")
