"""Solver behavior: generic LPs, the hand-instance pin, oracle agreement."""

import numpy as np
import pytest

from prepos import (LinearProgram, Row, SolveOptions, VariableKey, build_lp,
                    decompose_costs, expired_inventory, solve)

from _factories import hand_instance, random_instance
from _oracle import brute_force_solve, enumerate_vertices, residuals


def generic_lp(costs, rows, fixed=None):
    """LP over synthetic columns x1..xn; rows as (coeffs-by-index, sense, rhs)."""
    columns = [VariableKey.x("c", "i", k + 1) for k in range(len(costs))]
    lp_rows = [Row(dict(coeffs), sense, rhs, "test")
               for coeffs, sense, rhs in rows]
    fixed_mask = np.zeros(len(costs), dtype=bool)
    for k in fixed or []:
        fixed_mask[k] = True
    return LinearProgram(columns, np.asarray(costs, dtype=float), lp_rows,
                         fixed_mask)


def test_minimize_above_threshold():
    # min x subject to x >= 5 (encoded -x <= -5), x >= 0
    lp = generic_lp([1.0], [({0: -1.0}, "<=", -5.0)])
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(5.0, abs=1e-9)
    assert sol.values[lp.columns[0]] == pytest.approx(5.0, abs=1e-9)


def test_infeasible_equality():
    lp = generic_lp([0.0], [({0: 1.0}, "=", -1.0)])
    assert solve(lp).status == "infeasible"


def test_contradictory_equalities_infeasible():
    lp = generic_lp([0.0], [({0: 1.0}, "=", 1.0), ({0: 1.0}, "=", 2.0)])
    assert solve(lp).status == "infeasible"


def test_unbounded_without_rows():
    lp = generic_lp([-1.0], [])
    assert solve(lp).status == "unbounded"


def test_unbounded_with_unrelated_row():
    lp = generic_lp([-1.0, 0.0], [({1: 1.0}, "<=", 5.0)])
    assert solve(lp).status == "unbounded"


def test_fixed_column_never_used():
    # the cheap column is pinned to zero, so the dear one must serve
    lp = generic_lp([1.0, 10.0], [({0: 1.0, 1: 1.0}, "=", 3.0)], fixed=[0])
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.values[lp.columns[0]] == 0.0
    assert sol.values[lp.columns[1]] == pytest.approx(3.0, abs=1e-9)


def test_redundant_rows_handled():
    # duplicate equalities leave a basic artificial on a redundant row
    lp = generic_lp([1.0, 2.0],
                    [({0: 1.0, 1: 1.0}, "=", 4.0),
                     ({0: 1.0, 1: 1.0}, "=", 4.0),
                     ({0: 2.0, 1: 2.0}, "=", 8.0)])
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(4.0, abs=1e-9)


def test_beale_cycling_example_terminates():
    # classic degenerate LP that can cycle under naive Dantzig pricing
    lp = generic_lp(
        [-0.75, 150.0, -0.02, 6.0],
        [({0: 0.25, 1: -60.0, 2: -1.0 / 25.0, 3: 9.0}, "<=", 0.0),
         ({0: 0.5, 1: -90.0, 2: -1.0 / 50.0, 3: 3.0}, "<=", 0.0),
         ({2: 1.0}, "<=", 1.0)])
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(-0.05, abs=1e-9)


def test_iteration_limit_status():
    lp = build_lp(hand_instance())
    sol = solve(lp, SolveOptions(max_iterations=1))
    assert sol.status == "iteration_limit"


def test_hand_instance_grid_search_oracle():
    """One-dimensional oracle: procure X at the root, greedy recourse ships
    min(X, demand) at each leaf; the LP can do no better and matches."""
    inst = hand_instance()
    q, u, v, r, o = 1.0, 0.25, 10.0, 0.4, 0.1

    def total_cost(x):
        cost = q * x + u * x  # root acquisition + fresh holding, p = 1
        for p, demand in ((0.5, 100.0), (0.5, 0.0)):
            shipped = min(x, demand)
            left = x - shipped
            cost += p * (o * shipped + u * left + r * left
                         + v * (demand - shipped))
        return cost

    grid = [k * 0.5 for k in range(0, 601)]
    best_x = min(grid, key=total_cost)
    assert best_x == pytest.approx(100.0)
    assert total_cost(best_x) == pytest.approx(162.5)

    lp = build_lp(inst)
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(162.5, abs=1e-7)
    assert sol.values[VariableKey.x("relief", "F", 1)] == pytest.approx(100.0, abs=1e-6)

    breakdown = decompose_costs(lp, sol.values)
    assert breakdown.Q == pytest.approx(100.0, abs=1e-7)
    assert breakdown.O == pytest.approx(5.0, abs=1e-7)
    assert breakdown.U == pytest.approx(37.5, abs=1e-7)
    assert breakdown.V == pytest.approx(0.0, abs=1e-7)
    assert breakdown.R == pytest.approx(20.0, abs=1e-7)

    expired = expired_inventory(inst, sol.values)
    assert expired == {("relief", "F", 3): pytest.approx(100.0, abs=1e-6)}


def test_solver_matches_tableau_oracle():
    for seed in range(60):
        lp = build_lp(random_instance(seed))
        sol = solve(lp)
        status, objective = brute_force_solve(lp)
        assert sol.status == status == "optimal", seed
        assert sol.objective == pytest.approx(objective, rel=1e-6, abs=1e-9), seed
        assert residuals(lp, sol.values) <= 1e-7, seed


def test_solver_matches_vertex_enumeration_tiny():
    """Exhaustive basic-solution scan on deliberately tiny trees."""
    import random as _random
    from prepos import (Commodity, DemandPoint, DistanceMatrix, Facility,
                        Instance, ScenarioTree)
    checked = 0
    for seed in range(25):
        rng = _random.Random(1000 + seed)
        lifetime, scenarios = rng.choice([(1, 1), (1, 3), (2, 1)])
        q = rng.uniform(0.5, 5.0)
        com = Commodity("c1", lifetime, q, 0.3 * q, rng.uniform(2, 8) * q,
                        0.4 * q, 1.0, rng.uniform(0.05, 0.3))
        tree = ScenarioTree()
        root = tree.add_node(None, 1.0)
        if scenarios == 3:
            tree.add_node(root, 0.5, {("c1", "j1"): rng.uniform(0, 40)})
            tree.add_node(root, 0.5, {("c1", "j1"): rng.uniform(0, 40)})
        inst = Instance(
            (com,), (Facility("i1", "a", rng.uniform(30, 200)),),
            (DemandPoint("j1", "b"),),
            DistanceMatrix(["a", "b"], {("a", "b"): rng.uniform(0, 10)}), tree)
        lp = build_lp(inst)
        sol = solve(lp)
        best = enumerate_vertices(lp)
        assert sol.status == "optimal"
        assert best is not None
        assert sol.objective == pytest.approx(best, rel=1e-6, abs=1e-9)
        checked += 1
    assert checked == 25


def test_bit_for_bit_determinism():
    lp = build_lp(random_instance(3))
    first = solve(lp)
    second = solve(lp)
    assert first.status == second.status
    assert first.objective == second.objective
    assert first.values == second.values
    assert first.iterations == second.iterations


def test_tolerance_validation():
    with pytest.raises(ValueError):
        SolveOptions(feasibility_tolerance=0.0)
    with pytest.raises(ValueError):
        SolveOptions(optimality_tolerance=-1e-9)
