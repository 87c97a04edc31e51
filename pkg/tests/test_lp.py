from fractions import Fraction as F

import pytest

from mmot_euler.costs import CostFunction, action, make_cost, reduced_action
from mmot_euler.errors import InvalidArgument, ResourceLimit
from mmot_euler.euler import delta_family_plan
from mmot_euler.grid import (
    EndpointMap,
    SpatialGrid,
    TimeGrid,
    flip_map,
    three_point_grid,
    uniform_symmetric_grid,
)
from mmot_euler.lp import assemble_mmot_lp, monge_bruteforce, optimal_face_probe, solve_simplex
from mmot_euler.measures import marginal, plan_cost

G3 = three_point_grid()
FLIP = flip_map(G3)


def _lp(steps, form="full"):
    tg = TimeGrid.unit(steps)
    if form == "full":
        return assemble_mmot_lp(G3, tg, action(tg), FLIP)
    return assemble_mmot_lp(G3, tg, reduced_action(tg, FLIP), FLIP, form="reduced")


def test_sizes():
    lp3 = _lp(3)
    assert len(lp3.columns) == 27 and lp3.n_rows == 12
    assert len(_lp(3, "reduced").columns) == 27 and _lp(3, "reduced").n_rows == 9
    assert len(_lp(4).columns) == 81 and _lp(4, "reduced").n_rows == 12
    assert lp3.columns == sorted(lp3.columns)


def test_column_costs_match_cost_function():
    lp = _lp(3)
    for path, c in zip(lp.columns, lp.objective):
        assert c == sum((b - a) ** 2 for a, b in zip(G3.coords(path), G3.coords(path)[1:]))


def test_identity_single_step_is_free():
    tg = TimeGrid.unit(1)
    ident = EndpointMap.identity(G3)
    sol = solve_simplex(assemble_mmot_lp(G3, tg, action(tg), ident))
    assert sol.optimal and sol.value == 0
    assert set(sol.masses) == {(0, 0), (1, 1), (2, 2)}


@pytest.mark.parametrize("steps,expected", [(2, F(8, 3)), (3, F(2)), (4, F(16, 9)), (5, F(5, 3))])
def test_full_and_reduced_forms_agree(steps, expected):
    full = solve_simplex(_lp(steps))
    red = solve_simplex(_lp(steps, "reduced"))
    assert full.value == red.value == expected
    assert full.residual() == 0 and red.residual() == 0


@pytest.mark.parametrize("steps", [3, 4, 5])
def test_float_mode_matches_rational(steps):
    exact = solve_simplex(_lp(steps)).value
    approx = solve_simplex(_lp(steps), mode="float")
    assert approx.optimal and abs(approx.value - float(exact)) < 1e-9
    assert approx.residual() < 1e-9
    plan = approx.plan()
    assert abs(plan_cost(plan, action(TimeGrid.unit(steps))) - float(exact)) < 1e-8


def test_solution_plan_is_feasible():
    sol = solve_simplex(_lp(4))
    plan = sol.plan()
    for i in range(5):
        assert marginal(plan, i) == (F(1, 3),) * 3
    assert plan_cost(plan, action(TimeGrid.unit(4))) == sol.value


def test_every_column_infinite_is_infeasible():
    # three points at three times on a two-point grid always collide
    grid = SpatialGrid([0, 1])
    lp = assemble_mmot_lp(grid, TimeGrid.unit(2), CostFunction("coulomb"))
    assert lp.skipped_columns == 8 and not lp.columns
    assert solve_simplex(lp).status == "infeasible"
    assert solve_simplex(lp, mode="float").status == "infeasible"


def test_coulomb_on_three_points():
    lp = assemble_mmot_lp(G3, TimeGrid.unit(2), CostFunction("coulomb"))
    sol = solve_simplex(lp)
    # only permutations of (-1,0,1) survive, each with cost 1 + 1 + 1/2
    assert lp.skipped_columns == 27 - 6
    assert sol.value == F(5, 2)


def test_reduced_form_needs_endpoint():
    tg = TimeGrid.unit(2)
    with pytest.raises(InvalidArgument):
        assemble_mmot_lp(G3, tg, action(tg), form="reduced")
    with pytest.raises(InvalidArgument):
        assemble_mmot_lp(G3, tg, action(tg), FLIP, form="sideways")


def test_unknown_mode():
    with pytest.raises(InvalidArgument):
        solve_simplex(_lp(3), mode="decimal")


def test_path_cap():
    tg = TimeGrid.unit(6)
    with pytest.raises(ResourceLimit):
        assemble_mmot_lp(G3, tg, action(tg), FLIP, cap=100)


def test_json_export():
    data = _lp(3).to_json()
    assert len(data["columns"]) == 27 and len(data["rhs"]) == 12
    assert len(data["constraints"]) == 27 * 4
    assert data["rhs"][0] == "1/3"


def test_face_probe_zero_functional():
    lp = _lp(3)
    base = solve_simplex(lp)
    assert optimal_face_probe(lp, base, {}) == (0, 0)


def test_face_probe_n5_matches_delta_family():
    lp = _lp(5)
    base = solve_simplex(lp)
    lo, hi = optimal_face_probe(lp, base, {(1, 2, 2, 2, 2, 1): 1})
    assert (lo, hi) == (0, F(1, 6))
    # the two extremes are realized by the family at delta = -+1/12
    cost = action(TimeGrid.unit(5))
    for delta in (F(-1, 12), F(1, 12)):
        plan = delta_family_plan(5, delta)
        assert plan_cost(plan, cost) == base.value
        assert plan.atoms.get((1, 2, 2, 2, 2, 1), 0) in (lo, hi)


def test_face_probe_float_mode():
    lp = _lp(5)
    base = solve_simplex(lp, mode="float")
    lo, hi = optimal_face_probe(lp, base, lambda p: int(p == (1, 2, 2, 2, 2, 1)))
    assert abs(lo) < 1e-7 and abs(hi - 1 / 6) < 1e-7


@pytest.mark.parametrize("steps", [3, 4, 5, 6])
def test_monge_bruteforce(steps):
    tg = TimeGrid.unit(steps)
    value, paths = monge_bruteforce(G3, tg, action(tg), FLIP)
    assert value == 2 and len(paths) == 3
    assert all(p[-1] == FLIP(p[0]) for p in paths)


def test_monge_bruteforce_reduced_cost_and_cap():
    tg = TimeGrid.unit(3)
    value, _ = monge_bruteforce(G3, tg, reduced_action(tg, FLIP), FLIP)
    assert value == 2
    with pytest.raises(ResourceLimit):
        monge_bruteforce(G3, TimeGrid.unit(12), action(TimeGrid.unit(12)), FLIP)


def test_midpoint_grid_rational_and_float_agree():
    grid = uniform_symmetric_grid(4)
    tg = TimeGrid.unit(3)
    lp = assemble_mmot_lp(grid, tg, make_cost("action", tg), flip_map(grid))
    exact = solve_simplex(lp)
    assert exact.value == 1 and exact.residual() == 0
    assert abs(solve_simplex(lp, mode="float").value - 1) < 1e-9
