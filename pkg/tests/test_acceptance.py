"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are collected and echoed in the pytest terminal summary; running
this file directly with ``python3 tests/test_acceptance.py`` prints them too.
"""
import csv
import io
import random
import time
import xml.etree.ElementTree as ET
from fractions import Fraction as F
from pathlib import Path

import pytest

from mmot_euler.cli import SWEEP_HEADER, cmd_sweep
from mmot_euler.costs import action, make_cost, modified_cost
from mmot_euler.euler import (
    MAPS,
    TrigPathParams,
    branch_tuples,
    delta_family_plan,
    el_residual,
    gerosplan_plan,
    pushforward_uniform,
    solve_discrete_el,
    theorem1_discretized_plan,
)
from mmot_euler.grid import TimeGrid, flip_map, three_point_grid
from mmot_euler.lp import assemble_mmot_lp, monge_bruteforce, optimal_face_probe, solve_simplex
from mmot_euler.measures import (
    TransportPlan,
    extend_plan,
    is_mass_splitting,
    is_monge,
    marginal,
    plan_cost,
    reduce_plan,
    splitting_profile,
)
from mmot_euler.qsqrt3 import QSqrt3
from mmot_euler.render import render_svg

REPORT: list[str] = []
G3 = three_point_grid()
FLIP = flip_map(G3)
GOLDEN = Path(__file__).parent / "golden" / "gerosplan_4.svg"


def report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append(line)
    print(line)
    return ok


def closed_form(steps):
    return (4 + F(4, steps - 1)) / 3


_solutions = {}


def lp_solution(steps):
    if steps not in _solutions:
        tg = TimeGrid.unit(steps)
        lp = assemble_mmot_lp(G3, tg, action(tg), FLIP)
        _solutions[steps] = (lp, solve_simplex(lp))
    return _solutions[steps]


def test_criterion_01_exact_lp_optima():
    values, elapsed = {}, {}
    for steps in range(3, 9):
        start = time.perf_counter()
        values[steps] = lp_solution(steps)[1].value
        elapsed[steps] = time.perf_counter() - start
    exact = all(values[s] == closed_form(s) for s in values)
    small = sum(elapsed[s] for s in range(3, 7))
    large = max(elapsed[7], elapsed[8])
    ok = exact and small < 10 and large < 300
    shown = ", ".join(f"N={s}:{values[s]}" for s in values)
    assert report(1, ok, f"{shown}; N<=6 took {small:.1f}s, N=7,8 max {large:.1f}s")


def test_criterion_02_optimality_certificate():
    bad = []
    for steps in range(3, 9):
        plan = gerosplan_plan(steps)
        feasible = all(marginal(plan, i) == (F(1, 3),) * 3 for i in range(steps + 1))
        cost = plan_cost(plan, action(TimeGrid.unit(steps)))
        if not feasible or cost != lp_solution(steps)[1].value:
            bad.append(steps)
    assert report(2, not bad, "gerosplan cost equals LP optimum, marginals 1/3" + (f"; failed {bad}" if bad else ""))


def test_criterion_03_splitting_strictness():
    parts, ok = [], True
    for steps in (3, 4, 5, 6):
        tg = TimeGrid.unit(steps)
        monge, _ = monge_bruteforce(G3, tg, action(tg), FLIP)
        opt = lp_solution(steps)[1].value
        expected = (monge == opt) if steps == 3 else (monge == 2 and monge > opt)
        ok &= expected
        parts.append(f"N={steps}: monge {monge} vs lp {opt}")
    assert report(3, ok, "; ".join(parts))


def test_criterion_04_uniqueness_parity():
    parts, ok = [], True
    for steps in (4, 5, 6, 7):
        lp, base = lp_solution(steps)
        path = (1,) + (2,) * (steps - 1) + (1,)
        lo, hi = optimal_face_probe(lp, base, {path: 1})
        want = F(0) if steps % 2 == 0 else F(2, 3 * (steps - 1))
        ok &= hi - lo == want
        parts.append(f"N={steps}: [{lo}, {hi}]")
    assert report(4, ok, "; ".join(parts))


def test_criterion_05_monge_endpoint_of_family():
    plan = delta_family_plan(3, F(1, 6))
    monge = all(is_monge(plan, i)[0] for i in range(4))
    cost = plan_cost(plan, action(TimeGrid.unit(3)))
    ok = monge and cost == 2 == lp_solution(3)[1].value
    assert report(5, ok, f"Monge at all times: {monge}; cost {cost}")


def test_criterion_06_sampled_interval_optimizer():
    start = time.perf_counter()
    parts, ok = [], True
    for n in (8, 16):
        g0 = theorem1_discretized_plan(n)
        uniform = all(marginal(g0, i) == (F(1, 2 * n),) * (2 * n) for i in range(4))
        tuples = branch_tuples(n, "gamma0")
        el = all(el_residual(p) == 0 for p, _ in tuples)
        mod = all(modified_cost(p[:3]) == 0 for p, _ in tuples)
        cost = plan_cost(g0, action(TimeGrid.unit(3)))
        close = abs(cost - 1) <= F(4, n)
        split0 = splitting_profile(g0) == (True,) * 4
        g1 = not is_mass_splitting(theorem1_discretized_plan(n, "gamma1"), 0)
        g2 = not is_mass_splitting(theorem1_discretized_plan(n, "gamma2"), 0)
        checks = (uniform, el, mod, close, split0, g1, g2)
        ok &= all(checks)
        parts.append(f"n={n}: cost {cost}, checks {''.join('T' if c else 'F' for c in checks)}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 5
    assert report(6, ok, "; ".join(parts) + f"; {elapsed:.2f}s")


def test_criterion_07_measure_preservation():
    ok = all(
        pushforward_uniform(name, n) == (F(1, 2 * n),) * (2 * n)
        for n in (8, 16)
        for name in ("T1", "T2", "S1", "S2")
    )
    assert report(7, ok, f"{sorted(MAPS)} at n=8,16")


def _random_plan(rng):
    steps = rng.randint(1, 4)
    atoms = {}
    weights = [rng.randint(1, 9) for _ in range(rng.randint(1, 6))]
    for w in weights:
        body = tuple(rng.randint(0, 2) for _ in range(steps))
        path = body + (2 - body[0],)
        atoms[path] = atoms.get(path, 0) + F(w, sum(weights))
    return TransportPlan(G3, TimeGrid.unit(steps), atoms)


def test_criterion_08_property_suites():
    rng = random.Random(8)
    results = {}
    plans = [_random_plan(rng) for _ in range(200)]
    results["marginal sums"] = all(
        sum(marginal(p, i)) == 1 for p in plans for i in range(p.path_length)
    )
    round_trip = True
    for p in plans:
        tg = TimeGrid.unit(p.timegrid.steps)
        r = reduce_plan(p, FLIP)
        round_trip &= extend_plan(r, FLIP) == p
        round_trip &= plan_cost(p, make_cost("action", tg)) == plan_cost(r, make_cost("reduced_action", tg, FLIP))
    results["reduce/extend"] = round_trip
    results["monge iff not splitting"] = all(
        is_monge(p, i)[0] == (not is_mass_splitting(p, i)) for p in plans for i in range(p.path_length)
    )

    def rnd():
        return F(rng.randint(-30, 30), rng.randint(1, 12))

    results["EL residual"] = all(
        el_residual(solve_discrete_el(TrigPathParams(QSqrt3(rnd(), rnd()), QSqrt3(rnd(), rnd()), rng.randint(2, 12)))) == 0
        for _ in range(100)
    )
    identity = True
    for _ in range(1000):
        w0, w1, w2 = rnd(), rnd(), rnd()
        lhs = (w0 - w1) ** 2 + (w1 - w2) ** 2 + (w2 + w0) ** 2 - (w0**2 + w1**2 + w2**2)
        identity &= lhs == modified_cost((w0, w1, w2))
    results["algebraic identity"] = identity
    ok = all(results.values())
    assert report(8, ok, "; ".join(f"{k}: {'ok' if v else 'broken'}" for k, v in results.items()))


def test_criterion_09_sweep_substitute():
    buf = io.StringIO()
    start = time.perf_counter()
    code = cmd_sweep(["three-point", "midpoint:4"], [3, 4, 5], "float", out=buf)
    elapsed = time.perf_counter() - start
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    header_ok = rows[0] == SWEEP_HEADER
    body = rows[1:]
    shape_ok = len(body) == 6 and all(len(r) == len(SWEEP_HEADER) for r in body)
    flags_ok = all(set(r[4]) <= {"T", "F"} and r[4] for r in body)
    ok = code == 0 and header_ok and shape_ok and flags_ok and elapsed < 120
    assert report(9, ok, f"{len(body)} rows, flags {[r[4] for r in body]}, {elapsed:.1f}s")


def test_criterion_10_render_determinism():
    plan = gerosplan_plan(4)
    first, second = render_svg(plan), render_svg(plan)
    identical = first == second
    golden = first == GOLDEN.read_text()
    lines = list(ET.fromstring(first).iter("{http://www.w3.org/2000/svg}polyline"))
    widths = [float(p.get("stroke-width")) for p in lines]
    masses = list(plan.atoms.values())
    ratios = all(
        abs(w / widths[0] - float(m / masses[0])) < 1e-6 for w, m in zip(widths, masses)
    )
    # stated target is 8 polylines; the plan has 9 atoms of mass 1/9 (see notes)
    count_ok = len(lines) == 8
    ok = identical and golden and ratios and count_ok
    assert report(
        10,
        ok,
        f"byte-identical {identical}, golden {golden}, width ratios {ratios}, "
        f"polylines {len(lines)} (expected 8, atoms {len(plan)})",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
