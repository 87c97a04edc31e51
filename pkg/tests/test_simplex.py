import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from mmot_euler.simplex import solve_standard_form


def _dense(columns, m):
    a = [[F(0)] * len(columns) for _ in range(m)]
    for j, (rows, coefs) in enumerate(columns):
        for r, v in zip(rows, coefs or (1,) * len(rows)):
            a[r][j] += F(v)
    return a


def _vertex_enumeration(c, columns, b):
    """Best basic feasible solution by trying every column subset (tiny LPs only)."""
    a = _dense(columns, len(b))
    m, n = len(b), len(columns)
    best = None
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(n), size):
            x = _least_squares_exact(a, b, subset)
            if x is None or any(v < 0 for v in x):
                continue
            value = sum(F(c[j]) * v for j, v in zip(subset, x))
            if best is None or value < best:
                best = value
    return best


def _least_squares_exact(a, b, subset):
    # Gaussian elimination on the columns in subset; None if inconsistent or singular
    m, k = len(a), len(subset)
    rows = [[a[i][j] for j in subset] + [F(b[i])] for i in range(m)]
    piv_cols, r = [], 0
    for col in range(k):
        p = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if p is None:
            return None
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [v / rows[r][col] for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [u - f * w for u, w in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, m)):
        return None
    return [rows[i][k] for i in range(k)]


def _transport_problem(rng, n):
    """Balanced n x n assignment polytope with random integer costs."""
    cols, c = [], []
    for i in range(n):
        for j in range(n):
            cols.append(((i, n + j), None))
            c.append(rng.randint(0, 9))
    b = [F(1, n)] * (2 * n)
    return c, cols, b


def test_trivial_lp():
    res = solve_standard_form([1, 2], [((0,), None), ((0,), None)], [F(1)])
    assert res.status == "optimal" and res.value == 1 and res.x == {0: 1}


def test_infeasible_lp():
    # x0 = 1 and x0 = 2 together
    res = solve_standard_form([0], [((0, 1), None)], [1, 2])
    assert res.status == "infeasible"


def test_negative_rhs_and_fractional_coefficients():
    # -x0/2 - x1 = -1, minimize x0 + x1  ->  x0 = 2 costs 2, x1 = 1 costs 1
    res = solve_standard_form([1, 1], [((0,), (F(-1, 2),)), ((0,), (-1,))], [-1])
    assert res.value == 1 and res.x == {1: 1}


@pytest.mark.parametrize("seed", range(12))
def test_agrees_with_vertex_enumeration(seed):
    rng = random.Random(seed)
    c, cols, b = _transport_problem(rng, 3)
    res = solve_standard_form(c, cols, b)
    assert res.status == "optimal"
    assert res.value == _vertex_enumeration(c, cols, b)


@pytest.mark.parametrize("seed", range(20))
def test_agrees_with_highs(seed):
    rng = random.Random(100 + seed)
    m, n = rng.randint(2, 5), rng.randint(4, 10)
    cols, c = [], []
    x_feas = [F(rng.randint(0, 3)) for _ in range(n)]
    for _ in range(n):
        rows = tuple(sorted(rng.sample(range(m), rng.randint(1, m))))
        coefs = tuple(F(rng.randint(-3, 4), rng.randint(1, 3)) or F(1) for _ in rows)
        cols.append((rows, coefs))
        c.append(F(rng.randint(0, 8)))
    a = _dense(cols, m)
    b = [sum(a[i][j] * x_feas[j] for j in range(n)) for i in range(m)]
    res = solve_standard_form(c, cols, b)
    ref = linprog(
        [float(v) for v in c],
        A_eq=np.array(a, dtype=float),
        b_eq=np.array(b, dtype=float),
        bounds=(0, None),
        method="highs",
    )
    assert res.status == "optimal"
    if ref.status == 0:
        assert abs(float(res.value) - ref.fun) < 1e-7
        for i in range(m):
            assert sum(a[i][j] * res.x.get(j, 0) for j in range(n)) == b[i]
