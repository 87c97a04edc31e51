"""Two-phase revised simplex method in exact rational arithmetic.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Bland's rule: the entering
variable is the lowest-index column with negative reduced cost, the leaving
variable is the lowest-index basic variable among ratio-test ties.  Bland's
rule cannot cycle, which matters here because the transport LPs are
massively degenerate.

Rows and the objective are rescaled to integers up front, so reduced costs
are computed with Python ints; only the basis inverse carries Fractions.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import SolverError

log = logging.getLogger(__name__)

# A sparse column: (row indices, coefficients); coefficients None means all ones.
Column = tuple[tuple[int, ...], "tuple | None"]


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible"
    x: dict[int, Fraction] = field(default_factory=dict)
    value: Fraction | None = None
    basis: tuple[int, ...] = ()
    iterations: int = 0


def _denominator_lcm(values) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


class _Tableau:
    """Revised-simplex state: basis list, dense B^-1 and basic values."""

    def __init__(self, columns: list[Column], b: list[Fraction], n: int):
        self.columns = columns
        self.n = n
        self.m = len(b)
        self.binv = [[Fraction(int(i == j)) for j in range(self.m)] for i in range(self.m)]
        self.xb = list(b)
        # artificial variable for row r has index n + r
        self.basis = [n + r for r in range(self.m)]
        self.iterations = 0

    def entering_column(self, j: int) -> list[Fraction]:
        rows, coefs = self.columns[j]
        binv = self.binv
        alpha = [Fraction(0)] * self.m
        if coefs is None:
            for r in rows:
                for i in range(self.m):
                    v = binv[i][r]
                    if v:
                        alpha[i] += v
        else:
            for r, a in zip(rows, coefs):
                for i in range(self.m):
                    v = binv[i][r]
                    if v:
                        alpha[i] += a * v
        return alpha

    def duals(self, cost_of) -> list[Fraction]:
        cb = [cost_of(v) for v in self.basis]
        m = self.m
        y = [Fraction(0)] * m
        for i in range(m):
            c = cb[i]
            if c:
                row = self.binv[i]
                for r in range(m):
                    if row[r]:
                        y[r] += c * row[r]
        return y

    def pivot(self, p: int, j: int, alpha: list[Fraction]) -> None:
        piv = alpha[p]
        rowp = [v / piv for v in self.binv[p]]
        self.binv[p] = rowp
        xp = self.xb[p] / piv
        self.xb[p] = xp
        for i in range(self.m):
            a = alpha[i]
            if i == p or not a:
                continue
            row = self.binv[i]
            for r in range(self.m):
                if rowp[r]:
                    row[r] -= a * rowp[r]
            self.xb[i] -= a * xp
        self.basis[p] = j
        self.iterations += 1

    def ratio_test(self, alpha: list[Fraction]) -> int | None:
        best, best_ratio = None, None
        for i, a in enumerate(alpha):
            if a > 0:
                ratio = self.xb[i] / a
                if (
                    best is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best])
                ):
                    best, best_ratio = i, ratio
        return best


def _reduced_cost_sign_scan(tab: _Tableau, int_cost: list[int], y: list[Fraction], banned):
    """Lowest-index structural column with negative reduced cost, or None."""
    scale = _denominator_lcm(y)
    yi = [int(v * scale) for v in y]
    in_basis = set(tab.basis)
    for j, (rows, coefs) in enumerate(tab.columns):
        if j in in_basis or j in banned:
            continue
        if coefs is None:
            s = 0
            for r in rows:
                s += yi[r]
        else:
            s = 0
            for r, a in zip(rows, coefs):
                s += yi[r] * a
        if int_cost[j] * scale < s:
            return j
    return None


def _run(tab: _Tableau, int_cost: list[int], cost_of, max_iter: int, banned=frozenset()):
    while True:
        if tab.iterations >= max_iter:
            raise SolverError(f"simplex exceeded {max_iter} iterations")
        y = tab.duals(cost_of)
        j = _reduced_cost_sign_scan(tab, int_cost, y, banned)
        if j is None:
            return
        alpha = tab.entering_column(j)
        p = tab.ratio_test(alpha)
        if p is None:
            raise SolverError("LP is unbounded")
        tab.pivot(p, j, alpha)


def solve_standard_form(
    c: Sequence,
    columns: Sequence[Column],
    b: Sequence,
    max_iter: int = 1_000_000,
) -> SimplexResult:
    """Minimize c.x subject to A x = b, x >= 0, exactly.

    ``columns[j]`` lists the nonzero entries of column j of A.  Redundant
    equality rows are tolerated: their artificial variables stay basic at
    level zero.
    """
    n, m = len(columns), len(b)
    if len(c) != n:
        raise ValueError("objective and column counts differ")

    # integer rescaling of every row and of the objective
    row_entries: list[list[Fraction]] = [[] for _ in range(m)]
    for rows, coefs in columns:
        if coefs is not None:
            for r, a in zip(rows, coefs):
                row_entries[r].append(Fraction(a))
    row_scale = [_denominator_lcm(vals) for vals in row_entries]
    bb = [Fraction(b[r]) * row_scale[r] for r in range(m)]
    row_sign = [(-1 if v < 0 else 1) for v in bb]
    bb = [abs(v) for v in bb]
    int_cols: list[Column] = []
    for rows, coefs in columns:
        if coefs is None and all(row_scale[r] == 1 and row_sign[r] == 1 for r in rows):
            int_cols.append((tuple(rows), None))
        else:
            cs = coefs if coefs is not None else (1,) * len(rows)
            int_cols.append(
                (
                    tuple(rows),
                    tuple(int(Fraction(a) * row_scale[r]) * row_sign[r] for r, a in zip(rows, cs)),
                )
            )
    cfrac = [Fraction(v) for v in c]
    cscale = _denominator_lcm(cfrac)
    cint = [int(v * cscale) for v in cfrac]

    tab = _Tableau(int_cols, bb, n)

    # phase 1: minimize the sum of artificials
    zero_cost = [0] * n
    _run(tab, zero_cost, lambda v: Fraction(int(v >= n)), max_iter)
    infeas = sum(tab.xb[i] for i in range(m) if tab.basis[i] >= n)
    if infeas > 0:
        log.debug("phase 1 ended with infeasibility %s", infeas)
        return SimplexResult("infeasible", iterations=tab.iterations)

    # drive zero-level artificials out of the basis where possible
    for p in range(m):
        if tab.basis[p] < n:
            continue
        in_basis = set(tab.basis)
        rowp = tab.binv[p]
        for j, (rows, coefs) in enumerate(int_cols):
            if j in in_basis:
                continue
            cs = coefs if coefs is not None else (1,) * len(rows)
            if sum(rowp[r] * a for r, a in zip(rows, cs)) != 0:
                tab.pivot(p, j, tab.entering_column(j))
                break
        # otherwise the row is redundant and its artificial stays at zero

    # phase 2
    _run(tab, cint, lambda v: Fraction(cint[v]) if v < n else Fraction(0), max_iter)

    x = {v: tab.xb[i] for i, v in enumerate(tab.basis) if v < n and tab.xb[i] != 0}
    value = sum((cfrac[j] * xj for j, xj in x.items()), Fraction(0))
    basis = tuple(sorted(v for v in tab.basis if v < n))
    log.debug("simplex finished after %d pivots, value %s", tab.iterations, value)
    return SimplexResult("optimal", x, value, basis, tab.iterations)
