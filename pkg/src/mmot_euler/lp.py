"""The Kantorovich linear program over discrete path space.

One column per enumerated path, one equality row per (time index, grid
point) fixing the marginal mass ``1/|grid|``.  The full form keeps the last
time point and enumerates only endpoint-respecting paths; the reduced form
drops it and evaluates the cost on the extended path.
"""
from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .costs import CostFunction
from .errors import InvalidArgument, SolverError
from .grid import (
    DEFAULT_PATH_CAP,
    EndpointMap,
    Path,
    SpatialGrid,
    TimeGrid,
    check_cap,
    enumerate_paths,
    format_fraction,
    iter_paths,
)
from .measures import TransportPlan
from .simplex import solve_standard_form

log = logging.getLogger(__name__)

FORMS = ("full", "reduced")
FLOAT_TOL = 1e-9


@dataclass
class LinearProgram:
    grid: SpatialGrid
    timegrid: TimeGrid
    cost: CostFunction
    endpoint: EndpointMap | None
    form: str
    columns: list[Path]
    objective: list
    rhs: list[Fraction]
    # rows that are implied by the others (total-mass redundancy), dropped by the solvers
    redundant_rows: tuple[int, ...] = ()
    skipped_columns: int = 0

    @property
    def n_points(self) -> int:
        return len(self.grid)

    @property
    def n_times(self) -> int:
        """Number of constrained time indices (path length)."""
        return len(self.columns[0]) if self.columns else 0

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    def row_index(self, t: int, k: int) -> int:
        return t * self.n_points + k

    def row_label(self, r: int) -> tuple[int, int]:
        return divmod(r, self.n_points)

    def column_rows(self, j: int) -> tuple[int, ...]:
        n = self.n_points
        return tuple(t * n + k for t, k in enumerate(self.columns[j]))

    def triplets(self) -> list[tuple[int, int, int]]:
        """Constraint matrix as (row, column, value) triplets."""
        return [(r, j, 1) for j in range(len(self.columns)) for r in self.column_rows(j)]

    def to_json(self) -> dict:
        def fmt(v):
            return format_fraction(v) if isinstance(v, (int, Fraction)) else v

        return {
            "form": self.form,
            "grid": self.grid.to_json(),
            "times": self.timegrid.to_json(),
            "cost": self.cost.to_json(),
            "columns": [list(p) for p in self.columns],
            "objective": [fmt(v) for v in self.objective],
            "constraints": [list(t) for t in self.triplets()],
            "rhs": [fmt(v) for v in self.rhs],
            "rows": [list(self.row_label(r)) for r in range(self.n_rows)],
            "redundant_rows": list(self.redundant_rows),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json()) + "\n"


def assemble_mmot_lp(
    grid: SpatialGrid,
    timegrid: TimeGrid,
    cost: CostFunction,
    endpoint: EndpointMap | None = None,
    form: str = "full",
    cap: int = DEFAULT_PATH_CAP,
) -> LinearProgram:
    """Build the marginal-constrained LP; columns in lexicographic path order."""
    if form not in FORMS:
        raise InvalidArgument(f"form must be one of {FORMS}")
    n = len(grid)
    if form == "full":
        paths = enumerate_paths(grid, timegrid, endpoint, cap=cap)

        def value(path):
            if cost.reduced:
                return cost(grid.coords(path[:-1]))
            return cost(grid.coords(path))

    else:
        if endpoint is None:
            raise InvalidArgument("the reduced form needs an endpoint map")
        length = len(timegrid) - 1
        check_cap(n**length, cap)
        paths = list(iter_paths(n, length))
        perm = endpoint.permutation

        def value(path):
            if cost.reduced:
                return cost(grid.coords(path))
            return cost(grid.coords(path + (perm[path[0]],)))

    columns, objective, skipped = [], [], 0
    for path in paths:
        v = value(path)
        if isinstance(v, float) and math.isinf(v):
            skipped += 1
            continue
        columns.append(path)
        objective.append(v)
    n_times = len(paths[0])
    rhs = [Fraction(1, n)] * (n * n_times)
    redundant = tuple(t * n + (n - 1) for t in range(1, n_times))
    return LinearProgram(grid, timegrid, cost, endpoint, form, columns, objective, rhs, redundant, skipped)


@dataclass
class LpSolution:
    lp: LinearProgram
    status: str  # "optimal" | "infeasible"
    mode: str
    masses: dict[Path, object] = field(default_factory=dict)
    value: object = None
    basis: tuple[Path, ...] = ()
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def plan(self) -> TransportPlan:
        if not self.optimal:
            raise SolverError(f"no plan: LP status is {self.status}")
        lp = self.lp
        if self.mode == "rational":
            return TransportPlan(lp.grid, lp.timegrid, self.masses, "rational")
        return TransportPlan.from_float_masses(lp.grid, lp.timegrid, self.masses)

    def residual(self):
        """Largest absolute violation over all marginal rows, dropped rows included."""
        lp = self.lp
        lhs = [0] * lp.n_rows
        for path, mass in self.masses.items():
            for t, k in enumerate(path):
                lhs[t * lp.n_points + k] += mass
        return max(abs(a - b) for a, b in zip(lhs, lp.rhs))


def _kept_rows(lp: LinearProgram) -> list[int]:
    dropped = set(lp.redundant_rows)
    return [r for r in range(lp.n_rows) if r not in dropped]


def _standard_columns(lp: LinearProgram, kept: list[int]):
    remap = {r: i for i, r in enumerate(kept)}
    cols = []
    for j in range(len(lp.columns)):
        rows = tuple(remap[r] for r in lp.column_rows(j) if r in remap)
        cols.append((rows, None))
    return cols


def _solve_rational(lp, c, extra_row=None, extra_rhs=None):
    kept = _kept_rows(lp)
    cols = _standard_columns(lp, kept)
    b = [lp.rhs[r] for r in kept]
    if extra_row is not None:
        r = len(b)
        b.append(extra_rhs)
        cols = [
            (rows + (r,), (1,) * len(rows) + (extra_row[j],)) if extra_row[j] else (rows, None)
            for j, (rows, _) in enumerate(cols)
        ]
    return solve_standard_form(c, cols, b)


def _float_matrix(lp: LinearProgram, kept: list[int]):
    remap = {r: i for i, r in enumerate(kept)}
    rows, cols = [], []
    for j in range(len(lp.columns)):
        for r in lp.column_rows(j):
            if r in remap:
                rows.append(remap[r])
                cols.append(j)
    data = np.ones(len(rows))
    return sparse.csr_matrix((data, (rows, cols)), shape=(len(kept), len(lp.columns)))


def _solve_float(lp, c, extra_ub=None, extra_ub_rhs=None, time_limit=60.0):
    kept = _kept_rows(lp)
    a_eq = _float_matrix(lp, kept)
    b_eq = np.array([float(lp.rhs[r]) for r in kept])
    kwargs = {}
    if extra_ub is not None:
        kwargs = {"A_ub": np.array([extra_ub], dtype=float), "b_ub": np.array([extra_ub_rhs])}
    res = linprog(
        np.asarray(c, dtype=float),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0, None),
        method="highs-ds",
        options={"time_limit": time_limit, "primal_feasibility_tolerance": FLOAT_TOL},
        **kwargs,
    )
    return res


def solve_simplex(lp: LinearProgram, mode: str = "rational", time_limit: float = 60.0) -> LpSolution:
    """Solve the LP to a vertex.

    ``mode="rational"`` runs the exact Bland-rule simplex and reports the
    optimal value as a Fraction.  ``mode="float"`` delegates to the HiGHS
    dual simplex with 1e-9 feasibility tolerance.
    """
    if not lp.columns:
        return LpSolution(lp, "infeasible", mode)
    if mode == "rational":
        res = _solve_rational(lp, lp.objective)
        if res.status != "optimal":
            return LpSolution(lp, res.status, mode, iterations=res.iterations)
        masses = {lp.columns[j]: v for j, v in res.x.items()}
        basis = tuple(lp.columns[j] for j in res.basis)
        return LpSolution(lp, "optimal", mode, masses, res.value, basis, res.iterations)
    if mode == "float":
        res = _solve_float(lp, [float(v) for v in lp.objective], time_limit=time_limit)
        if res.status == 2:
            return LpSolution(lp, "infeasible", mode)
        if res.status == 1:
            return LpSolution(lp, "resource-limit", mode)
        if res.status != 0:
            raise SolverError(f"HiGHS failed: {res.message}")
        x = res.x
        masses = {lp.columns[j]: float(x[j]) for j in np.flatnonzero(x > FLOAT_TOL)}
        basis = tuple(masses)
        return LpSolution(lp, "optimal", mode, masses, float(res.fun), basis, int(res.nit))
    raise InvalidArgument(f"unknown arithmetic mode {mode!r}")


Functional = Mapping[Path, object] | Callable[[Path], object]


def _functional_vector(lp: LinearProgram, functional: Functional) -> list:
    if callable(functional):
        return [functional(p) for p in lp.columns]
    return [functional.get(p, 0) for p in lp.columns]


def optimal_face_probe(lp: LinearProgram, baseline: LpSolution, functional: Functional) -> tuple:
    """Range ``[min, max]`` of a linear functional over the optimal face.

    The objective is pinned to the baseline optimum by an extra equality row
    (exact in rational mode) and the functional is minimized and maximized.
    """
    if not baseline.optimal:
        raise InvalidArgument("the baseline solution is not optimal")
    f = _functional_vector(lp, functional)
    if baseline.mode == "rational":
        f = [Fraction(v) for v in f]
        lo = _solve_rational(lp, f, lp.objective, baseline.value)
        hi = _solve_rational(lp, [-v for v in f], lp.objective, baseline.value)
        if lo.status != "optimal" or hi.status != "optimal":
            raise SolverError("pinned LP infeasible; baseline value is not the optimum")
        return lo.value, -hi.value
    obj = [float(v) for v in lp.objective]
    bound = float(baseline.value) + FLOAT_TOL * max(1.0, abs(float(baseline.value)))
    lo = _solve_float(lp, [float(v) for v in f], obj, bound)
    hi = _solve_float(lp, [-float(v) for v in f], obj, bound)
    if lo.status != 0 or hi.status != 0:
        raise SolverError("pinned LP failed in float mode")
    return float(lo.fun), -float(hi.fun)


def monge_bruteforce(
    grid: SpatialGrid,
    timegrid: TimeGrid,
    cost: CostFunction,
    endpoint: EndpointMap | None = None,
    cap: int = 10**6,
) -> tuple[Fraction, list[Path]]:
    """Exact optimum over plans with one path of mass 1/|grid| per start point.

    Each time slice is a permutation of the grid; with an endpoint map the
    last slice is fixed to it.  Returns the minimal expected cost and the
    minimizing paths, the first minimizer in lexicographic search order.
    """
    n = len(grid)
    free_slices = len(timegrid) - 1 - (1 if endpoint is not None else 0)
    check_cap(math.factorial(n) ** free_slices, cap, "assignments")
    perms = list(itertools.permutations(range(n)))
    last = endpoint.permutation if endpoint is not None else None
    cache: dict[Path, object] = {}

    def path_cost(path):
        v = cache.get(path)
        if v is None:
            v = cost(grid.coords(path[:-1]) if cost.reduced else grid.coords(path))
            cache[path] = v
        return v

    best, best_paths = None, None
    for slices in itertools.product(perms, repeat=free_slices):
        paths = []
        total = 0
        for k in range(n):
            path = (k,) + tuple(s[k] for s in slices)
            if last is not None:
                path += (last[k],)
            paths.append(path)
            total += path_cost(path)
        if best is None or total < best:
            best, best_paths = total, paths
    return best * Fraction(1, n) if not isinstance(best, float) else best / n, best_paths
