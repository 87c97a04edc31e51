"""Cost functions on paths and configurations.

Every cost is a plain function of a coordinate tuple; :class:`CostFunction`
bundles a kind with its parameters so that LP assembly and the CLI can pass
costs around by value.  All formulas stay exact on Fraction inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InvalidArgument
from .grid import EndpointMap, TimeGrid, to_fraction

COST_KINDS = (
    "action",
    "reduced_action",
    "modified_action",
    "barycenter",
    "coulomb",
    "frenkel_kontorova",
    "cubic_spline",
)

# Coulomb cost at coincident points; LP assembly skips such columns.
INFINITE_COST = math.inf


def action_cost(path: Sequence, timegrid: TimeGrid):
    """Sum of |w_i - w_{i-1}|^2 / (t_i - t_{i-1})."""
    if len(path) != len(timegrid):
        raise InvalidArgument(f"path has {len(path)} points, time grid has {len(timegrid)}")
    total = 0
    for a, b, dt in zip(path, path[1:], timegrid.stepsizes):
        total += (b - a) * (b - a) / dt
    return total


def reduced_cost(path: Sequence, timegrid: TimeGrid, endpoint: EndpointMap):
    """Action of the path extended by its forced endpoint g(w_0)."""
    if len(path) != len(timegrid) - 1:
        raise InvalidArgument(
            f"reduced path needs {len(timegrid) - 1} points, got {len(path)}"
        )
    return action_cost(tuple(path) + (endpoint.apply_point(path[0]),), timegrid)


def modified_cost(path3: Sequence):
    """(w0 - w1 + w2)^2.

    On three unit steps with the flip endpoint this differs from the reduced
    action only by marginal-dependent terms w0^2 + w1^2 + w2^2.
    """
    if len(path3) != 3:
        raise InvalidArgument("modified cost takes a triple (w0, w1, w2)")
    s = path3[0] - path3[1] + path3[2]
    return s * s


def _check_weights(weights: Sequence, n: int) -> tuple:
    ws = tuple(weights)
    if len(ws) != n:
        raise InvalidArgument(f"{len(ws)} weights for {n} points")
    if any(w <= 0 for w in ws):
        raise InvalidArgument("barycenter weights must be positive")
    exact = all(isinstance(w, (int, Fraction)) for w in ws)
    total = sum(ws)
    if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
        raise InvalidArgument(f"barycenter weights sum to {total}, not 1")
    return ws


def barycenter_cost(points: Sequence, weights: Sequence | None = None):
    """sum_i l_i |x_i - B(x)|^2 with B(x) = sum_i l_i x_i; equal weights by default."""
    n = len(points)
    if weights is None:
        weights = (Fraction(1, n),) * n
    ws = _check_weights(weights, n)
    bary = sum(w * x for w, x in zip(ws, points))
    return sum(w * (x - bary) * (x - bary) for w, x in zip(ws, points))


def coulomb_cost(points: Sequence):
    """sum_{i<j} 1/|x_i - x_j|, or INFINITE_COST when two points coincide."""
    total = 0
    for a, b in combinations(points, 2):
        if a == b:
            return INFINITE_COST
        r = abs(b - a)
        if isinstance(r, int):
            r = Fraction(r)
        total += 1 / r
    return total


def _fk_potential(r):
    return r**4 / 4 - r**3 / 3


def frenkel_kontorova_cost(points: Sequence):
    """sum_{i<j} v(|x_i - x_j|) with v(r) = r^4/4 - r^3/3."""
    total = 0
    for a, b in combinations(points, 2):
        r = abs(b - a)
        if isinstance(r, int):
            r = Fraction(r)
        total += _fk_potential(r)
    return total


def cubic_spline_cost(points: Sequence):
    """sum of squared second differences."""
    total = 0
    for a, b, c in zip(points, points[1:], points[2:]):
        d = a - 2 * b + c
        total += d * d
    return total


@dataclass(frozen=True)
class CostFunction:
    """A cost kind together with its parameters, callable on coordinate tuples."""

    kind: str
    timegrid: TimeGrid | None = None
    endpoint: EndpointMap | None = None
    weights: tuple | None = field(default=None)

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise InvalidArgument(f"unknown cost kind {self.kind!r}")
        if self.kind in ("action", "reduced_action") and self.timegrid is None:
            raise InvalidArgument(f"{self.kind} cost needs a time grid")
        if self.kind == "reduced_action" and self.endpoint is None:
            raise InvalidArgument("reduced_action cost needs an endpoint map")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))
            if any(w <= 0 for w in self.weights):
                raise InvalidArgument("barycenter weights must be positive")

    @property
    def reduced(self) -> bool:
        """True if the cost expects paths with the endpoint already folded in."""
        return self.kind in ("reduced_action", "modified_action")

    def __call__(self, coords: Sequence):
        kind = self.kind
        if kind == "action":
            return action_cost(coords, self.timegrid)
        if kind == "reduced_action":
            return reduced_cost(coords, self.timegrid, self.endpoint)
        if kind == "modified_action":
            return modified_cost(coords)
        if kind == "barycenter":
            return barycenter_cost(coords, self.weights)
        if kind == "coulomb":
            return coulomb_cost(coords)
        if kind == "frenkel_kontorova":
            return frenkel_kontorova_cost(coords)
        return cubic_spline_cost(coords)

    def on_indices(self, path: Sequence[int], grid) -> object:
        return self(grid.coords(path))

    def to_json(self) -> dict:
        data: dict = {"kind": self.kind}
        if self.weights is not None:
            data["weights"] = [str(to_fraction(w)) for w in self.weights]
        return data


def action(timegrid: TimeGrid) -> CostFunction:
    return CostFunction("action", timegrid=timegrid)


def reduced_action(timegrid: TimeGrid, endpoint: EndpointMap) -> CostFunction:
    return CostFunction("reduced_action", timegrid=timegrid, endpoint=endpoint)


def make_cost(
    kind: str,
    timegrid: TimeGrid | None = None,
    endpoint: EndpointMap | None = None,
    weights: Sequence | None = None,
) -> CostFunction:
    """Build a cost from its kind name, ignoring parameters the kind does not use."""
    if kind == "action":
        return action(timegrid)
    if kind == "reduced_action":
        return reduced_action(timegrid, endpoint)
    if kind == "barycenter":
        return CostFunction(kind, weights=tuple(weights) if weights is not None else None)
    return CostFunction(kind)
