"""Closed-form optimizers of the discrete generalized Euler problem.

Two settings are covered:

* the three-point grid {-1, 0, 1} with N unit steps and the flip endpoint,
  where the optimal plan, its cost and (for odd N) a one-parameter family
  of further optimizers are known explicitly;
* the interval [-1, 1] with three unit steps, where the optimizer is
  concentrated on solutions of the discrete Euler-Lagrange equation with
  pressure x^2/2 and can be written through piecewise linear
  measure-preserving maps.  :func:`theorem1_discretized_plan` samples it on
  a midpoint grid in a way that keeps all marginals exactly uniform.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Sequence

from .errors import InvalidArgument
from .grid import TimeGrid, three_point_grid, to_fraction, uniform_symmetric_grid
from .measures import TransportPlan, plan_from_atoms
from .qsqrt3 import SQRT3, QSqrt3

# index of -1, 0, 1 in the three-point grid
_IDX = {-1: 0, 0: 1, 1: 2}


def _three_point_path(values: Sequence[int]) -> tuple[int, ...]:
    return tuple(_IDX[v] for v in values)


def _outer_path(sign: int, zero_at: int, steps: int) -> tuple[int, ...]:
    """sign * (1, ..., 1, 0, -1, ..., -1) with the 0 at time ``zero_at``."""
    vals = [sign] * zero_at + [0] + [-sign] * (steps - zero_at)
    return _three_point_path(vals)


def _green_path(sign: int, steps: int) -> tuple[int, ...]:
    return _three_point_path([0] + [sign] * (steps - 1) + [0])


def gerosplan_plan(steps: int) -> TransportPlan:
    """The splitting optimizer on {-1, 0, 1} for ``steps`` >= 3 unit steps.

    Outer mass crosses the middle in N - 1 equal pieces, one at each
    interior time; the middle mass vacates 0 only partially.
    """
    return delta_family_plan(steps, Fraction(0))


def delta_family_plan(steps: int, delta) -> TransportPlan:
    """The optimizer family obtained by shifting mass +-delta between outer paths.

    Only odd ``steps`` admit delta != 0; at delta = 1/(3(N-1)) and N = 3 the
    plan is of Monge form.
    """
    N = steps
    if isinstance(N, bool) or not isinstance(N, int) or N < 3:
        raise InvalidArgument(f"need at least 3 steps, got {steps!r}")
    delta = to_fraction(delta)
    base = Fraction(1, 3 * (N - 1))
    if abs(delta) > base:
        raise InvalidArgument(f"|delta| must not exceed {base}")
    if N % 2 == 0 and delta != 0:
        raise InvalidArgument("for even N only delta = 0 satisfies the marginal constraints")
    atoms = []
    for i in range(1, N):
        shift = delta if i % 2 == 1 else -delta
        atoms.append((_outer_path(1, i, N), base + shift))
        atoms.append((_outer_path(-1, i, N), base - shift))
    atoms.append((_green_path(1, N), base + delta))
    atoms.append((_green_path(-1, N), base - delta))
    atoms.append((_three_point_path([0] * (N + 1)), Fraction(N - 3, 3 * (N - 1))))
    return plan_from_atoms(three_point_grid(), TimeGrid.unit(N), atoms)


@dataclass(frozen=True)
class CostBounds:
    no_split_optimum: Fraction
    middle_static_lower_bound: Fraction
    split_optimum: Fraction
    steps: int


def cost_bounds(steps: int) -> CostBounds:
    """Costs on {-1, 0, 1}: best Monge plan, plan with a static middle, splitting optimum."""
    if steps < 3:
        raise InvalidArgument("cost bounds need at least 3 steps")
    return CostBounds(
        no_split_optimum=Fraction(2),
        middle_static_lower_bound=Fraction(8, 3),
        split_optimum=(4 + Fraction(4, steps - 1)) / 3,
        steps=steps,
    )


# -- discrete Euler-Lagrange paths ------------------------------------------


@dataclass(frozen=True)
class PressureFunction:
    """p(x) = x^2 / 2."""

    def __call__(self, x):
        return x * x / 2

    def derivative(self, x):
        return x


QUADRATIC_PRESSURE = PressureFunction()

# cos(n pi/3) and sin(n pi/3) for n mod 6
_COS = (Fraction(1), Fraction(1, 2), Fraction(-1, 2), Fraction(-1), Fraction(-1, 2), Fraction(1, 2))
_SIN = (
    QSqrt3(0, 0),
    QSqrt3(0, Fraction(1, 2)),
    QSqrt3(0, Fraction(1, 2)),
    QSqrt3(0, 0),
    QSqrt3(0, Fraction(-1, 2)),
    QSqrt3(0, Fraction(-1, 2)),
)


@dataclass(frozen=True)
class TrigPathParams:
    x: QSqrt3
    v: QSqrt3
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "x", QSqrt3.coerce(self.x))
        object.__setattr__(self, "v", QSqrt3.coerce(self.v))
        if self.steps < 0:
            raise InvalidArgument("steps must be nonnegative")


def solve_discrete_el(params: TrigPathParams) -> tuple[QSqrt3, ...]:
    """w_n = x cos(n pi/3) + v sin(n pi/3) for n = 0..N, exactly."""
    return tuple(
        params.x * _COS[n % 6] + params.v * _SIN[n % 6] for n in range(params.steps + 1)
    )


def el_residual(path: Sequence, pressure: PressureFunction = QUADRATIC_PRESSURE):
    """max_i |w_{i+1} - 2 w_i + w_{i-1} + p'(w_i)| over interior times."""
    if len(path) < 3:
        raise InvalidArgument("the Euler-Lagrange residual needs at least 3 points")
    res = [
        abs(path[i + 1] - 2 * path[i] + path[i - 1] + pressure.derivative(path[i]))
        for i in range(1, len(path) - 1)
    ]
    return max(res)


def velocity_from_path(path: Sequence) -> QSqrt3:
    """Central-difference initial velocity (w_1 - w_{-1}) / sqrt3 with w_{-1} = w_0 - w_1."""
    if len(path) < 2:
        raise InvalidArgument("need at least 2 points")
    return QSqrt3.coerce(2 * path[1] - path[0]) / SQRT3


# -- piecewise linear maps on [-1, 1] ---------------------------------------

# (slope, intercept) for x >= 0 and for x < 0
_MAPS: dict[str, tuple[tuple[int, int], tuple[int, int]]] = {
    "T1": ((2, -1), (2, 1)),
    "T2": ((1, -1), (1, 1)),
    "S1": ((-1, 1), (-1, -1)),
    "S2": ((-2, 1), (-2, -1)),
    "id": ((1, 0), (1, 0)),
    "neg": ((-1, 0), (-1, 0)),
}


def _branch(name: str, x) -> tuple[int, int]:
    right, left = _MAPS[name]
    return right if x >= 0 else left


def _apply(name: str, x):
    x = to_fraction(x) if not isinstance(x, QSqrt3) else x
    if abs(x) > 1:
        raise InvalidArgument(f"{x} is outside [-1, 1]")
    slope, intercept = _branch(name, x)
    return slope * x + intercept


def map_T1(x):
    """Expand and mix: 2x - 1 on [0, 1], 2x + 1 on [-1, 0)."""
    return _apply("T1", x)


def map_T2(x):
    """T1(x) - x."""
    return _apply("T2", x)


def map_S1(x):
    """Flip each block: 1 - x on [0, 1], -1 - x on [-1, 0)."""
    return _apply("S1", x)


def map_S2(x):
    """S1(x) - x."""
    return _apply("S2", x)


MAPS: dict[str, Callable] = {"T1": map_T1, "T2": map_T2, "S1": map_S1, "S2": map_S2}

COMPONENTS = {"gamma1": ("T1", "T2"), "gamma2": ("S1", "S2")}
COMPONENT_NAMES = ("gamma0", "gamma1", "gamma2")


def _check_resolution(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2 or n % 2:
        raise InvalidArgument(f"resolution must be an even integer >= 2, got {n!r}")


def parameter_pieces(n: int) -> list[tuple[Fraction, Fraction]]:
    """The 4n intervals of width 1/(2n) partitioning [-1, 1]."""
    _check_resolution(n)
    w = Fraction(1, 2 * n)
    return [(-1 + k * w, -1 + (k + 1) * w) for k in range(4 * n)]


def pushforward_uniform(name: str, n: int) -> tuple[Fraction, ...]:
    """Image of the uniform probability on [-1, 1] under a map, per subcell of width 1/n.

    Each parameter piece is mapped affinely (the maps switch branch only at
    0, a piece boundary) and its mass spread over the subcells it covers in
    proportion to overlap.
    """
    pieces = parameter_pieces(n)
    piece_mass = Fraction(1, 4 * n)
    out = [Fraction(0)] * (2 * n)
    for a, b in pieces:
        slope, intercept = _branch(name, (a + b) / 2)
        lo, hi = sorted((slope * a + intercept, slope * b + intercept))
        length = hi - lo
        j0 = max(0, floor((lo + 1) * n))
        j1 = min(2 * n - 1, floor((hi + 1) * n))
        for j in range(j0, j1 + 1):
            c0, c1 = Fraction(j, n) - 1, Fraction(j + 1, n) - 1
            overlap = min(hi, c1) - max(lo, c0)
            if overlap > 0:
                out[j] += piece_mass * overlap / length
    return tuple(out)


@dataclass(frozen=True)
class ContinuousPlanSpec:
    """The continuous optimizer (or one of its two building blocks).

    Mass at x in [-1, 1] (density 1/2) follows the discrete Euler-Lagrange
    paths with initial velocity +-(3|x| - 2)/sqrt3; ``gamma0`` uses both
    signs with weight 1/2, ``gamma1``/``gamma2`` one sign each, chosen by the
    side of 0 that x lies on.
    """

    component: str = "gamma0"

    def __post_init__(self):
        if self.component not in COMPONENT_NAMES:
            raise InvalidArgument(f"component must be one of {COMPONENT_NAMES}")

    @staticmethod
    def speed(x) -> QSqrt3:
        x = to_fraction(x)
        return QSqrt3.coerce(3 * abs(x) - 2) / SQRT3

    def branches(self, x) -> list[tuple[Fraction, QSqrt3]]:
        """(weight, initial velocity) pairs for the mass starting at x."""
        s = self.speed(x)
        plus_first = to_fraction(x) >= 0
        if self.component == "gamma0":
            return [(Fraction(1, 2), s), (Fraction(1, 2), -s)]
        sign = plus_first if self.component == "gamma1" else not plus_first
        return [(Fraction(1), s if sign else -s)]

    def paths(self, x, steps: int = 3) -> list[tuple[Fraction, tuple[QSqrt3, ...]]]:
        return [
            (w, solve_discrete_el(TrigPathParams(to_fraction(x), v, steps)))
            for w, v in self.branches(x)
        ]


def representatives(n: int) -> list[Fraction]:
    """One sample point per subcell of width 1/n, a quarter cell in from the edge nearer 0.

    With this offset the slope +-2 maps send every sample to a subcell
    midpoint and the slope +-1 maps to a quarter point, so no image sits on
    a subcell boundary and each map permutes the subcells.
    """
    _check_resolution(n)
    h = Fraction(1, n)
    out = []
    for j in range(2 * n):
        a = -1 + j * h
        out.append(a + h / 4 if a >= 0 else a + 3 * h / 4)
    return out


def branch_tuples(n: int, component: str) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Unsnapped (x, M1(x), M2(x), -x) per sample point x, with its mass."""
    if component == "gamma0":
        return [
            (path, mass / 2)
            for name in ("gamma1", "gamma2")
            for path, mass in branch_tuples(n, name)
        ]
    if component not in COMPONENTS:
        raise InvalidArgument(f"component must be one of {COMPONENT_NAMES}")
    m1, m2 = COMPONENTS[component]
    mass = Fraction(1, 2 * n)
    return [((x, _apply(m1, x), _apply(m2, x), -x), mass) for x in representatives(n)]


def snap_index(y: Fraction, n: int) -> int:
    """Index of the width-1/n subcell of [-1, 1] containing y."""
    return min(2 * n - 1, max(0, floor((y + 1) * n)))


def theorem1_discretized_plan(n: int, component: str = "gamma0") -> TransportPlan:
    """The continuous optimizer sampled on the 2n-point midpoint grid.

    Each subcell of width 1/n carries one sample per building block; the
    atom's positions are the subcells containing the sample's images.
    ``gamma1`` and ``gamma2`` come out as permutations of the subcells
    (Monge at every time), ``gamma0`` is their even mixture.
    """
    _check_resolution(n)
    grid = uniform_symmetric_grid(2 * n)
    atoms = [
        (tuple(snap_index(y, n) for y in path), mass)
        for path, mass in branch_tuples(n, component)
    ]
    return plan_from_atoms(grid, TimeGrid.unit(3), atoms)


def continuous_optimal_cost() -> Fraction:
    """Optimal action of the interval problem with uniform probability marginals.

    The modified cost vanishes on the support, leaving three second moments
    of the uniform law on [-1, 1]: 3 * 1/3.
    """
    return Fraction(1)
