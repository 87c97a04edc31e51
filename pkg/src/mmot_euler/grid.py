"""Spatial and temporal discretizations, path spaces and endpoint maps.

Grid coordinates are stored as :class:`fractions.Fraction` so that LP
assembly downstream can run in exact arithmetic.  Paths are plain tuples of
grid indices, ordered lexicographically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import EndpointMapUndefined, InvalidArgument, ResourceLimit

Number = Union[int, Fraction, float, str]
Path = tuple[int, ...]

DEFAULT_PATH_CAP = 10**7


def to_fraction(value: Number) -> Fraction:
    """Convert ints, floats, decimal strings and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidArgument(f"not a number: {value!r}")
    if isinstance(value, (int, float, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"not a number: {value!r}") from exc
    raise InvalidArgument(f"not a number: {value!r}")


def format_fraction(value: Fraction) -> str:
    """``"p/q"`` in lowest terms, or ``"p"`` for integers."""
    return str(Fraction(value))


@dataclass(frozen=True)
class SpatialGrid:
    """Strictly increasing list of at least two points on the real line."""

    points: tuple[Fraction, ...]

    def __init__(self, points: Iterable[Number]):
        pts = tuple(to_fraction(p) for p in points)
        if len(pts) < 2:
            raise InvalidArgument("a spatial grid needs at least 2 points")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InvalidArgument("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index: int) -> Fraction:
        return self.points[index]

    @property
    def symmetric(self) -> bool:
        """True iff the point set is closed under x -> -x."""
        return all(a == -b for a, b in zip(self.points, reversed(self.points)))

    def index_of(self, x: Number) -> int:
        x = to_fraction(x)
        # points are sorted; bisect would do, but grids are small
        try:
            return self.points.index(x)
        except ValueError:
            raise InvalidArgument(f"{x} is not a grid point") from None

    def coords(self, path: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(self.points[k] for k in path)

    def to_json(self) -> list[str]:
        return [format_fraction(p) for p in self.points]

    @classmethod
    def from_json(cls, data: Sequence[Number]) -> "SpatialGrid":
        return cls(data)


@dataclass(frozen=True)
class TimeGrid:
    """Time points t_0 < t_1 < ... < t_N with N >= 1."""

    times: tuple[Fraction, ...]

    def __init__(self, times: Iterable[Number]):
        ts = tuple(to_fraction(t) for t in times)
        if len(ts) < 2:
            raise InvalidArgument("a time grid needs at least one interval")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidArgument("time points must be strictly increasing")
        object.__setattr__(self, "times", ts)

    @classmethod
    def unit(cls, steps: int) -> "TimeGrid":
        """Times 0, 1, ..., steps."""
        if steps < 1:
            raise InvalidArgument("need at least one time step")
        return cls(range(steps + 1))

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    @property
    def stepsizes(self) -> tuple[Fraction, ...]:
        return tuple(b - a for a, b in zip(self.times, self.times[1:]))

    def __len__(self) -> int:
        return len(self.times)

    def to_json(self) -> list[str]:
        return [format_fraction(t) for t in self.times]


@dataclass(frozen=True)
class EndpointMap:
    """A permutation of grid indices, prescribing omega_N = g(omega_0)."""

    grid: SpatialGrid
    permutation: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(k) for k in self.permutation)
        if sorted(perm) != list(range(len(self.grid))):
            raise EndpointMapUndefined(
                f"endpoint map {perm} is not a permutation of {len(self.grid)} grid indices"
            )
        object.__setattr__(self, "permutation", perm)

    def __call__(self, index: int) -> int:
        return self.permutation[index]

    def apply_point(self, x: Number) -> Fraction:
        """The map on coordinates (x must be a grid point)."""
        return self.grid[self.permutation[self.grid.index_of(x)]]

    def compose(self, other: "EndpointMap") -> "EndpointMap":
        """self after other."""
        return EndpointMap(self.grid, tuple(self.permutation[k] for k in other.permutation))

    @classmethod
    def identity(cls, grid: SpatialGrid) -> "EndpointMap":
        return cls(grid, tuple(range(len(grid))))


def uniform_symmetric_grid(n: int) -> SpatialGrid:
    """Midpoints of n equal cells of [-1, 1]."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2 or n % 2:
        raise InvalidArgument(f"cell count must be an even integer >= 2, got {n!r}")
    return SpatialGrid(Fraction(-1) + Fraction(2 * k + 1, n) for k in range(n))


def three_point_grid() -> SpatialGrid:
    return SpatialGrid((-1, 0, 1))


def flip_map(grid: SpatialGrid) -> EndpointMap:
    """The map x -> -x as a permutation of grid indices."""
    if not grid.symmetric:
        raise EndpointMapUndefined("x -> -x does not map this grid onto itself")
    n = len(grid)
    return EndpointMap(grid, tuple(n - 1 - k for k in range(n)))


def check_cap(count: int, cap: int, what: str = "paths") -> None:
    if count > cap:
        raise ResourceLimit(f"{count} {what} required, cap is {cap}")


def iter_paths(n_points: int, length: int) -> Iterator[Path]:
    return itertools.product(range(n_points), repeat=length)


def enumerate_paths(
    grid: SpatialGrid,
    timegrid: TimeGrid,
    endpoint: EndpointMap | None = None,
    cap: int = DEFAULT_PATH_CAP,
) -> list[Path]:
    """All index paths over the time grid, lexicographically ordered.

    With an endpoint map only paths with ``path[-1] == endpoint(path[0])``
    are returned; the last coordinate is then determined by the first, so
    the lexicographic order of the free coordinates is the order of the
    full tuples.
    """
    n, length = len(grid), len(timegrid)
    if endpoint is None:
        check_cap(n**length, cap)
        return list(iter_paths(n, length))
    if len(endpoint.permutation) != n:
        raise EndpointMapUndefined("endpoint map belongs to a different grid")
    check_cap(n ** (length - 1), cap)
    perm = endpoint.permutation
    return [free + (perm[free[0]],) for free in iter_paths(n, length - 1)]
