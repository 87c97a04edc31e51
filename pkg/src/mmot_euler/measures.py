"""Sparse transport plans on path space.

A plan stores its atoms as ``{index path: mass}``.  Paths either cover the
whole time grid (full form) or omit the last time point (reduced form, the
endpoint being implied by the endpoint map); the form is read off the path
length.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InconsistentPlan, InvalidArgument
from .grid import EndpointMap, Path, SpatialGrid, TimeGrid, format_fraction, to_fraction

FLOAT_MASS_TOL = 1e-12
ARITH_MODES = ("rational", "float")


@dataclass(frozen=True, eq=False)
class TransportPlan:
    grid: SpatialGrid
    timegrid: TimeGrid
    atoms: Mapping[Path, object]
    arith: str = "rational"

    def __post_init__(self):
        if self.arith not in ARITH_MODES:
            raise InvalidArgument(f"arithmetic mode must be one of {ARITH_MODES}")
        n = len(self.grid)
        cleaned: dict[Path, object] = {}
        lengths = set()
        for path, mass in self.atoms.items():
            path = tuple(int(k) for k in path)
            if any(k < 0 or k >= n for k in path):
                raise InconsistentPlan(f"path {path} leaves the grid")
            mass = to_fraction(mass) if self.arith == "rational" else float(mass)
            if mass < 0:
                raise InconsistentPlan(f"negative mass {mass} on {path}")
            if mass == 0 or (self.arith == "float" and mass < FLOAT_MASS_TOL):
                continue
            lengths.add(len(path))
            cleaned[path] = cleaned.get(path, 0) + mass
        if not cleaned:
            raise InconsistentPlan("a plan needs at least one atom of positive mass")
        full = len(self.timegrid)
        if len(lengths) != 1 or lengths.pop() not in (full, full - 1):
            raise InconsistentPlan(
                f"all paths must have {full} (full) or {full - 1} (reduced) points"
            )
        total = sum(cleaned.values())
        if self.arith == "rational" and total != 1:
            raise InconsistentPlan(f"total mass is {total}, not 1")
        if self.arith == "float" and abs(total - 1) > FLOAT_MASS_TOL:
            raise InconsistentPlan(f"total mass is {total!r}, not 1")
        object.__setattr__(self, "atoms", dict(sorted(cleaned.items())))

    @classmethod
    def from_float_masses(
        cls, grid: SpatialGrid, timegrid: TimeGrid, atoms: Mapping[Path, float]
    ) -> "TransportPlan":
        """Float plan from noisy solver output: prune tiny atoms, renormalize."""
        kept = {p: float(m) for p, m in atoms.items() if m >= FLOAT_MASS_TOL}
        total = sum(kept.values())
        return cls(grid, timegrid, {p: m / total for p, m in kept.items()}, "float")

    def __eq__(self, other):
        if not isinstance(other, TransportPlan):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.timegrid == other.timegrid
            and self.arith == other.arith
            and self.atoms == other.atoms
        )

    __hash__ = None

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def path_length(self) -> int:
        return len(next(iter(self.atoms)))

    @property
    def is_reduced(self) -> bool:
        return self.path_length == len(self.timegrid) - 1

    def total_mass(self):
        return sum(self.atoms.values())

    def coords(self, path: Path) -> tuple:
        return self.grid.coords(path)

    def with_atom(self, path: Path, mass) -> "TransportPlan":
        """A copy with ``mass`` added on ``path`` (mass 0 leaves the plan unchanged)."""
        atoms = dict(self.atoms)
        atoms[tuple(path)] = atoms.get(tuple(path), 0) + mass
        return TransportPlan(self.grid, self.timegrid, atoms, self.arith)

    def to_json(self) -> dict:
        def fmt(m):
            return format_fraction(m) if self.arith == "rational" else m

        return {
            "grid": self.grid.to_json(),
            "times": self.timegrid.to_json(),
            "arith": self.arith,
            "atoms": [{"path": list(p), "mass": fmt(m)} for p, m in self.atoms.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def from_json(cls, data: Mapping) -> "TransportPlan":
        try:
            grid = SpatialGrid(data["grid"])
            timegrid = TimeGrid(data["times"])
            arith = data.get("arith", "rational")
            atoms: dict[Path, object] = {}
            for atom in data["atoms"]:
                path = tuple(atom["path"])
                atoms[path] = atoms.get(path, 0) + (
                    to_fraction(atom["mass"]) if arith == "rational" else float(atom["mass"])
                )
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed plan JSON: {exc}") from exc
        return cls(grid, timegrid, atoms, arith)

    @classmethod
    def loads(cls, text: str) -> "TransportPlan":
        return cls.from_json(json.loads(text))


def _check_time(plan: TransportPlan, i: int) -> None:
    if not 0 <= i < plan.path_length:
        raise InvalidArgument(f"time index {i} out of range 0..{plan.path_length - 1}")


def marginal(plan: TransportPlan, i: int) -> tuple:
    """Mass per grid point at time index i."""
    _check_time(plan, i)
    zero = Fraction(0) if plan.arith == "rational" else 0.0
    out = [zero] * len(plan.grid)
    for path, mass in plan.atoms.items():
        out[path[i]] += mass
    return tuple(out)


def _atoms_by_position(plan: TransportPlan, i: int) -> dict[int, list[Path]]:
    groups: dict[int, list[Path]] = {}
    for path in plan.atoms:
        groups.setdefault(path[i], []).append(path)
    return groups


def is_mass_splitting(plan: TransportPlan, i: int) -> bool:
    """True iff two distinct atoms pass through the same grid point at time i."""
    _check_time(plan, i)
    return any(len(g) > 1 for g in _atoms_by_position(plan, i).values())


def splitting_profile(plan: TransportPlan) -> tuple[bool, ...]:
    return tuple(is_mass_splitting(plan, i) for i in range(plan.path_length))


def is_everywhere_splitting(plan: TransportPlan) -> bool:
    return all(splitting_profile(plan))


def is_monge(plan: TransportPlan, i: int) -> tuple[bool, dict[int, dict[int, int]] | None]:
    """Monge form with respect to time i.

    Returns ``(True, maps)`` where ``maps[k][x]`` is the grid index visited at
    time k by the mass sitting at grid index x at time i, or ``(False, None)``.
    """
    _check_time(plan, i)
    groups = _atoms_by_position(plan, i)
    if any(len(g) > 1 for g in groups.values()):
        return False, None
    maps = {
        k: {x: paths[0][k] for x, paths in sorted(groups.items())}
        for k in range(plan.path_length)
        if k != i
    }
    return True, maps


def _check_endpoint_grid(plan: TransportPlan, endpoint: EndpointMap) -> None:
    if len(endpoint.permutation) != len(plan.grid):
        raise InvalidArgument("endpoint map belongs to a different grid")


def reduce_plan(plan: TransportPlan, endpoint: EndpointMap) -> TransportPlan:
    """Drop the last time point; every atom must end at g(start)."""
    _check_endpoint_grid(plan, endpoint)
    if plan.is_reduced:
        raise InvalidArgument("plan is already in reduced form")
    atoms: dict[Path, object] = {}
    for path, mass in plan.atoms.items():
        if path[-1] != endpoint(path[0]):
            raise InconsistentPlan(f"atom {path} violates the endpoint condition")
        atoms[path[:-1]] = mass
    return TransportPlan(plan.grid, plan.timegrid, atoms, plan.arith)


def extend_plan(plan: TransportPlan, endpoint: EndpointMap) -> TransportPlan:
    """Append g(start) to every atom of a reduced plan."""
    _check_endpoint_grid(plan, endpoint)
    if not plan.is_reduced:
        raise InvalidArgument("plan is not in reduced form")
    atoms = {path + (endpoint(path[0]),): mass for path, mass in plan.atoms.items()}
    return TransportPlan(plan.grid, plan.timegrid, atoms, plan.arith)


def plan_cost(plan: TransportPlan, cost: Callable[[Sequence], object]):
    """Expected cost sum_w c(w) gamma(w), evaluated on grid coordinates."""
    total = Fraction(0) if plan.arith == "rational" else 0.0
    for path, mass in plan.atoms.items():
        coords = plan.coords(path)
        if plan.arith == "float":
            coords = tuple(float(x) for x in coords)
        total += cost(coords) * mass
    return total


def plan_from_atoms(
    grid: SpatialGrid,
    timegrid: TimeGrid,
    atoms: Iterable[tuple[Path, object]],
    arith: str = "rational",
) -> TransportPlan:
    """Sum masses of repeated paths, then build the plan."""
    acc: dict[Path, object] = {}
    for path, mass in atoms:
        acc[tuple(path)] = acc.get(tuple(path), 0) + mass
    return TransportPlan(grid, timegrid, acc, arith)
