"""Space-time path diagrams of transport plans, as SVG or plain text.

Output is byte-stable: atoms are drawn in lexicographic path order,
coordinates use fixed precision and nothing time- or host-dependent is
emitted.
"""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import InvalidArgument
from .measures import TransportPlan

# blue, green, yellow by start index; cycles on larger grids
DEFAULT_PALETTE = ("#1f5fbf", "#2e8b57", "#e6b800")
ASCII_WEIGHTS = "·-=#"


@dataclass(frozen=True)
class RenderOptions:
    width: int = 640
    height: int = 400
    margin: int = 40
    stroke_scale: float = 40.0  # pixels per unit mass
    node_radius: float = 3.0
    palette: tuple[str, ...] = DEFAULT_PALETTE

    def __post_init__(self):
        if self.stroke_scale <= 0:
            raise InvalidArgument("stroke scale must be positive")
        if self.width <= 2 * self.margin or self.height <= 2 * self.margin:
            raise InvalidArgument("canvas too small for its margins")
        if not self.palette:
            raise InvalidArgument("palette must not be empty")


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _fmt_width(v: float) -> str:
    # finer than coordinates so width ratios track mass ratios to 1e-6
    return f"{v:.8f}"


def render_svg(plan: TransportPlan, options: RenderOptions = RenderOptions()) -> str:
    """One polyline per atom through (time, position); stroke width proportional to mass."""
    if plan is None or len(plan) == 0:
        raise InvalidArgument("nothing to render")
    o = options
    grid = plan.grid
    times = [float(t) for t in plan.timegrid.times[: plan.path_length]]
    lo_x, hi_x = float(grid.points[0]), float(grid.points[-1])
    t0, t1 = times[0], times[-1]
    inner_w = o.width - 2 * o.margin
    inner_h = o.height - 2 * o.margin

    def sx(t):
        return o.margin + (0.5 if t1 == t0 else (t - t0) / (t1 - t0)) * inner_w

    def sy(x):
        return o.margin + (hi_x - x) / (hi_x - lo_x) * inner_h

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{o.width}" height="{o.height}" viewBox="0 0 {o.width} {o.height}">',
    ]
    for path, mass in plan.atoms.items():
        pts = " ".join(f"{_fmt(sx(t))},{_fmt(sy(float(grid[k])))}" for t, k in zip(times, path))
        color = o.palette[path[0] % len(o.palette)]
        lines.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt_width(float(mass) * o.stroke_scale)}" '
            f'stroke-linecap="round" stroke-linejoin="round"/>'
        )
    for t in times:
        for x in grid.points:
            lines.append(
                f'<circle cx="{_fmt(sx(t))}" cy="{_fmt(sy(float(x)))}" '
                f'r="{_fmt(o.node_radius)}" fill="#000000"/>'
            )
    for x in grid.points:
        lines.append(
            f'<text x="{_fmt(o.margin / 2)}" y="{_fmt(sy(float(x)))}" '
            f'font-size="10" text-anchor="middle">{escape(str(x))}</text>'
        )
    for i, t in enumerate(times):
        lines.append(
            f'<text x="{_fmt(sx(t))}" y="{_fmt(o.height - o.margin / 3)}" '
            f'font-size="10" text-anchor="middle">t{i}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_ascii(plan: TransportPlan, columns: int = 61, rows: int | None = None) -> str:
    """Character raster of the plan; heavier cells get heavier characters.

    Grid points map to evenly spaced rows (largest coordinate on top) and
    time points to evenly spaced columns.  Each cell accumulates the mass of
    the atoms crossing it; the character is picked from ``· - = #`` by the
    cell mass relative to the heaviest cell.
    """
    if plan is None or len(plan) == 0:
        raise InvalidArgument("nothing to render")
    n_pts = len(plan.grid)
    n_t = plan.path_length
    if rows is None:
        rows = 2 * n_pts - 1
    if rows < n_pts:
        raise InvalidArgument(f"{rows} rows cannot separate {n_pts} grid points")
    if columns < n_t:
        raise InvalidArgument(f"{columns} columns cannot separate {n_t} time points")

    def row_of(k):
        return round((n_pts - 1 - k) * (rows - 1) / (n_pts - 1))

    def col_of(i):
        return 0 if n_t == 1 else round(i * (columns - 1) / (n_t - 1))

    cells: dict[tuple[int, int], float] = {}
    for path, mass in plan.atoms.items():
        visited = set()
        for i in range(n_t - 1):
            c0, c1 = col_of(i), col_of(i + 1)
            r0, r1 = row_of(path[i]), row_of(path[i + 1])
            for c in range(c0, c1 + 1):
                frac = (c - c0) / (c1 - c0) if c1 > c0 else 0.0
                visited.add((round(r0 + frac * (r1 - r0)), c))
        if n_t == 1:
            visited.add((row_of(path[0]), 0))
        for cell in visited:
            cells[cell] = cells.get(cell, 0.0) + float(mass)
    top = max(cells.values())
    canvas = [[" "] * columns for _ in range(rows)]
    for (r, c), m in sorted(cells.items()):
        level = min(len(ASCII_WEIGHTS) - 1, int(len(ASCII_WEIGHTS) * m / top - 1e-12))
        canvas[r][c] = ASCII_WEIGHTS[max(level, 0)]
    return "\n".join("".join(line).rstrip() for line in canvas) + "\n"
