"""Command-line front end.

Subcommands::

    solve   assemble and solve one LP, report value and splitting flags
    prop1   check the three-point claims for a range of step counts (CSV)
    thm1    build and check the sampled interval optimizer
    sweep   solve a grid x steps family in float mode (CSV, no assertions)
    render  draw a plan JSON file as SVG or text

Exit codes: 0 success, 1 bad input, 2 a checked claim failed,
3 infeasible LP, 4 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from . import costs, euler, lp as lpmod
from .errors import MMOTError, ResourceLimit
from .grid import (
    DEFAULT_PATH_CAP,
    EndpointMap,
    SpatialGrid,
    TimeGrid,
    flip_map,
    three_point_grid,
    uniform_symmetric_grid,
)
from .measures import TransportPlan, is_monge, marginal, plan_cost, splitting_profile
from .render import RenderOptions, render_ascii, render_svg

log = logging.getLogger("mmot_euler")

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_INFEASIBLE, EXIT_LIMIT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


def format_value(v) -> str:
    """'p/q' for exact values, 12 significant digits for floats."""
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    return f"{float(v):.12g}"


def _flags(values) -> str:
    return " ".join(f"t{i}={'true' if v else 'false'}" for i, v in enumerate(values))


def parse_grid(spec: str) -> SpatialGrid:
    """'three-point', 'midpoint:<n>' or 'points:<x0>,<x1>,...'."""
    try:
        if spec == "three-point":
            return three_point_grid()
        if spec.startswith("midpoint:"):
            return uniform_symmetric_grid(int(spec.split(":", 1)[1]))
        if spec.startswith("points:"):
            return SpatialGrid(spec.split(":", 1)[1].split(","))
    except (ValueError, MMOTError) as exc:
        raise UsageError(f"bad grid spec {spec!r}: {exc}") from exc
    raise UsageError(f"bad grid spec {spec!r}")


def parse_endpoint(spec: str, grid: SpatialGrid) -> EndpointMap | None:
    """'flip', 'identity', 'none' or 'perm:<i0>,<i1>,...'."""
    try:
        if spec == "flip":
            return flip_map(grid)
        if spec == "identity":
            return EndpointMap.identity(grid)
        if spec == "none":
            return None
        if spec.startswith("perm:"):
            return EndpointMap(grid, tuple(int(k) for k in spec[5:].split(",")))
    except (ValueError, MMOTError) as exc:
        raise UsageError(f"bad endpoint {spec!r}: {exc}") from exc
    raise UsageError(f"bad endpoint {spec!r}")


@dataclass
class RunConfig:
    subcommand: str = "solve"
    grid: str = "three-point"
    steps: int = 3
    endpoint: str = "flip"
    cost: str = "action"
    arith: str = "rational"
    form: str = "full"
    out: str | None = None
    max_paths: int = DEFAULT_PATH_CAP
    time_limit: float = 60.0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _build_lp(cfg: RunConfig):
    grid = parse_grid(cfg.grid)
    if cfg.steps < 1:
        raise UsageError("--steps must be >= 1")
    timegrid = TimeGrid.unit(cfg.steps)
    endpoint = parse_endpoint(cfg.endpoint, grid)
    try:
        cost = costs.make_cost(cfg.cost, timegrid, endpoint)
    except MMOTError as exc:
        raise UsageError(str(exc)) from exc
    return lpmod.assemble_mmot_lp(grid, timegrid, cost, endpoint, cfg.form, cap=cfg.max_paths)


def cmd_solve(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    lp = _build_lp(cfg)
    sol = lpmod.solve_simplex(lp, cfg.arith, time_limit=cfg.time_limit)
    print(f"status: {sol.status}", file=out)
    if sol.status == "infeasible":
        print("error: marginal constraints are infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    if sol.status != "optimal":
        print(f"error: solver stopped with status {sol.status}", file=sys.stderr)
        return EXIT_LIMIT
    plan = sol.plan()
    profile = splitting_profile(plan)
    print(f"value: {format_value(sol.value)}", file=out)
    print(f"atoms: {len(plan)}", file=out)
    print(f"splitting: {_flags(profile)}", file=out)
    print(f"monge: {_flags(not s for s in profile)}", file=out)
    print(f"everywhere_splitting: {'true' if all(profile) else 'false'}", file=out)
    if cfg.out:
        Path(cfg.out).write_text(plan.dumps())
    return EXIT_OK


PROP1_HEADER = ["N", "lp", "closed", "monge", "split", "width"]


def prop1_rows(n_min: int, n_max: int, monge_cap: int = 10**6):
    """Yield one verified row per step count; raises CheckFailed on the first violated claim."""
    grid = three_point_grid()
    flip = flip_map(grid)
    for N in range(n_min, n_max + 1):
        tg = TimeGrid.unit(N)
        cost = costs.action(tg)
        lp = lpmod.assemble_mmot_lp(grid, tg, cost, flip, "full")
        sol = lpmod.solve_simplex(lp, "rational")
        if not sol.optimal:
            raise CheckFailed(f"N={N}: LP status {sol.status}")
        closed = euler.cost_bounds(N).split_optimum
        if sol.value != closed:
            raise CheckFailed(f"N={N}: LP optimum {sol.value} != closed form {closed}")
        plan = euler.gerosplan_plan(N)
        if plan_cost(plan, cost) != sol.value:
            raise CheckFailed(f"N={N}: closed-form plan cost differs from LP optimum")
        if any(marginal(plan, i) != (Fraction(1, 3),) * 3 for i in range(N + 1)):
            raise CheckFailed(f"N={N}: closed-form plan violates the marginals")
        try:
            monge, _ = lpmod.monge_bruteforce(grid, tg, cost, flip, cap=monge_cap)
        except ResourceLimit:
            monge = None
        vertex = sol.plan()
        if N >= 4:
            if monge is not None and not monge > sol.value:
                raise CheckFailed(f"N={N}: Monge optimum {monge} not above LP optimum")
            if is_monge(vertex, 0)[0]:
                raise CheckFailed(f"N={N}: optimal vertex is not mass-splitting")
            split = "true"
        else:
            if monge is not None and monge != sol.value:
                raise CheckFailed(f"N={N}: Monge optimum {monge} != LP optimum")
            split = "not-asserted"
        path = (1,) + (2,) * (N - 1) + (1,)
        lo, hi = lpmod.optimal_face_probe(lp, sol, {path: 1})
        width = hi - lo
        expected = 0 if N % 2 == 0 else Fraction(2, 3 * (N - 1))
        if width != expected:
            raise CheckFailed(f"N={N}: optimal-face width {width}, expected {expected}")
        yield {
            "N": N,
            "lp": format_value(sol.value),
            "closed": format_value(closed),
            "monge": format_value(monge) if monge is not None else "skipped",
            "split": split,
            "width": format_value(width),
        }


def cmd_prop1(n_min: int, n_max: int, out=None) -> int:
    out = out or sys.stdout
    if n_min < 3 or n_max < n_min:
        raise UsageError("need 3 <= --n-min <= --n-max")
    writer = csv.DictWriter(out, PROP1_HEADER, lineterminator="\n")
    writer.writeheader()
    try:
        for row in prop1_rows(n_min, n_max):
            writer.writerow(row)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def thm1_checks(n: int) -> tuple[list[str], dict[str, TransportPlan]]:
    """Run the exact checks on the sampled interval optimizer; raise CheckFailed on failure."""
    plans = {c: euler.theorem1_discretized_plan(n, c) for c in euler.COMPONENT_NAMES}
    cost = costs.action(TimeGrid.unit(3))
    report = []
    uniform = (Fraction(1, 2 * n),) * (2 * n)
    for name, plan in plans.items():
        if any(marginal(plan, i) != uniform for i in range(4)):
            raise CheckFailed(f"{name}: marginals are not uniform")
    report.append("marginals: uniform")
    for name in ("gamma1", "gamma2"):
        for path, _ in euler.branch_tuples(n, name):
            if euler.el_residual(path) != 0:
                raise CheckFailed(f"{name}: Euler-Lagrange residual nonzero on {path}")
            if costs.modified_cost(path[:3]) != 0:
                raise CheckFailed(f"{name}: modified cost nonzero on {path}")
    report.append("el_residual: 0")
    report.append("modified_cost: 0")
    c0 = plan_cost(plans["gamma0"], cost)
    if abs(c0 - euler.continuous_optimal_cost()) > Fraction(4, n):
        raise CheckFailed(f"gamma0 cost {c0} farther than 4/n from 1")
    report.append(f"cost_gamma0: {format_value(c0)}")
    profiles = {name: splitting_profile(p) for name, p in plans.items()}
    if not all(profiles["gamma0"]):
        raise CheckFailed("gamma0 is not mass-splitting at every time")
    for name in ("gamma1", "gamma2"):
        if profiles[name][0]:
            raise CheckFailed(f"{name} is mass-splitting at t0")
    for name, prof in profiles.items():
        report.append(f"splitting_{name}: {_flags(prof)}")
    return report, plans


def cmd_thm1(n: int, out_dir: str | None = None, out=None) -> int:
    out = out or sys.stdout
    if n < 2 or n % 2:
        raise UsageError("--n must be an even integer >= 2")
    try:
        report, plans = thm1_checks(n)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    for line in report:
        print(line, file=out)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for name, plan in plans.items():
            (d / f"{name}.json").write_text(plan.dumps())
    return EXIT_OK


SWEEP_HEADER = ["grid", "steps", "status", "value", "splitting", "monge", "seconds", "error"]


def sweep_rows(grids, steps_list, arith="float", endpoint="flip", max_paths=DEFAULT_PATH_CAP, time_limit=60.0):
    for g in grids:
        for N in steps_list:
            row = dict.fromkeys(SWEEP_HEADER, "")
            row.update(grid=g, steps=N)
            start = time.perf_counter()
            try:
                cfg = RunConfig("sweep", g, N, endpoint, "action", arith, "full", None, max_paths, time_limit)
                lp = _build_lp(cfg)
                sol = lpmod.solve_simplex(lp, arith, time_limit=time_limit)
                row["status"] = sol.status
                if sol.optimal:
                    plan = sol.plan()
                    prof = splitting_profile(plan)
                    row["value"] = format_value(sol.value)
                    row["splitting"] = "".join("T" if s else "F" for s in prof)
                    row["monge"] = "true" if not prof[0] else "false"
            except (MMOTError, UsageError) as exc:
                row["status"] = "error"
                row["error"] = str(exc)
            row["seconds"] = f"{time.perf_counter() - start:.3f}"
            yield row


def cmd_sweep(grids, steps_list, arith="float", out=None, **kw) -> int:
    out = out or sys.stdout
    writer = csv.DictWriter(out, SWEEP_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in sweep_rows(grids, steps_list, arith, **kw):
        writer.writerow(row)
        out.flush()
    return EXIT_OK


def cmd_render(plan_path: str, fmt: str = "svg", out_path: str | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        text = Path(plan_path).read_text()
    except OSError as exc:
        print(f"error: cannot read {plan_path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"error: {plan_path}:{exc.lineno}:{exc.colno}: {exc.msg}", file=sys.stderr)
        return EXIT_INPUT
    try:
        plan = TransportPlan.from_json(data)
    except MMOTError as exc:
        print(f"error: {plan_path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rendered = render_svg(plan, RenderOptions()) if fmt == "svg" else render_ascii(plan)
    if out_path:
        Path(out_path).write_text(rendered)
    else:
        out.write(rendered)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mmot-euler", description="Exact multi-marginal transport for discrete generalized Euler flows.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve one LP")
    s.add_argument("--config", help="JSON RunConfig; flags given explicitly override it")
    s.add_argument("--grid")
    s.add_argument("--steps", type=int)
    s.add_argument("--endpoint")
    s.add_argument("--cost", choices=costs.COST_KINDS)
    s.add_argument("--arith", choices=("rational", "float"))
    s.add_argument("--form", choices=lpmod.FORMS)
    s.add_argument("--out", help="write the optimal plan JSON here")
    s.add_argument("--max-paths", type=int)
    s.add_argument("--time-limit", type=float)

    s = sub.add_parser("prop1", help="verify the three-point claims over a range of N")
    s.add_argument("--n-min", type=int, default=3)
    s.add_argument("--n-max", type=int, default=6)
    s.add_argument("--out")

    s = sub.add_parser("thm1", help="verify the sampled interval optimizer")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--out-dir")

    s = sub.add_parser("sweep", help="float-mode sweep over grids and step counts")
    s.add_argument("--grids", default="three-point,midpoint:4", help="';'-separated or ','-separated grid specs")
    s.add_argument("--steps", default="3-5", help="e.g. 3-5 or 3,4,5")
    s.add_argument("--arith", choices=("rational", "float"), default="float")
    s.add_argument("--endpoint", default="flip")
    s.add_argument("--max-paths", type=int, default=DEFAULT_PATH_CAP)
    s.add_argument("--time-limit", type=float, default=60.0)
    s.add_argument("--out")

    s = sub.add_parser("render", help="draw a plan JSON file")
    s.add_argument("plan")
    s.add_argument("--format", choices=("svg", "ascii"), default="svg")
    s.add_argument("--out")
    return p


def _split_grids(text: str) -> list[str]:
    if not text:
        return []
    if ";" in text:
        return [g for g in text.split(";") if g]
    # 'points:' specs contain commas, so only split on commas between known prefixes
    out, cur = [], ""
    for part in text.split(","):
        if part.startswith(("three-point", "midpoint:", "points:")) or not cur:
            if cur:
                out.append(cur)
            cur = part
        else:
            cur += "," + part
    if cur:
        out.append(cur)
    return out


def _solve_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            cfg = RunConfig.from_json(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"cannot load config {args.config}: {exc}") from exc
    for name in ("grid", "steps", "endpoint", "cost", "arith", "form", "out", "max_paths", "time_limit"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def _open_out(path):
    return open(path, "w", newline="") if path else None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        if args.command == "solve":
            return cmd_solve(_solve_config(args))
        if args.command == "prop1":
            fh = _open_out(args.out)
            try:
                return cmd_prop1(args.n_min, args.n_max, out=fh or sys.stdout)
            finally:
                if fh:
                    fh.close()
        if args.command == "thm1":
            return cmd_thm1(args.n, args.out_dir)
        if args.command == "sweep":
            fh = _open_out(args.out)
            try:
                return cmd_sweep(
                    _split_grids(args.grids),
                    _int_list(args.steps),
                    args.arith,
                    out=fh or sys.stdout,
                    endpoint=args.endpoint,
                    max_paths=args.max_paths,
                    time_limit=args.time_limit,
                )
            finally:
                if fh:
                    fh.close()
        if args.command == "render":
            return cmd_render(args.plan, args.format, args.out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except MMOTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
