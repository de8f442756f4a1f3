"""Command-line front end.

Subcommands:
  q      flow rate for one shape by one or all methods
  table  regenerate a benchmark table and report deviations
  field  export a velocity-field grid as CSV (optionally a rendered figure)
  sweep  parameter sweep to CSV/JSON (optionally a rendered figure)

General (a, b) inputs are rescaled internally to the area-pi convention
(lengths by s = 1/sqrt(ab), beta by s, flow back by (ab)^2).  Output goes
to stdout, diagnostics to stderr.  Exit codes: 0 success, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bounds, pinf, rectangle, robin
from .bounds import BoundKind, FlowEstimate, Method
from .fdoracle import FdConfig, fd_solve_ellipse, fd_solve_rect
from .geometry import EllipseGeom, RectGeom, ellipse_from_aspect
from .tables import TABLE_IDS, regenerate

__all__ = ["main"]

_ELLIPSE_METHODS = (Method.FOURIER, Method.QUAD_VARL, Method.R_BOUND, Method.RA_BOUND,
                    Method.KM93_LB, Method.UPPER_U, Method.UPPER_ISO,
                    Method.SMALL_BETA, Method.LARGE_BETA, Method.NEAR_CIRC)
_RECT_METHODS = (Method.QUAD_VARL, Method.R_BOUND, Method.KM93_LB,
                 Method.UPPER_U, Method.UPPER_ISO, Method.LARGE_BETA)

_METHOD_ALIASES = {m.value: m for m in Method}
_METHOD_ALIASES.update({"r": Method.R_BOUND, "ra": Method.RA_BOUND,
                        "small": Method.SMALL_BETA, "large": Method.LARGE_BETA,
                        "nearcirc": Method.NEAR_CIRC, "varl": Method.QUAD_VARL})


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


@dataclass(frozen=True)
class RunSpec:
    shape: str                  # "ellipse" | "rect"
    a: float
    b: float
    betas: tuple[float, ...]
    methods: tuple[Method, ...]
    nmax: int
    fmt: str

    @property
    def scale(self) -> float:
        """Length rescale to the normalized convention (ellipse only)."""
        return 1.0 / math.sqrt(self.a * self.b)


def _parse_number(text: str) -> float:
    text = text.strip()
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def _parse_beta_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        raise UsageError("empty beta list")
    if text.startswith("log:"):
        try:
            lo_s, hi_s, n_s = text[4:].split(":")
            lo, hi, n = _parse_number(lo_s), _parse_number(hi_s), int(n_s)
        except ValueError as exc:
            raise UsageError(f"bad log-range {text!r}; use log:lo:hi:count") from exc
        if lo <= 0 or hi <= lo or n < 2:
            raise UsageError(f"bad log-range {text!r}")
        return tuple(float(b) for b in np.geomspace(lo, hi, n))
    vals = tuple(_parse_number(part) for part in text.split(",") if part.strip())
    if not vals:
        raise UsageError("empty beta list")
    if any(b < 0 for b in vals):
        raise UsageError("beta must be >= 0")
    return vals


def _parse_methods(text: str, shape: str) -> tuple[Method, ...]:
    avail = _ELLIPSE_METHODS if shape == "ellipse" else _RECT_METHODS
    if text == "all":
        return avail
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        method = _METHOD_ALIASES.get(part)
        if method is None:
            raise UsageError(f"unknown method {part!r}")
        out.append(method)
    return tuple(out)


def _normalized_ellipse(spec: RunSpec) -> tuple[EllipseGeom, float]:
    """(geom, flow rescale) for the area-pi normalized problem."""
    hi, lo = max(spec.a, spec.b), min(spec.a, spec.b)
    a_norm = math.sqrt(hi / lo)
    return ellipse_from_aspect(a_norm), (spec.a * spec.b) ** 2


class _EllipseEvaluator:
    """Caches the expensive sub-solutions across methods and betas."""

    def __init__(self, geom: EllipseGeom, nmax: int):
        self.geom = geom
        self.nmax = nmax
        self._pinf = None
        self._moments = None

    @property
    def pinf_solution(self):
        if self._pinf is None:
            self._pinf = pinf.solve_pinf(self.geom)
        return self._pinf

    def estimate(self, method: Method, beta: float) -> tuple[FlowEstimate, dict]:
        geom = self.geom
        extra: dict = {}
        if method is Method.FOURIER:
            sol = robin.solve(geom, beta, self.nmax)
            extra["residual"] = sol.residual_norm
            return FlowEstimate(Method.FOURIER, robin.flow_rate(sol),
                                BoundKind.EXACT_SERIES), extra
        if method is Method.QUAD_VARL:
            return bounds.quad_varl_lb(geom, beta).estimate, extra
        if method is Method.R_BOUND:
            ps = self.pinf_solution
            return bounds.r_bound(math.pi, bounds.perimeter(geom), bounds.q0_ellipse(geom),
                                  ps.sigma_inf, ps.sigma_1, beta), extra
        if method is Method.RA_BOUND:
            return bounds.ra_bound(geom, beta), extra
        if method is Method.KM93_LB:
            return bounds.km93_lower(geom, beta, bounds.q0_ellipse(geom)), extra
        if method is Method.UPPER_U:
            return bounds.upper_bounds(geom, beta, self.pinf_solution.sigma_inf)[0], extra
        if method is Method.UPPER_ISO:
            return bounds.upper_bounds(geom, beta, self.pinf_solution.sigma_inf)[1], extra
        if method is Method.SMALL_BETA:
            return bounds.q_small_beta(geom, beta), extra
        if method is Method.LARGE_BETA:
            ps = self.pinf_solution
            return bounds.q_large_beta(geom, beta, ps.sigma_inf, ps.sigma_1), extra
        if method is Method.NEAR_CIRC:
            return bounds.q_near_circular(geom.e, beta), extra
        if method is Method.FD:
            res = fd_solve_ellipse(geom, beta, FdConfig(nx=64, ny=64, refine_levels=2))
            extra["error_estimate"] = res.error_estimate
            return FlowEstimate(Method.FD, res.q, BoundKind.EXACT_SERIES), extra
        raise UsageError(f"method {method.value} not available for ellipses")


def _rect_estimate(rect: RectGeom, method: Method, beta: float) -> tuple[FlowEstimate, dict]:
    extra: dict = {}
    if method is Method.QUAD_VARL:
        return rectangle.quad_lb_rect(rect, beta), extra
    if method is Method.R_BOUND:
        return rectangle.r_bound_rect(rect, beta), extra
    if method is Method.KM93_LB:
        return bounds.km93_lower(rect, beta, rectangle.q0_rect(rect).value), extra
    if method is Method.UPPER_U:
        return bounds.upper_bounds(rect, beta, rectangle.sigma_rect(rect)[0])[0], extra
    if method is Method.UPPER_ISO:
        return bounds.upper_bounds(rect, beta, rectangle.sigma_rect(rect)[0])[1], extra
    if method is Method.LARGE_BETA:
        s_inf, s_1 = rectangle.sigma_rect(rect)
        return bounds.q_large_beta(rect, beta, s_inf, s_1), extra
    if method is Method.FD:
        res = fd_solve_rect(rect, beta, FdConfig(nx=64, ny=64, refine_levels=2))
        extra["error_estimate"] = res.error_estimate
        return FlowEstimate(Method.FD, res.q, BoundKind.EXACT_SERIES), extra
    raise UsageError(f"method {method.value} not available for rectangles")


def _format_rows(rows: list[dict], fmt: str, columns: list[str]) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    lines = []
    if fmt == "csv":
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_cell(row.get(c)) for c in columns))
        return "\n".join(lines)
    widths = {c: max(len(c), *(len(_cell(r.get(c))) for r in rows)) for c in columns}
    lines.append("  ".join(c.ljust(widths[c]) for c in columns))
    for row in rows:
        lines.append("  ".join(_cell(row.get(c)).ljust(widths[c]) for c in columns))
    return "\n".join(lines)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _compute_rows(spec: RunSpec) -> list[dict]:
    rows: list[dict] = []
    if spec.shape == "ellipse":
        geom, q_scale = _normalized_ellipse(spec)
        ev = _EllipseEvaluator(geom, spec.nmax)
        s = spec.scale
        for beta in spec.betas:
            for method in spec.methods:
                est, extra = ev.estimate(method, beta * s)
                row = {"a": spec.a, "b": spec.b, "beta": beta,
                       "method": method.value, "value": est.value * q_scale,
                       "kind": est.kind.value}
                if "residual" in extra:
                    row["residual"] = extra["residual"]
                if "error_estimate" in extra:
                    row["error_estimate"] = extra["error_estimate"] * q_scale
                rows.append(row)
    else:
        rect = RectGeom(spec.a, spec.b)
        for beta in spec.betas:
            for method in spec.methods:
                est, extra = _rect_estimate(rect, method, beta)
                row = {"a": spec.a, "b": spec.b, "beta": beta,
                       "method": method.value, "value": est.value,
                       "kind": est.kind.value}
                if "error_estimate" in extra:
                    row["error_estimate"] = extra["error_estimate"]
                rows.append(row)
    return rows


def _cmd_q(args) -> int:
    a = _parse_number(args.a)
    spec = RunSpec(shape=args.shape, a=a, b=_default_b(args, a),
                   betas=_parse_beta_list(args.beta),
                   methods=_parse_methods(args.method, args.shape),
                   nmax=args.nmax, fmt=args.format)
    rows = _compute_rows(spec)
    columns = ["a", "b", "beta", "method", "value", "kind"]
    if any("residual" in r for r in rows):
        columns.append("residual")
    if any("error_estimate" in r for r in rows):
        columns.append("error_estimate")
    print(_format_rows(rows, spec.fmt, columns))
    return 0


def _cmd_sweep(args) -> int:
    a_list = tuple(_parse_number(p) for p in str(args.a).split(",") if p.strip())
    if not a_list:
        raise UsageError("empty a list")
    betas = _parse_beta_list(args.beta)
    rows: list[dict] = []
    for a in a_list:
        spec = RunSpec(shape=args.shape, a=a, b=_default_b(args, a),
                       betas=betas, methods=_parse_methods(args.method, args.shape),
                       nmax=args.nmax, fmt=args.format)
        rows.extend(_compute_rows(spec))
    columns = ["a", "beta", "method", "value", "kind"]
    fmt = "csv" if args.format == "table" else args.format
    out_rows = [{k: r[k] for k in columns} for r in rows]
    print(_format_rows(out_rows, fmt, columns))
    if args.plot:
        from .plots import render_sweep
        render_sweep(args.plot, rows, f"{args.shape} flow-rate sweep")
        print(f"wrote figure {args.plot}", file=sys.stderr)
    return 0


def _default_b(args, a: float) -> float:
    if args.b is not None:
        return _parse_number(args.b)
    if args.shape == "ellipse":
        return 1.0 / a
    raise UsageError("--b is required for rectangles")


def _cmd_field(args) -> int:
    if args.shape not in ("ellipse", "rect"):
        raise UsageError(f"unknown shape {args.shape!r}")
    betas = _parse_beta_list(args.beta)
    if len(betas) != 1:
        raise UsageError("field export needs a single beta")
    beta = betas[0]
    try:
        nx_s, ny_s = args.grid.lower().split("x")
        nx, ny = int(nx_s), int(ny_s)
    except ValueError as exc:
        raise UsageError(f"bad grid {args.grid!r}; use NXxNY, e.g. 101x51") from exc
    if nx < 2 or ny < 2:
        raise UsageError("grid must be at least 2x2")
    a = _parse_number(args.a)
    b = _default_b(args, a)
    xs = np.linspace(-a, a, nx)
    ys = np.linspace(-b, b, ny)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    if args.shape == "ellipse":
        s = 1.0 / math.sqrt(a * b)
        geom, _ = _normalized_ellipse(RunSpec(args.shape, a, b, (beta,), (), args.nmax, "csv"))
        swap = a < b  # normalized major axis lies along the longer input axis
        xn = (yy if swap else xx) * s
        yn = (xx if swap else yy) * s
        inside = (xn / geom.a) ** 2 + (yn * geom.a) ** 2 <= 1.0
        uu = np.full(xx.shape, np.nan)
        if args.uinf:
            sol = pinf.solve_pinf(geom)
            uu[inside] = pinf.uinf_eval_xy(sol, xn[inside], yn[inside]) / (s * s)
        else:
            sol = robin.solve(geom, beta * s, args.nmax)
            uu[inside] = robin.eval_u_xy(sol, xn[inside], yn[inside]) / (s * s)
    else:
        rect = RectGeom(a, b)
        inside = (np.abs(xx) <= a) & (np.abs(yy) <= b)
        uu = np.full(xx.shape, np.nan)
        if args.uinf:
            uu[inside] = rectangle.uinf_rect(rect, xx[inside], yy[inside])
        else:
            raise UsageError("rect field export supports only --uinf (no series solution)")
    lines = ["x,y,u"]
    for i in range(nx):
        for j in range(ny):
            if np.isfinite(uu[i, j]):
                lines.append(f"{_cell(float(xx[i, j]))},{_cell(float(yy[i, j]))},{_cell(float(uu[i, j]))}")
    print("\n".join(lines))
    if args.plot:
        from .plots import render_field
        label = "u_inf" if args.uinf else f"u (beta={beta:g})"
        render_field(args.plot, xx, yy, uu, f"{args.shape} a={a:g} b={b:g}: {label}")
        print(f"wrote figure {args.plot}", file=sys.stderr)
    return 0


def _cmd_table(args) -> int:
    report = regenerate(args.id, nmax=args.nmax)
    rows = []
    for cell in report.cells:
        rows.append({"a": cell.a, "beta": cell.beta, "column": cell.column,
                     "published": cell.published, "computed": cell.computed,
                     "deviation": cell.deviation,
                     "flagged": cell.excluded_reason or ""})
    fmt = args.format
    columns = ["a", "beta", "column", "published", "computed", "deviation", "flagged"]
    print(_format_rows(rows, fmt, columns))
    for col in sorted({c.column for c in report.cells}):
        print(f"max |deviation| column {col} (non-flagged): "
              f"{report.max_deviation(col):.3e}", file=sys.stderr)
    flagged = [c for c in report.cells if c.excluded_reason]
    if flagged:
        print(f"{len(flagged)} flagged published entries excluded "
              "(fail independent cross-validation)", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slipflow",
        description="Flow rate of Robin-boundary Poisson flow in elliptic and "
                    "rectangular channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, beta_required=True):
        p.add_argument("--shape", choices=("ellipse", "rect"), default="ellipse")
        p.add_argument("--a", type=str, required=True, help="semi-axis / half-width")
        p.add_argument("--b", type=str, default=None,
                       help="other semi-axis (default 1/a for ellipses)")
        p.add_argument("--beta", type=str, required=beta_required,
                       help="slip length; comma list or log:lo:hi:count")
        p.add_argument("--nmax", type=int, default=robin.DEFAULT_TRUNCATION,
                       help="Fourier truncation")
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p_q = sub.add_parser("q", help="flow rate by one or all methods")
    add_common(p_q)
    p_q.add_argument("--method", type=str, default="all")
    p_q.set_defaults(func=_cmd_q)

    p_table = sub.add_parser("table", help="regenerate a benchmark table")
    p_table.add_argument("id", choices=TABLE_IDS)
    p_table.add_argument("--nmax", type=int, default=None)
    p_table.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p_table.set_defaults(func=_cmd_table)

    p_field = sub.add_parser("field", help="export a velocity-field grid as CSV")
    add_common(p_field)
    p_field.add_argument("--grid", type=str, default="101x51", help="NXxNY")
    p_field.add_argument("--uinf", action="store_true",
                         help="export the large-slip limit field instead")
    p_field.add_argument("--plot", type=str, default=None,
                         help="also render a contour figure to this path")
    p_field.set_defaults(func=_cmd_field)

    p_sweep = sub.add_parser("sweep", help="parameter sweep to CSV/JSON")
    add_common(p_sweep)
    p_sweep.add_argument("--method", type=str, default="all")
    p_sweep.add_argument("--plot", type=str, default=None,
                         help="also render flow-rate curves to this path")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numerical failure path
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
