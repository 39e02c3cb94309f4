"""Command-line interface: ``secant-dynamics <command> [flags]``."""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import acceptance
from .dynamics import (
    CONV_TOL,
    MAX_ITER,
    GOLDEN_QUADRUPLE,
    construct_period4,
    iterate_orbit,
    period4_nodes,
    search_periodic,
    verify_period4,
)
from .errors import SecantError
from .focal import focal_points, singular_slopes, transversality
from .poly import Polynomial, hermite_newton, real_roots
from .render import RenderConfig, render, write_class_csv, write_ppm
from .torus import TorusPoint, extended_step

SCHEMA = "secant-dynamics/v1"
DEFAULT_POLY = "0,6,-5,1"

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# output


def fmt(v: float) -> str:
    """A float with 17 significant digits; infinities print as ``inf``."""
    if math.isinf(v):
        return "inf"
    return format(v, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return json.dumps(fmt(v)) if not math.isfinite(v) else fmt(v)
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(report: dict) -> None:
    print(to_json({"schema": SCHEMA, **report}))


# --------------------------------------------------------------------------
# flag parsing


def _floats(text: str, n: int | None = None, what: str = "value") -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return vals


def _polynomial(args) -> Polynomial:
    if args.roots is not None:
        return Polynomial.from_roots(_floats(args.roots, what="--roots"))
    try:
        return Polynomial.parse(args.poly or DEFAULT_POLY)
    except ValueError as exc:
        raise UsageError(f"bad --poly: {exc}") from None


def _window(args, default):
    if args.window is None:
        return default
    x0, x1, y0, y1 = _floats(args.window, 4, "--window")
    if not (x0 < x1 and y0 < y1):
        raise UsageError("--window must satisfy x0 < x1 and y0 < y1")
    return (x0, x1, y0, y1)


def _res(text: str, default: tuple[int, int]) -> tuple[int, int]:
    if text is None:
        return default
    try:
        w, h = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--res must look like WxH, got {text!r}") from None
    if w < 1 or h < 1:
        raise UsageError("--res must be at least 1x1")
    return w, h


def _point(text: str) -> tuple[float, float]:
    vals = []
    for t in text.split(","):
        t = t.strip().lower()
        vals.append(math.inf if t in ("inf", "+inf", "-inf", "infinity") else None)
        if vals[-1] is None:
            try:
                vals[-1] = float(t)
            except ValueError:
                raise UsageError(f"cannot parse --seed {text!r}") from None
    if len(vals) != 2:
        raise UsageError("--seed needs two coordinates x,y")
    return vals[0], vals[1]


def _tag(pt: TorusPoint) -> str:
    return pt.kind


def _csv_coord(v: float) -> str:
    return "" if math.isinf(v) else fmt(v)


# --------------------------------------------------------------------------
# commands


def cmd_roots(args) -> int:
    p = _polynomial(args)
    r = real_roots(p)
    _emit({"polynomial": list(p.coeffs), "roots": list(r.roots), "derivatives": list(r.derivs)})
    return EXIT_OK


def cmd_focal(args) -> int:
    p = _polynomial(args)
    r = real_roots(p)
    out = []
    for Q in focal_points(p, r):
        out.append(
            {
                "label": Q.label,
                "i": Q.i,
                "j": Q.j,
                "point": [Q.x, Q.y],
                "prefocal_line_x": Q.prefocal_x,
                "transversality": transversality(Q),
                "singular_slopes": {str(l): m for l, m in singular_slopes(Q, r).items()},
            }
        )
    _emit({"polynomial": list(p.coeffs), "roots": list(r.roots), "focal_points": out})
    return EXIT_OK


def cmd_orbit(args) -> int:
    p = _polynomial(args)
    seed = _point(args.seed) if args.seed else (5.0, 3.0)
    out = iterate_orbit(p, seed, max_iter=args.max_iter, conv_tol=args.tol)
    print("step,tag,x,y")
    for n, pt in enumerate(out.trace or []):
        print(f"{n},{_tag(pt)},{_csv_coord(pt.x)},{_csv_coord(pt.y)}")
    last = out.points[0] if out.points else (out.trace[-1].x, out.trace[-1].y)
    print(f"outcome,{out.label()},{_csv_coord(last[0])},{_csv_coord(last[1])}")
    return EXIT_OK


def cmd_torus_orbit(args) -> int:
    p = _polynomial(args)
    pt = TorusPoint(*(_point(args.seed) if args.seed else (2.0, 2.0)))
    print("step,tag,x,y")
    for n in range(args.steps + 1):
        print(f"{n},{_tag(pt)},{_csv_coord(pt.x)},{_csv_coord(pt.y)}")
        if n < args.steps:
            pt = extended_step(p, pt)
    return EXIT_OK


def cmd_cycles(args) -> int:
    p = _polynomial(args)
    q = args.period or 1
    window = _window(args, None)
    grid = _res(args.res, (40, 40))
    reports = search_periodic(p, q, window=window, grid=grid, workers=args.workers)
    _emit({"polynomial": list(p.coeffs), "period": q, "cycles": [r.to_dict() for r in reports]})
    return EXIT_OK


def cmd_period4(args) -> int:
    quad = tuple(_floats(args.quad, 4, "--quad")) if args.quad else GOLDEN_QUADRUPLE
    derivs = tuple(_floats(args.derivs, 4, "--derivs")) if args.derivs else (-1.0, -1.0, -1.0, -1.0)
    p = construct_period4(*quad, derivs=derivs)
    _, newton = hermite_newton(period4_nodes(*quad, derivs))
    rep = verify_period4(p, quad)
    _emit(
        {
            "quadruple": list(quad),
            "derivatives": list(derivs),
            "polynomial": list(p.coeffs),
            "newton_coefficients": list(newton),
            "cycle": rep.to_dict(),
        }
    )
    return EXIT_OK


def cmd_render(args) -> int:
    p = _polynomial(args)
    w, h = _res(args.res, (600, 600))
    cfg = RenderConfig(_window(args, (-1.0, 5.0, -1.0, 5.0)), w, h, max_iter=args.max_iter, conv_tol=args.tol)
    grid = render(p, cfg, workers=args.workers)
    out = args.out or "basins.ppm"
    write_ppm(out, grid, shade=args.shade, max_iter=cfg.max_iter)
    if args.csv:
        write_class_csv(args.csv, grid)
    _emit({"polynomial": list(p.coeffs), "window": list(cfg.window), "resolution": [w, h], "output": out, "counts": grid.counts()})
    return EXIT_OK


def cmd_verify(args) -> int:
    only = [n.strip() for n in args.only.split(",")] if args.only else None
    try:
        results = acceptance.run_all(only, out=sys.stdout)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"failed: {', '.join(failed)}")
        return EXIT_ACCEPTANCE
    print(f"all {len(results)} checks passed")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="secant-dynamics", description="Dynamics of the secant map of a real polynomial.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def poly_flags(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--poly", help="ascending coefficients c0,c1,... (default 0,6,-5,1)")
        g.add_argument("--roots", help="monic polynomial from roots r1,r2,...")

    def iter_flags(sp):
        sp.add_argument("--max-iter", type=int, default=MAX_ITER)
        sp.add_argument("--tol", type=float, default=CONV_TOL, help="root convergence tolerance")

    sp = sub.add_parser("roots", help="real roots and derivatives")
    poly_flags(sp)
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("focal", help="focal points, prefocal lines and singular slopes")
    poly_flags(sp)
    sp.set_defaults(func=cmd_focal)

    sp = sub.add_parser("orbit", help="CSV trace of one orbit and its fate")
    poly_flags(sp)
    iter_flags(sp)
    sp.add_argument("--seed", help="x,y (either may be inf)")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("torus-orbit", help="CSV trace of the extended map, no classification")
    poly_flags(sp)
    sp.add_argument("--seed", help="x,y (either may be inf)")
    sp.add_argument("--steps", type=int, default=6)
    sp.set_defaults(func=cmd_torus_orbit)

    sp = sub.add_parser("cycles", help="periodic orbits of a given period (JSON)")
    poly_flags(sp)
    sp.add_argument("--period", type=int, default=1)
    sp.add_argument("--window", help="x0,x1,y0,y1 (default: Cauchy-bound square)")
    sp.add_argument("--res", help="seed grid WxH (default 40x40)")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_cycles)

    sp = sub.add_parser("period4", help="build and verify a polynomial with a four-cycle")
    sp.add_argument("--quad", help="a,b,c,d with a<b<c<d")
    sp.add_argument("--derivs", help="four derivative values (default -1,-1,-1,-1)")
    sp.set_defaults(func=cmd_period4)

    sp = sub.add_parser("render", help="basin image as binary PPM")
    poly_flags(sp)
    iter_flags(sp)
    sp.add_argument("--window", help="x0,x1,y0,y1 (default -1,5,-1,5)")
    sp.add_argument("--res", help="WxH (default 600x600)")
    sp.add_argument("--out", help="PPM path (default basins.ppm)")
    sp.add_argument("--csv", help="also write per-pixel class ids as CSV")
    sp.add_argument("--shade", action="store_true", help="darken root basins with iteration count")
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("verify-paper", help="run the acceptance checks")
    sp.add_argument("--only", help="comma-separated check names: " + ", ".join(acceptance.CHECKS))
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not 1 <= getattr(args, "period", 1) <= 8:
            raise UsageError("--period must be in 1..8")
        return args.func(args)
    except UsageError as exc:
        print(f"secant-dynamics: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SecantError as exc:
        print(f"secant-dynamics: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"secant-dynamics: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
