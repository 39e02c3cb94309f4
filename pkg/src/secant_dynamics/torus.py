"""Extension of the secant map to the punctured torus.

The phase space is the plane together with two circles at infinity: points
``(x, inf)`` (vertical infinity) and ``(inf, y)`` (horizontal infinity), with
``+inf`` and ``-inf`` identified. The corner ``(inf, inf)`` is missing.

Three charts cover it::

    chart 1: (x, y) -> (x, y)
    chart 2: (x, y) -> (x, 1/y)      covers (x, inf) -> (x, 0)
    chart 3: (x, y) -> (1/x, y)      covers (inf, y) -> (0, y)

Coordinates whose magnitude exceeds ``OVERFLOW`` are pushed through the
chart-2/chart-3 formulas instead of the plane formula; the formulas agree
algebraically, so the threshold only picks the better-conditioned expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cycle import CycleReport, chain_product, eig2
from .errors import ChartDomain, CornerOverflow, DegreeTooLow, FocalHit, NotCritical, NotPeriodic
from .poly import Polynomial, horner, q_eval
from .secant import SINGULAR_TOL, SingularClass

OVERFLOW = 1e8
FD_STEP = 1e-6

OK, FOCAL, CORNER = 0, 1, 2

INF = math.inf


@dataclass(frozen=True)
class TorusPoint:
    """Point of the punctured torus; an infinite slot holds ``math.inf``."""

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if math.isnan(x) or math.isnan(y):
            raise ValueError("NaN coordinate")
        if math.isinf(x) and math.isinf(y):
            raise CornerOverflow("(inf, inf) is not a point of the punctured torus")
        object.__setattr__(self, "x", abs(x) if math.isinf(x) else x)
        object.__setattr__(self, "y", abs(y) if math.isinf(y) else y)

    @classmethod
    def finite(cls, x: float, y: float) -> "TorusPoint":
        return cls(x, y)

    @classmethod
    def vert_inf(cls, x: float) -> "TorusPoint":
        return cls(x, INF)

    @classmethod
    def horiz_inf(cls, y: float) -> "TorusPoint":
        return cls(INF, y)

    @property
    def kind(self) -> str:
        if math.isinf(self.y):
            return "vert_inf"
        if math.isinf(self.x):
            return "horiz_inf"
        return "finite"

    def __iter__(self):
        return iter((self.x, self.y))


def chart_encode(pt: TorusPoint, chart: int) -> tuple[float, float]:
    x, y = pt.x, pt.y
    if chart == 1:
        if pt.kind != "finite":
            raise ChartDomain(f"{pt} is not in chart 1")
        return x, y
    if chart == 2:
        if math.isinf(x) or y == 0.0:
            raise ChartDomain(f"{pt} is not in chart 2")
        return x, (0.0 if math.isinf(y) else 1.0 / y)
    if chart == 3:
        if math.isinf(y) or x == 0.0:
            raise ChartDomain(f"{pt} is not in chart 3")
        return (0.0 if math.isinf(x) else 1.0 / x), y
    raise ValueError(f"unknown chart {chart}")


def chart_decode(coords: tuple[float, float], chart: int) -> TorusPoint:
    u, v = float(coords[0]), float(coords[1])
    if chart == 1:
        return TorusPoint(u, v)
    if chart == 2:
        return TorusPoint(u, INF if v == 0.0 else 1.0 / v)
    if chart == 3:
        return TorusPoint(INF if u == 0.0 else 1.0 / u, v)
    raise ValueError(f"unknown chart {chart}")


def _powers(t, k):
    """Return ``(t**(k-1), t**k)`` by repeated multiplication."""
    a = 1.0 + 0.0 * t
    for _ in range(k - 1):
        a = a * t
    return a, a * t


def step_arrays(p: Polynomial, x: np.ndarray, y: np.ndarray, tol: float = SINGULAR_TOL):
    """Vectorised extended step.

    Returns ``(new_x, new_y, status)`` with status ``OK``, ``FOCAL`` or
    ``CORNER``. Rows with a non-OK status carry unspecified coordinates.
    """
    coeffs = p.coeffs
    rcoeffs = coeffs[::-1]
    k = len(coeffs) - 1
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ax, ay = np.abs(x), np.abs(y)
    big_x = ~(ax <= OVERFLOW)
    big_y = ~(ay <= OVERFLOW)
    new_y = np.empty_like(y)
    status = np.zeros(x.shape, dtype=np.int8)
    status[big_x & big_y] = CORNER

    with np.errstate(all="ignore"):
        fin = ~big_x & ~big_y
        if fin.any():
            xf, yf = x[fin], y[fin]
            q = q_eval(coeffs, xf, yf)
            py = horner(coeffs, yf)
            yq = yf * q
            scale = 1.0 + np.abs(yq) + np.abs(py)
            sing = np.abs(q) <= tol * scale
            val = (yq - py) / q
            val[sing] = INF
            focal = sing & (np.abs(xf - yf) > tol * (1.0 + np.abs(xf) + np.abs(yf))) & (np.abs(py) <= tol * scale)
            new_y[fin] = val
            st = status[fin]
            st[focal] = FOCAL
            status[fin] = st

        # (x, y) with y at or near infinity: chart 2 in, chart 3 out
        c2 = ~big_x & big_y
        if c2.any():
            xs = x[c2]
            v = 1.0 / y[c2]
            rv = horner(rcoeffs, v)
            px = horner(coeffs, xs)
            vk1, vk = _powers(v, k)
            den = rv - px * vk
            out = (rv * xs - px * vk1) / den
            out[den == 0.0] = INF
            # exact infinity: the formula reduces to r(0) x / r(0)
            out = np.where(v == 0.0, xs, out)
            new_y[c2] = out

        # (x, y) with x at or near infinity: chart 3 in, chart 1 out
        c3 = big_x & ~big_y
        if c3.any():
            ys = y[c3]
            u = 1.0 / x[c3]
            ru = horner(rcoeffs, u)
            py = horner(coeffs, ys)
            uk1, uk = _powers(u, k)
            den = py * uk - ru
            out = (py * uk1 - ys * ru) / den
            out[den == 0.0] = INF
            out = np.where(u == 0.0, ys, out)
            new_y[c3] = out

    new_x = np.where(np.isinf(y), INF, y)
    new_y = np.where(np.isinf(new_y), INF, new_y)
    return new_x, new_y, status


def extended_step(p: Polynomial, pt: TorusPoint, tol: float = SINGULAR_TOL) -> TorusPoint:
    """Apply the extended map to a single point.

    Raises
    ------
    FocalHit
        At a focal point.
    CornerOverflow
        When both coordinates are beyond ``OVERFLOW``.
    """
    nx, ny, st = step_arrays(p, np.array([pt.x]), np.array([pt.y]), tol)
    if st[0] == FOCAL:
        raise FocalHit(SingularClass.FOCAL, (pt.x, pt.y))
    if st[0] == CORNER:
        raise CornerOverflow(f"both coordinates of {pt} are beyond {OVERFLOW:g}")
    return TorusPoint(float(nx[0]), float(ny[0]))


# --------------------------------------------------------------------------
# chart expressions and their derivatives


def chart_map(p: Polynomial, in_chart: int, out_chart: int, u: float, v: float) -> tuple[float, float]:
    """The extended map written in a pair of charts.

    Supported pairs are those the map actually uses: ``(1, 1)`` off the
    singular curve, ``(1, 2)`` near it, ``(2, 3)`` near vertical infinity and
    ``(3, 1)`` near horizontal infinity.
    """
    c = p.coeffs
    k = len(c) - 1
    if (in_chart, out_chart) == (1, 1):
        q = q_eval(c, u, v)
        return v, (v * q - horner(c, v)) / q
    if (in_chart, out_chart) == (1, 2):
        q = q_eval(c, u, v)
        return v, q / (v * q - horner(c, v))
    if (in_chart, out_chart) == (2, 3):
        x, w = u, v
        rw = horner(c[::-1], w)
        px = horner(c, x)
        wk1, wk = _powers(w, k)
        return w, (rw * x - px * wk1) / (rw - px * wk)
    if (in_chart, out_chart) == (3, 1):
        w, y = u, v
        rw = horner(c[::-1], w)
        py = horner(c, y)
        wk1, wk = _powers(w, k)
        return y, (py * wk1 - y * rw) / (py * wk - rw)
    raise ValueError(f"chart pair {(in_chart, out_chart)} is not used by the map")


def charts_for(p: Polynomial, pt: TorusPoint, tol: float = SINGULAR_TOL) -> tuple[int, int]:
    """Input and output charts used to express the map at ``pt``."""
    if pt.kind == "vert_inf" or abs(pt.y) > OVERFLOW:
        return 2, 3
    if pt.kind == "horiz_inf" or abs(pt.x) > OVERFLOW:
        return 3, 1
    img = extended_step(p, pt, tol)
    if math.isinf(img.y) or abs(img.y) > OVERFLOW:
        return 1, 2
    return 1, 1


def extended_jacobian(p: Polynomial, pt: TorusPoint, tol: float = SINGULAR_TOL):
    """Derivative of the chart expression at ``pt`` by central differences.

    Returns ``(J, in_chart, out_chart)``.

    Raises
    ------
    DegreeTooLow
        For quadratics at points at infinity, where the closed forms used by
        the three-cycle argument need degree at least three.
    """
    if pt.kind != "finite" and p.degree < 3:
        raise DegreeTooLow("the infinity charts need degree >= 3")
    cin, cout = charts_for(p, pt, tol)
    u0, v0 = chart_encode(pt, cin)
    h = FD_STEP
    fu_p = chart_map(p, cin, cout, u0 + h, v0)
    fu_m = chart_map(p, cin, cout, u0 - h, v0)
    fv_p = chart_map(p, cin, cout, u0, v0 + h)
    fv_m = chart_map(p, cin, cout, u0, v0 - h)
    J = np.array(
        [
            [(fu_p[0] - fu_m[0]) / (2 * h), (fv_p[0] - fv_m[0]) / (2 * h)],
            [(fu_p[1] - fu_m[1]) / (2 * h), (fv_p[1] - fv_m[1]) / (2 * h)],
        ]
    )
    return J, cin, cout


def critical_three_cycle(p: Polynomial, x0: float, tol: float = 1e-9) -> CycleReport:
    """The cycle ``(x0, x0) -> (x0, inf) -> (inf, x0) -> (x0, x0)`` at a critical point.

    Raises
    ------
    NotCritical
        If ``|p'(x0)| > tol (1 + |p(x0)|)`` or ``p(x0) = 0``.
    NotPeriodic
        If the three steps do not close up.
    """
    if p.degree < 3:
        raise DegreeTooLow("the three-cycle multipliers need degree >= 3")
    d = p.derivative()(x0)
    v = p(x0)
    if abs(d) > tol * (1.0 + abs(v)) or v == 0.0:
        raise NotCritical(f"p'({x0!r}) = {d!r}, p({x0!r}) = {v!r}")
    start = TorusPoint(x0, x0)
    pts = [start]
    for _ in range(3):
        pts.append(extended_step(p, pts[-1]))
    expected = [TorusPoint.vert_inf(x0), TorusPoint.horiz_inf(x0), start]
    if pts[1:] != expected:
        raise NotPeriodic(f"orbit {pts} does not close")
    jacs, charts = [], []
    for pt in pts[:3]:
        J, cin, cout = extended_jacobian(p, pt)
        jacs.append(J)
        charts.append((cin, cout))
    M = chain_product(jacs)
    return CycleReport(
        points=[(pt.x, pt.y) for pt in pts[:3]],
        period=3,
        multiplier_matrix=M,
        eigenvalues=eig2(M),
        charts=charts,
    )


def chart_consistency_error(p: Polynomial, x0: float, y: float) -> float:
    """Gap between the plane formula for ``S(x0, y)`` and the chart value at ``(x0, inf)``.

    The first coordinate re-encodes in chart 3 as ``1/y`` exactly, so only the
    second is compared, against the chart-2-to-3 formula at ``(x0, 0)``. The
    gap shrinks like ``1/|y|``.
    """
    q = q_eval(p, x0, y)
    v = (y * q - p(y)) / q
    return abs(v - chart_map(p, 2, 3, x0, 0.0)[1])
