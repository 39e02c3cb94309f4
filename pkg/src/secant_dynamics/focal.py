"""Focal points of the secant map and the slope/point correspondence.

At a focal point ``Q = (a_i, a_j)`` (two distinct roots) the second component
``N / D`` with ``N = y q - p(y)`` and ``D = q`` is of the form 0/0. An arc
through ``Q`` with slope ``m`` is sent to an arc through ``(a_j, y(m))`` on the
prefocal line ``x = a_j``; the map ``m -> y(m)`` is a Moebius bijection of the
projective line. Slopes are therefore real numbers or ``math.inf`` (the
vertical direction; ``+inf`` and ``-inf`` are the same point).

Root indices are 0-based: ``FocalPoint(i=2, j=1)`` of ``x(x-2)(x-3)`` is the
point usually labelled ``Q_{3,2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotSingularSlope
from .poly import Polynomial, RootList, q_derivative

INF = math.inf
SLOPE_MATCH_TOL = 1e-9


def _is_inf(v: float) -> bool:
    return math.isinf(v)


@dataclass(frozen=True)
class FocalPoint:
    i: int
    j: int
    x: float  # root a_i
    y: float  # root a_j
    dpi: float  # p'(a_i)
    dpj: float  # p'(a_j)

    @property
    def prefocal_x(self) -> float:
        return self.y

    @property
    def label(self) -> str:
        return f"Q_{{{self.i + 1},{self.j + 1}}}"

    def gradients(self) -> tuple[float, float, float, float]:
        """``(N_x, N_y, D_x, D_y)`` at the focal point, in closed form."""
        ai, aj, di, dj = self.x, self.y, self.dpi, self.dpj
        h = ai - aj
        return aj * di / h, -ai * dj / h, di / h, -dj / h


@dataclass(frozen=True)
class CurveGerm:
    """Second-order jet of the arc ``Q + (1, m) t + (1, kappa) t**2 / 2``."""

    base: FocalPoint
    slope: float
    curvature: float

    def point(self, t: float) -> tuple[float, float]:
        q = self.base
        return q.x + t + 0.5 * t * t, q.y + self.slope * t + 0.5 * self.curvature * t * t


def focal_points(p: Polynomial, roots: RootList) -> list[FocalPoint]:
    """All ``n (n - 1)`` ordered pairs of distinct roots."""
    out = []
    for i, (ai, di) in enumerate(zip(roots.roots, roots.derivs)):
        for j, (aj, dj) in enumerate(zip(roots.roots, roots.derivs)):
            if i != j:
                out.append(FocalPoint(i, j, ai, aj, di, dj))
    return out


def transversality(Q: FocalPoint) -> float:
    """``N_x D_y - N_y D_x`` at ``Q``, equal to ``p'(a_i) p'(a_j) / (a_i - a_j)``."""
    return Q.dpi * Q.dpj / (Q.x - Q.y)


def slope_to_point(Q: FocalPoint, m: float) -> float:
    """Ordinate on the prefocal line hit by the image of an arc of slope ``m``."""
    ai, aj, di, dj = Q.x, Q.y, Q.dpi, Q.dpj
    if _is_inf(m):
        return ai
    den = di - dj * m
    if den == 0.0:
        return INF
    return (aj * di - ai * dj * m) / den


def point_to_slope(Q: FocalPoint, y: float) -> float:
    """Inverse of :func:`slope_to_point`."""
    ai, aj, di, dj = Q.x, Q.y, Q.dpi, Q.dpj
    if _is_inf(y):
        return di / dj
    den = dj * (ai - y)
    if den == 0.0:
        return INF
    return di * (aj - y) / den


def singular_slopes(Q: FocalPoint, roots: RootList) -> dict[int, float]:
    """Slopes whose image lands on another focal point ``(a_j, a_l)``.

    Keyed by the root index ``l`` (``l`` not in ``{i, j}``).
    """
    out = {}
    for l, al in enumerate(roots.roots):
        if l in (Q.i, Q.j):
            continue
        out[l] = Q.dpi / Q.dpj * (Q.y - al) / (Q.x - al)
    return out


def kappa_coefficient(Q: FocalPoint, al: float) -> float:
    """Rate at which the image slope at ``(a_j, a_l)`` moves with curvature."""
    ai, aj, di, dj = Q.x, Q.y, Q.dpi, Q.dpj
    m = di / dj * (aj - al) / (ai - al)
    b = (di - dj * m) / (ai - aj)
    return (al - ai) / (ai - aj) * dj / (2.0 * b)


def _hessians(p: Polynomial, Q: FocalPoint):
    """Hessians of ``N = y q - p(y)`` and ``D = q`` at ``Q``."""
    x, y = Q.x, Q.y
    qx = q_derivative(p, x, y, 1, 0)
    qy = q_derivative(p, x, y, 0, 1)
    qxx = q_derivative(p, x, y, 2, 0)
    qxy = q_derivative(p, x, y, 1, 1)
    qyy = q_derivative(p, x, y, 0, 2)
    d2p = p.derivative().derivative()(y)
    # q itself vanishes at Q, which drops it from N_xy
    n_xx = y * qxx
    n_xy = qx + y * qxy
    n_yy = 2.0 * qy + y * qyy - d2p
    return (n_xx, n_xy, n_yy), (qxx, qxy, qyy)


def image_tangent_of_germ(p: Polynomial, roots: RootList, germ: CurveGerm, l: int) -> tuple[float, float]:
    """Tangent vector at ``t = 0`` of the image of an arc through a singular slope.

    The arc must leave ``germ.base`` with the singular slope ``m_l``; its image
    then passes through the focal point ``(a_j, a_l)`` and the returned vector
    is ``(m_l, v(kappa))`` with
    ``v = (f''(0) - g''(0) a / b) / (2 b)``, where ``f = N o gamma``,
    ``g = D o gamma``, ``a = f'(0)`` and ``b = g'(0)``.

    Raises
    ------
    NotSingularSlope
        If ``germ.slope`` is not within ``1e-9 (1 + |m_l|)`` of ``m_l``.
    """
    Q = germ.base
    ml = singular_slopes(Q, roots).get(l)
    if ml is None or abs(germ.slope - ml) > SLOPE_MATCH_TOL * (1.0 + abs(ml)):
        raise NotSingularSlope(f"slope {germ.slope!r} is not m_{l} of {Q.label}")
    ai, aj, di, dj = Q.x, Q.y, Q.dpi, Q.dpj
    a = (aj * di - ai * dj * ml) / (ai - aj)
    b = (di - dj * ml) / (ai - aj)
    Nx, Ny, Dx, Dy = Q.gradients()
    (nxx, nxy, nyy), (dxx, dxy, dyy) = _hessians(p, Q)
    k = germ.curvature
    f2 = nxx + 2.0 * nxy * ml + nyy * ml * ml + Nx + Ny * k
    g2 = dxx + 2.0 * dxy * ml + dyy * ml * ml + Dx + Dy * k
    return ml, (f2 - g2 * a / b) / (2.0 * b)
