"""The plane secant map, its Jacobian and its singular set."""

from __future__ import annotations

import enum

import numpy as np

from .errors import CriticalPoint, FocalHit, SingularHit, SingularJacobian
from .poly import Polynomial, q_eval, q_partials

SINGULAR_TOL = 1e-12


class SingularClass(enum.Enum):
    REGULAR = 0
    DELTA1 = 1  # p(x) = p(y) with x != y
    DELTA2 = 2  # diagonal point with p'(x) = 0
    FOCAL = 3  # pair of distinct roots


def _singular_scale(q, y, py):
    return 1.0 + abs(y * q) + abs(py)


def classify_singular(p: Polynomial, x: float, y: float, tol: float = SINGULAR_TOL) -> SingularClass:
    """Locate ``(x, y)`` with respect to the curve ``q = 0``.

    The test is relative: ``|q| <= tol * (1 + |y q| + |p(y)|)`` counts as
    singular.
    """
    q = q_eval(p, x, y)
    py = p(y)
    scale = _singular_scale(q, y, py)
    if abs(q) > tol * scale:
        return SingularClass.REGULAR
    if abs(x - y) <= tol * (1.0 + abs(x) + abs(y)):
        return SingularClass.DELTA2
    if abs(py) <= tol * scale:
        return SingularClass.FOCAL
    return SingularClass.DELTA1


def secant_step(p: Polynomial, x: float, y: float, tol: float = SINGULAR_TOL) -> tuple[float, float]:
    """One step ``(x, y) -> (y, (y q - p(y)) / q)``.

    Raises
    ------
    FocalHit
        At a focal point (both numerator and denominator vanish).
    SingularHit
        Elsewhere on the singular curve; ``err.kind`` tells which branch.
    """
    q = q_eval(p, x, y)
    py = p(y)
    if abs(q) <= tol * _singular_scale(q, y, py):
        kind = classify_singular(p, x, y, tol)
        if kind is SingularClass.FOCAL:
            raise FocalHit(kind, (x, y))
        raise SingularHit(kind, (x, y))
    return y, (y * q - py) / q


def jacobian(p: Polynomial, x: float, y: float, tol: float = SINGULAR_TOL) -> np.ndarray:
    """Derivative of the secant map: rows ``(0, 1)`` and ``(A, B)``.

    ``A = p(y) q_x / q**2`` and ``B = p(x) q_y / q**2``.
    """
    q = q_eval(p, x, y)
    py = p(y)
    if abs(q) <= tol * _singular_scale(q, y, py):
        raise SingularJacobian(f"q vanishes at {(x, y)}")
    qx, qy = q_partials(p, x, y)
    q2 = q * q
    return np.array([[0.0, 1.0], [py * qx / q2, p(x) * qy / q2]])


def newton_step(p: Polynomial, x: float, tol: float = SINGULAR_TOL) -> float:
    d = p.derivative()(x)
    v = p(x)
    if abs(d) <= tol * (1.0 + abs(v)):
        raise CriticalPoint(f"p'({x!r}) = {d!r}")
    return x - v / d
