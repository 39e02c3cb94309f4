"""Cycle reports and 2x2 eigenvalues."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np


def eig2(m) -> tuple[complex | float, complex | float]:
    """Eigenvalues of a real 2x2 matrix, larger modulus first.

    Uses ``l1 = t/2 + sign(t) sqrt(t**2/4 - det)`` and ``l2 = det / l1`` to
    avoid cancellation when one eigenvalue is much smaller than the other.
    """
    a, b = float(m[0][0]), float(m[0][1])
    c, d = float(m[1][0]), float(m[1][1])
    half = 0.5 * (a + d)
    det = a * d - b * c
    # discriminant written without forming half**2 - det directly
    disc = (0.5 * (a - d)) ** 2 + b * c
    if disc >= 0.0:
        root = math.sqrt(disc)
        l1 = half + math.copysign(root, half)
        l2 = det / l1 if l1 != 0.0 else 0.0
        if abs(l2) > abs(l1):
            l1, l2 = l2, l1
        return l1, l2
    root = cmath.sqrt(disc)
    return complex(half) + root, complex(half) - root


def chain_product(mats) -> np.ndarray:
    """``M_{n-1} ... M_1 M_0``: the derivative of an n-fold composition."""
    out = np.eye(2)
    for m in mats:
        out = np.asarray(m, dtype=float) @ out
    return out


@dataclass
class CycleReport:
    """A periodic orbit with its multiplier matrix.

    ``points`` are in orbit order; entries are ``(x, y)`` pairs where an
    infinite coordinate is ``math.inf``. ``multiplier_matrix`` is the
    derivative of the ``period``-fold map at ``points[0]``.
    """

    points: list[tuple[float, float]]
    period: int
    multiplier_matrix: np.ndarray
    eigenvalues: tuple = field(default=())
    residual: float = 0.0
    charts: list[tuple[int, int]] | None = None

    def __post_init__(self):
        if not self.eigenvalues:
            self.eigenvalues = eig2(self.multiplier_matrix)

    @property
    def moduli(self) -> tuple[float, float]:
        return tuple(abs(v) for v in self.eigenvalues)

    @property
    def attracting(self) -> bool:
        return all(v < 1.0 for v in self.moduli)

    def to_dict(self) -> dict:
        def ev(v):
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return v

        return {
            "period": self.period,
            "points": [list(pt) for pt in self.points],
            "multiplier_matrix": [list(map(float, row)) for row in self.multiplier_matrix],
            "eigenvalues": [ev(v) for v in self.eigenvalues],
            "moduli": list(self.moduli),
            "attracting": self.attracting,
            "residual": self.residual,
        }
