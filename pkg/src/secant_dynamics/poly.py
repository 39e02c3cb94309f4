"""Real univariate polynomials and the divided-difference polynomial ``q``.

Coefficients are stored in ascending order, ``coeffs[j]`` multiplying ``x**j``.
All evaluators accept Python floats or numpy arrays; the arithmetic is the
same sequence of IEEE operations in both cases, so scalar and vectorised
callers see bitwise-identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DuplicateAbscissa, MultipleRootDetected

__all__ = [
    "Polynomial",
    "RootList",
    "horner",
    "q_eval",
    "q_partials",
    "q_derivative",
    "real_roots",
    "hermite_newton",
    "hermite_interpolate",
    "cauchy_bound",
    "sturm_chain",
]


def horner(coeffs: Sequence[float], x):
    """Evaluate ``sum(coeffs[j] * x**j)``, folding from the highest degree."""
    acc = coeffs[-1] + 0.0 * x
    for c in coeffs[-2::-1]:
        acc = acc * x + c
    return acc


def _trim(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(a) for a in coeffs]
    if not c:
        raise ValueError("coefficient list must not be empty")
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``a0 + a1 x + ... + ak x**k`` (not necessarily monic)."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[float], leading: float = 1.0) -> "Polynomial":
        c = [float(leading)]
        for r in roots:
            nxt = [0.0] * (len(c) + 1)
            for j, a in enumerate(c):
                nxt[j + 1] += a
                nxt[j] -= r * a
            c = nxt
        return cls(c)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Parse ``"0,6,-5,1"`` (ascending coefficients) or ``"roots:0,2,3"``."""
        text = text.strip()
        if text.startswith("roots:"):
            body = text[len("roots:"):]
            return cls.from_roots(float(t) for t in body.split(",") if t.strip())
        return cls(float(t) for t in text.split(","))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0.0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    @property
    def scale(self) -> float:
        """Largest coefficient magnitude."""
        return max(abs(a) for a in self.coeffs)

    def __call__(self, x):
        return horner(self.coeffs, x)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial([0.0])
        return Polynomial([j * a for j, a in enumerate(self.coeffs)][1:])

    def reversed(self) -> "Polynomial":
        """Coefficient reversal ``r(y) = y**k p(1/y)``, extended to ``y = 0``."""
        return Polynomial(self.coeffs[::-1])

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def to_text(self) -> str:
        return ",".join(repr(a) for a in self.coeffs)


def _coeffs(p) -> Sequence[float]:
    return p.coeffs if isinstance(p, Polynomial) else p


def _synthetic(coeffs: Sequence[float], y):
    """Quotient coefficients of ``p(t)`` divided by ``t - y`` (ascending)."""
    k = len(coeffs) - 1
    out = [None] * k
    c = coeffs[k] + 0.0 * y
    out[k - 1] = c
    for m in range(k - 1, 0, -1):
        c = coeffs[m] + y * c
        out[m - 1] = c
    return out


def q_eval(p, x, y):
    """Divided difference ``q(x, y)`` with ``p(x) - p(y) = (x - y) q(x, y)``.

    Evaluated as the quotient of ``p(t)`` by ``t - y`` taken at ``t = x``, i.e.
    the nested form of ``sum_j a_j (x**(j-1) + ... + y**(j-1))``. No division
    happens, so ``q(x, x) = p'(x)`` holds on the diagonal.
    """
    coeffs = _coeffs(p)
    if len(coeffs) < 2:
        return 0.0 * (x + y)
    return horner(_synthetic(coeffs, y), x)


def q_partials(p, x, y):
    """Return ``(dq/dx, dq/dy)``; ``q`` is symmetric so ``q_y(x, y) = q_x(y, x)``."""
    coeffs = _coeffs(p)
    if len(coeffs) < 3:
        z = 0.0 * (x + y)
        return z, z
    qx = horner([m * c for m, c in enumerate(_synthetic(coeffs, y))][1:], x)
    qy = horner([m * c for m, c in enumerate(_synthetic(coeffs, x))][1:], y)
    return qx, qy


def q_derivative(p, x: float, y: float, dx: int, dy: int) -> float:
    """Mixed partial ``d^(dx+dy) q / dx^dx dy^dy`` from the explicit double sum.

    Uses ``q(x, y) = sum_{i,l} a_{i+l+1} x**i y**l``. Cost is quadratic in the
    degree; meant for the handful of Hessian entries needed at focal points.
    """
    coeffs = _coeffs(p)
    k = len(coeffs) - 1
    total = 0.0
    for i in range(dx, k):
        fi = math.perm(i, dx)
        for l in range(dy, k - i):
            a = coeffs[i + l + 1]
            if a == 0.0:
                continue
            total += a * fi * math.perm(l, dy) * x ** (i - dx) * y ** (l - dy)
    return total


# --------------------------------------------------------------------------
# real roots


@dataclass(frozen=True)
class RootList:
    """Simple real roots in increasing order, with ``p'`` at each root."""

    roots: tuple[float, ...]
    derivs: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def cauchy_bound(p: Polynomial) -> float:
    """All roots satisfy ``|z| < 1 + max_{j<k} |a_j| / |a_k|``."""
    c = p.coeffs
    if len(c) == 1:
        return 1.0
    return 1.0 + max(abs(a) for a in c[:-1]) / abs(c[-1])


def _normalise(c: list[float]) -> list[float]:
    s = max(abs(a) for a in c)
    return [a / s for a in c] if s > 0 else c


def _remainder(a: list[float], b: list[float]) -> list[float]:
    """Remainder of ``a / b`` (ascending coefficient lists)."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and len(a) > 0:
        f = a[-1] / lead
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] -= f * b[j]
        a.pop()
    return a


def sturm_chain(p: Polynomial, rel_tol: float = 1e-11) -> list[list[float]]:
    """Floating-point Sturm sequence ``p, p', -rem(p, p'), ...``.

    Each member is rescaled to unit max-norm (a positive factor, so signs are
    kept); remainder coefficients below ``rel_tol`` of the dividend's norm are
    treated as zero.
    """
    chain = [_normalise(list(p.coeffs)), _normalise(list(p.derivative().coeffs))]
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        r = _remainder(a, b)
        cut = rel_tol * max(abs(v) for v in a)
        while r and abs(r[-1]) <= cut:
            r.pop()
        if not r:
            break
        chain.append(_normalise([-v for v in r]))
    return chain


def _sign_changes(chain: list[list[float]], t: float) -> int:
    count = 0
    last = 0.0
    for c in chain:
        v = horner(c, t)
        if v == 0.0:
            continue
        if last != 0.0 and (v > 0.0) != (last > 0.0):
            count += 1
        last = v
    return count


def real_roots(p: Polynomial, tol: float = 1e-12, width: float = 1e-7) -> RootList:
    """All real roots of a squarefree polynomial.

    Roots are isolated by Sturm sign counts on bisected sub-intervals of the
    Cauchy bound, bisected down to ``width`` and polished with at most 50
    Newton steps.

    Raises
    ------
    MultipleRootDetected
        If ``|p'|`` at a polished root is not above ``1e-8 (1 + bound)``.
    """
    if p.degree < 1:
        return RootList((), ())
    bound = cauchy_bound(p)
    chain = sturm_chain(p)
    dp = p.derivative()
    scale = p.scale

    found: list[float] = []
    lo, hi = -bound, bound
    stack = [(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count <= 0:
            continue
        if b - a <= width:
            found.extend([_polish(p, dp, a, b, tol, scale)] * count)
            continue
        m = 0.5 * (a + b)
        vm = _sign_changes(chain, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))

    found.sort()
    simple_tol = 1e-8 * (1.0 + bound)
    derivs = []
    for r in found:
        d = dp(r)
        if abs(d) <= simple_tol:
            raise MultipleRootDetected(f"root {r!r} has |p'| = {abs(d):.3g}")
        derivs.append(d)
    if any(b <= a for a, b in zip(found, found[1:])):
        raise MultipleRootDetected("isolated roots coincide after polishing")
    return RootList(tuple(found), tuple(derivs))


def _polish(p: Polynomial, dp: Polynomial, a: float, b: float, tol: float, scale: float) -> float:
    # Keeps stepping past ``tol * (1 + scale)`` while |p| still decreases.
    x = 0.5 * (a + b)
    pad = 2.0 * (b - a)
    v = p(x)
    for _ in range(50):
        if v == 0.0:
            break
        d = dp(x)
        if d == 0.0:
            break
        nxt = x - v / d
        if nxt == x or not (a - pad <= nxt <= b + pad):
            break
        vn = p(nxt)
        if abs(vn) >= abs(v) and abs(v) <= tol * (1.0 + scale):
            break
        x, v = nxt, vn
    return x


# --------------------------------------------------------------------------
# Hermite interpolation


def hermite_newton(nodes: Sequence[tuple[float, float, float]]):
    """Divided-difference table for value and slope data at distinct nodes.

    Parameters
    ----------
    nodes : sequence of ``(x, value, derivative)``

    Returns
    -------
    z : list of float
        Doubled abscissae ``x0, x0, x1, x1, ...`` in input order.
    coef : list of float
        Newton-basis coefficients: ``p(x) = sum_i coef[i] * prod_{m<i} (x - z[m])``.
    """
    if not nodes:
        raise ValueError("need at least one node")
    xs = [float(n[0]) for n in nodes]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa(f"repeated abscissa in {xs}")
    z: list[float] = []
    col: list[float] = []
    slopes: list[float] = []
    for x, v, d in nodes:
        z += [float(x), float(x)]
        col += [float(v), float(v)]
        slopes.append(float(d))
    n = len(z)
    coef = [col[0]]
    for order in range(1, n):
        nxt = []
        for i in range(n - order):
            if order == 1 and i % 2 == 0:
                nxt.append(slopes[i // 2])
            else:
                nxt.append((col[i + 1] - col[i]) / (z[i + order] - z[i]))
        col = nxt
        coef.append(col[0])
    return z, coef


def hermite_interpolate(nodes: Sequence[tuple[float, float, float]]) -> Polynomial:
    """Unique polynomial of degree ``<= 2 len(nodes) - 1`` matching values and slopes."""
    z, coef = hermite_newton(nodes)
    acc = [coef[-1]]
    for i in range(len(coef) - 2, -1, -1):
        # acc <- acc * (x - z[i]) + coef[i]
        nxt = [0.0] * (len(acc) + 1)
        for j, a in enumerate(acc):
            nxt[j + 1] += a
            nxt[j] -= z[i] * a
        nxt[0] += coef[i]
        acc = nxt
    return Polynomial(acc)
