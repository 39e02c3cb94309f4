"""Orbits, outcome classification and periodic orbits of the secant map."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cycle import CycleReport, chain_product
from .errors import (
    DidNotConverge,
    IncompatibleQuadruple,
    MultipleRootDetected,
    NotPeriodic,
    SingularEncounter,
    SingularHit,
)
from .poly import Polynomial, RootList, cauchy_bound, hermite_interpolate, q_eval, q_partials, real_roots
from .secant import SINGULAR_TOL, jacobian, secant_step
from .torus import CORNER, FOCAL, TorusPoint, step_arrays

CONV_TOL = 1e-10
CYCLE_TOL = 1e-8
MAX_ITER = 200
MAX_PERIOD = 64
# an orbit that spends the last SHADOW_STEPS iterates within SHADOW_TOL (in
# chart coordinates) of a critical three-cycle is counted as attracted to it
SHADOW_TOL = 1e-2
SHADOW_STEPS = 30
# periodic-orbit candidates passing this close to a diagonal critical point
# (c, c) are near-solutions shadowing the critical three-cycle at infinity
CRITICAL_SEP = 1e-3

ROOT, CYCLE, FOCAL_HIT, EXHAUSTED = 0, 1, 2, 3
KIND_NAMES = {ROOT: "root", CYCLE: "cycle", FOCAL_HIT: "focal", EXHAUSTED: "exhausted"}


def critical_points(p: Polynomial) -> list[float]:
    """Real critical points that are not roots."""
    dp = p.derivative()
    if dp.degree < 1:
        return []
    try:
        crit = list(real_roots(dp).roots)
    except MultipleRootDetected:
        vals = np.roots(dp.coeffs[::-1])
        crit = sorted({float(v.real) for v in vals if abs(v.imag) < 1e-7})
    return [c for c in crit if p(c) != 0.0]


def _coord_dist(u, w):
    """Distance on the circle R u {inf}, taken in whichever chart is closer."""
    with np.errstate(all="ignore"):
        return np.fmin(np.abs(u - w), np.abs(1.0 / u - 1.0 / w))


@dataclass
class BatchResult:
    kind: np.ndarray
    root_index: np.ndarray
    iterations: np.ndarray
    period: np.ndarray


def orbit_batch(
    p: Polynomial,
    roots: RootList,
    xs,
    ys,
    max_iter: int = MAX_ITER,
    conv_tol: float = CONV_TOL,
    cycle_tol: float = CYCLE_TOL,
    crit: list[float] | None = None,
    trace: list | None = None,
) -> BatchResult:
    """Iterate many seeds of the extended map at once and classify each.

    Outcomes, checked after every step in this order:

    * focal hit (or both coordinates at infinity), terminal;
    * root ``k``: two consecutive iterates within ``conv_tol`` of ``(a_k, a_k)``;
    * cycle: a Brent-style checkpoint is revisited within ``cycle_tol`` after
      ``period <= 64`` steps and again after one further loop;
    * at the end of the budget, a critical three-cycle if the orbit shadowed
      one for the last ``SHADOW_STEPS`` iterates, otherwise exhausted.

    With ``trace`` given, the iterates of the first seed are appended to it.
    """
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    n = xs.size
    kind = np.full(n, EXHAUSTED, dtype=np.int8)
    root_index = np.full(n, -1, dtype=np.int16)
    iterations = np.full(n, max_iter, dtype=np.int32)
    period = np.zeros(n, dtype=np.int16)
    if crit is None:
        crit = critical_points(p)
    alphas = list(roots.roots)
    crit = list(crit)

    def near_root(x, y):
        r = np.full(x.shape, -1, dtype=np.int16)
        for k, a in enumerate(alphas):
            r[(np.abs(x - a) <= conv_tol) & (np.abs(y - a) <= conv_tol)] = k
        return r

    def near_crit_cycle(x, y):
        out = np.zeros(x.shape, dtype=bool)
        if not crit:
            return out
        with np.errstate(all="ignore"):
            xi = np.abs(1.0 / x) <= SHADOW_TOL
            yi = np.abs(1.0 / y) <= SHADOW_TOL
        for c in crit:
            xc = np.abs(x - c) <= SHADOW_TOL
            yc = np.abs(y - c) <= SHADOW_TOL
            out |= (xc & yc) | (xc & yi) | (xi & yc)
        return out

    idx = np.arange(n)
    x, y = xs.copy(), ys.copy()
    prev = near_root(x, y)
    chk_x, chk_y = x.copy(), y.copy()
    power = np.ones(n, dtype=np.int32)
    lam = np.zeros(n, dtype=np.int32)
    cand = np.zeros(n, dtype=np.int32)
    shadow = np.zeros(n, dtype=np.int32)
    if trace is not None and n:
        trace.append((float(x[0]), float(y[0])))

    for step in range(1, max_iter + 1):
        if idx.size == 0:
            break
        x, y, status = step_arrays(p, x, y)
        if trace is not None and idx.size and idx[0] == 0 and status[0] == 0:
            trace.append((float(x[0]), float(y[0])))
        done = np.zeros(idx.size, dtype=bool)

        bad = status != 0
        if bad.any():
            hit = idx[status == FOCAL]
            kind[hit] = FOCAL_HIT
            iterations[hit] = step - 1
            corner = idx[status == CORNER]
            kind[corner] = EXHAUSTED
            iterations[corner] = step - 1
            done |= bad

        cur = near_root(x, y)
        conv = ~done & (cur >= 0) & (cur == prev)
        if conv.any():
            kind[idx[conv]] = ROOT
            root_index[idx[conv]] = cur[conv]
            iterations[idx[conv]] = step
            done |= conv
        prev = cur

        lam += 1
        match = (np.fmax(_coord_dist(x, chk_x), _coord_dist(y, chk_y)) <= cycle_tol) & (lam >= 2)
        searching = cand == 0
        confirmed = ~done & ~searching & match & (cand % np.maximum(lam, 1) == 0)
        if confirmed.any():
            kind[idx[confirmed]] = CYCLE
            period[idx[confirmed]] = lam[confirmed]
            iterations[idx[confirmed]] = step
            done |= confirmed
        new_cand = searching & match
        failed = ~searching & ~confirmed & (lam >= cand)
        grow = searching & ~match & (lam >= power)
        reset = new_cand | failed | grow
        cand = np.where(new_cand, lam, np.where(failed, 0, cand))
        power = np.where(grow, np.minimum(2 * power, MAX_PERIOD), power)
        chk_x = np.where(reset, x, chk_x)
        chk_y = np.where(reset, y, chk_y)
        lam = np.where(reset, 0, lam)

        shadow = np.where(near_crit_cycle(x, y), shadow + 1, 0)

        if done.any():
            keep = ~done
            idx, x, y, prev = idx[keep], x[keep], y[keep], prev[keep]
            chk_x, chk_y, power, lam, cand, shadow = (
                chk_x[keep], chk_y[keep], power[keep], lam[keep], cand[keep], shadow[keep],
            )

    if idx.size:
        caught = shadow >= SHADOW_STEPS
        kind[idx[caught]] = CYCLE
        period[idx[caught]] = 3
    return BatchResult(kind, root_index, iterations, period)


# --------------------------------------------------------------------------
# single orbits


@dataclass
class OrbitOutcome:
    """Fate of one seed.

    ``kind`` is ``"root"``, ``"cycle"``, ``"focal"`` or ``"exhausted"``.
    """

    kind: str
    iterations: int
    root_index: int | None = None
    root: float | None = None
    period: int | None = None
    points: list[tuple[float, float]] = field(default_factory=list)
    trace: list[TorusPoint] | None = None

    def label(self) -> str:
        if self.kind == "root":
            return f"root({self.root_index})"
        if self.kind == "cycle":
            return f"cycle({self.period})"
        return self.kind


def _as_pair(seed) -> tuple[float, float]:
    if isinstance(seed, TorusPoint):
        return seed.x, seed.y
    x, y = seed
    return float(x), float(y)


def iterate_orbit(
    p: Polynomial,
    seed,
    max_iter: int = MAX_ITER,
    conv_tol: float = CONV_TOL,
    cycle_tol: float = CYCLE_TOL,
    roots: RootList | None = None,
    keep_trace: bool = True,
) -> OrbitOutcome:
    """Follow the orbit of ``seed`` through the extended map and classify it."""
    if roots is None:
        roots = real_roots(p)
    x0, y0 = _as_pair(seed)
    tr: list = []
    res = orbit_batch(p, roots, [x0], [y0], max_iter, conv_tol, cycle_tol, trace=tr)
    k = int(res.kind[0])
    its = int(res.iterations[0])
    pts = [TorusPoint(*pt) for pt in tr]
    out = OrbitOutcome(KIND_NAMES[k], its, trace=pts if keep_trace else None)
    if k == ROOT:
        out.root_index = int(res.root_index[0])
        out.root = roots.roots[out.root_index]
    elif k == CYCLE:
        out.period = int(res.period[0])
        out.points = [(pt.x, pt.y) for pt in pts[-out.period:]]
    elif k == FOCAL_HIT:
        out.points = [(pt.x, pt.y) for pt in pts[-1:]]
    return out


# --------------------------------------------------------------------------
# periodic orbits


def _compose_arrays(p: Polynomial, x, y, q: int, tol: float = SINGULAR_TOL):
    """``q``-fold map with its chain-rule Jacobian, vectorised.

    Returns ``(xq, yq, j11, j12, j21, j22, ok)``; ``ok`` is False where an
    iterate met the singular curve.
    """
    c = p.coeffs
    ok = np.ones(x.shape, dtype=bool)
    j11, j12 = np.ones_like(x), np.zeros_like(x)
    j21, j22 = np.zeros_like(x), np.ones_like(x)
    with np.errstate(all="ignore"):
        for _ in range(q):
            qq = q_eval(c, x, y)
            px, py = p(x), p(y)
            ok &= np.abs(qq) > tol * (1.0 + np.abs(y * qq) + np.abs(py))
            qx, qy = q_partials(c, x, y)
            q2 = qq * qq
            a = py * qx / q2
            b = px * qy / q2
            j11, j12, j21, j22 = j21, j22, a * j11 + b * j21, a * j12 + b * j22
            x, y = y, (y * qq - py) / qq
    ok &= np.isfinite(x) & np.isfinite(y)
    return x, y, j11, j12, j21, j22, ok


def _newton_periodic(
    p: Polynomial,
    x,
    y,
    q: int,
    max_steps: int = 100,
    accept_tol: float = 1e-9,
    bound: float = 1e6,
):
    """Damped Newton on ``S^q(z) - z = 0`` for many starting points.

    Iterates keep going until the residual stops falling, which is usually
    near ``1e-13`` but can be a few ulps higher for badly conditioned
    compositions. A point counts as converged when the final residual is at
    most ``accept_tol (1 + |z|)``.
    Returns refined ``(x, y, residual, converged)``.
    """
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)

    def residual(x, y):
        xq, yq, *_ , ok = _compose_arrays(p, x, y, q)
        r = np.hypot(xq - x, yq - y)
        return np.where(ok, r, np.inf)

    xq, yq, j11, j12, j21, j22, ok = _compose_arrays(p, x, y, q)
    res = np.where(ok, np.hypot(xq - x, yq - y), np.inf)
    live = ok.copy()
    for _ in range(max_steps):
        if not live.any():
            break
        i = np.flatnonzero(live)
        f1, f2 = xq[i] - x[i], yq[i] - y[i]
        a11, a12, a21, a22 = j11[i] - 1.0, j12[i], j21[i], j22[i] - 1.0
        with np.errstate(all="ignore"):
            det = a11 * a22 - a12 * a21
            dx = -(a22 * f1 - a12 * f2) / det
            dy = -(-a21 * f1 + a11 * f2) / det
        good = np.isfinite(dx) & np.isfinite(dy)
        live[i[~good]] = False
        i, dx, dy = i[good], dx[good], dy[good]
        lam = np.ones(i.size)
        pending = np.ones(i.size, dtype=bool)
        new_x, new_y = x[i].copy(), y[i].copy()
        new_res = res[i].copy()
        for _ in range(30):
            if not pending.any():
                break
            k = np.flatnonzero(pending)
            tx = x[i[k]] + lam[k] * dx[k]
            ty = y[i[k]] + lam[k] * dy[k]
            tr = residual(tx, ty)
            better = tr < res[i[k]]
            acc = k[better]
            new_x[acc], new_y[acc], new_res[acc] = tx[better], ty[better], tr[better]
            pending[acc] = False
            lam[k[~better]] *= 0.5
        stalled = i[pending]
        live[stalled] = False
        moved = i[~pending]
        x[moved], y[moved] = new_x[~pending], new_y[~pending]
        if moved.size:
            xq_m, yq_m, a, b, c, d, ok_m = _compose_arrays(p, x[moved], y[moved], q)
            xq[moved], yq[moved] = xq_m, yq_m
            j11[moved], j12[moved], j21[moved], j22[moved] = a, b, c, d
            res[moved] = np.where(ok_m, np.hypot(xq_m - x[moved], yq_m - y[moved]), np.inf)
            live[moved[~ok_m]] = False
        live &= ~(np.hypot(x, y) > bound) & (res > 0.0)
    conv = np.isfinite(res) & (res <= accept_tol * (1.0 + np.hypot(x, y))) & (np.hypot(x, y) <= bound)
    return x, y, res, conv


def _orbit_points(p: Polynomial, x: float, y: float, q: int) -> list[tuple[float, float]]:
    pts = [(x, y)]
    for _ in range(q - 1):
        pts.append(secant_step(p, *pts[-1]))
    return pts


def _minimal_period(p: Polynomial, x: float, y: float, q: int, tol: float = 1e-6) -> int:
    pt = (x, y)
    for d in range(1, q):
        pt = secant_step(p, *pt)
        if q % d == 0 and math.hypot(pt[0] - x, pt[1] - y) <= tol:
            return d
    return q


def refine_cycle(
    p: Polynomial,
    approx,
    q: int | None = None,
    accept_tol: float = 1e-9,
    max_shift: float = 0.5,
) -> CycleReport:
    """Polish an approximate ``q``-cycle by Newton's method on ``S^q - Id``.

    The multiplier matrix is the derivative of ``S^q`` at the first point,
    the product ``DS(z_{q-1}) ... DS(z_0)``.

    Raises
    ------
    SingularEncounter
        If the starting point lies on the singular curve.
    DidNotConverge
        If Newton stalls, wanders more than ``max_shift`` away, or collapses
        onto an orbit of smaller period.
    """
    approx = [_as_pair(pt) for pt in approx]
    if q is None:
        q = len(approx)
    x0, y0 = approx[0]
    *_, ok = _compose_arrays(p, np.array([x0]), np.array([y0]), q)
    if not ok[0]:
        raise SingularEncounter(f"orbit of {approx[0]} meets the singular curve")
    x, y, res, conv = _newton_periodic(p, [x0], [y0], q, accept_tol=accept_tol)
    x, y, res = float(x[0]), float(y[0]), float(res[0])
    if not conv[0]:
        raise DidNotConverge(f"Newton on S^{q} - Id stalled at residual {res:.3g}")
    if math.hypot(x - x0, y - y0) > max_shift * (1.0 + math.hypot(x0, y0)):
        raise DidNotConverge(f"Newton wandered from {approx[0]} to {(x, y)}")
    d = _minimal_period(p, x, y, q)
    if d != q:
        raise DidNotConverge(f"converged onto an orbit of period {d}, not {q}")
    pts = _orbit_points(p, x, y, q)
    M = chain_product(jacobian(p, *pt) for pt in pts)
    return CycleReport(points=pts, period=q, multiplier_matrix=M, residual=res)


def _focal_distance(roots: RootList, x: float, y: float) -> float:
    best = math.inf
    for i, a in enumerate(roots.roots):
        for j, b in enumerate(roots.roots):
            if i != j:
                best = min(best, math.hypot(x - a, y - b))
    return best


def _regular_orbit(p: Polynomial, roots: RootList, pts, sep: float = 1e-6, qtol: float = 1e-8) -> bool:
    for x, y in pts:
        if _focal_distance(roots, x, y) <= sep:
            return False
        qq = q_eval(p, x, y)
        if abs(qq) <= qtol * (1.0 + abs(y * qq) + abs(p(y))):
            return False
    return True


def _canonical(pts):
    k = min(range(len(pts)), key=lambda i: pts[i])
    return pts[k:] + pts[:k]


def search_periodic(
    p: Polynomial,
    q: int,
    window: tuple[float, float, float, float] | None = None,
    grid: tuple[int, int] = (40, 40),
    workers: int = 1,
    roots: RootList | None = None,
    dedup_tol: float = 1e-6,
) -> list[CycleReport]:
    """Periodic orbits of minimal period ``q`` found by Newton from a seed grid.

    ``window`` is ``(xmin, xmax, ymin, ymax)`` and defaults to the square
    given by the Cauchy bound. For ``q = 1`` the result is the list of root
    fixed points. Solutions are discarded when they have a smaller period,
    come within ``1e-6`` of a focal point or touch the singular curve.
    Candidates passing within ``CRITICAL_SEP`` of a diagonal critical point
    are dropped too: the parabolic three-cycle through infinity leaves a
    family of near-solutions there. Seeds are split across ``workers``
    threads; the outcome does not depend on the split.
    """
    if not 1 <= q <= 8:
        raise ValueError("period must be in 1..8")
    if roots is None:
        roots = real_roots(p)
    if window is None:
        b = cauchy_bound(p)
        window = (-b, b, -b, b)
    xmin, xmax, ymin, ymax = window
    nx, ny = grid
    gx = xmin + (xmax - xmin) * (2 * np.arange(nx) + 1) / (2 * nx)
    gy = ymin + (ymax - ymin) * (2 * np.arange(ny) + 1) / (2 * ny)
    X, Y = np.meshgrid(gx, gy)
    X, Y = X.ravel(), Y.ravel()

    # orbits reaching far outside the window are shadows of the critical
    # three-cycle at infinity, not finite periodic orbits
    bound = 1e3 * (1.0 + max(abs(v) for v in window))

    def solve(ix):
        return _newton_periodic(p, X[ix], Y[ix], q, bound=bound)

    chunks = max(1, int(workers))
    parts = np.array_split(np.arange(X.size), chunks)
    if chunks == 1:
        outs = [solve(parts[0])]
    else:
        with ThreadPoolExecutor(max_workers=chunks) as ex:
            outs = list(ex.map(solve, parts))
    rx = np.concatenate([o[0] for o in outs])
    ry = np.concatenate([o[1] for o in outs])
    rc = np.concatenate([o[3] for o in outs])

    crit = critical_points(p) if q > 1 else []
    cands = []
    for x, y in zip(rx[rc], ry[rc]):
        x, y = float(x), float(y)
        try:
            if _minimal_period(p, x, y, q) != q:
                continue
            pts = _orbit_points(p, x, y, q)
        except SingularHit:
            continue
        if q == 1 and not any(abs(x - a) <= 1e-8 and abs(y - a) <= 1e-8 for a in roots.roots):
            continue
        if q > 1 and not _regular_orbit(p, roots, pts):
            continue
        if max(max(abs(a), abs(b)) for a, b in pts) > bound:
            continue
        if any(abs(a - c) <= CRITICAL_SEP * (1.0 + abs(c)) and abs(b - c) <= CRITICAL_SEP * (1.0 + abs(c)) for a, b in pts for c in crit):
            continue
        cands.append(_canonical(pts))
    cands.sort()

    reports: list[CycleReport] = []
    kept: list = []
    for pts in cands:
        if any(max(math.hypot(a[0] - b[0], a[1] - b[1]) for a, b in zip(pts, other)) <= dedup_tol for other in kept):
            continue
        kept.append(pts)
        try:
            rep = refine_cycle(p, pts, q)
        except (DidNotConverge, SingularEncounter, SingularHit):
            continue
        rep.points = _canonical(rep.points)
        rep.multiplier_matrix = chain_product(jacobian(p, *pt) for pt in rep.points)
        reports.append(rep)
    return reports


# --------------------------------------------------------------------------
# period four


GOLDEN_QUADRUPLE = (1.0, 2.0, (3.0 + math.sqrt(5.0)) / 2.0, (5.0 + math.sqrt(5.0)) / 2.0)


def period4_residuals(a: float, b: float, c: float, d: float) -> tuple[float, float]:
    """Defects of the two secant-line conditions closing a four-cycle.

    Zero when the secant through ``(b, p(b))`` and ``(d, p(d))`` meets the axis
    at ``c`` and the one through ``(a, p(a))`` and ``(c, p(c))`` meets it at ``b``.
    """
    r1 = c - (d - (a - d) * (d - b) / (a + b - 2.0 * d))
    r2 = b - (a - (d - a) * (a - c) / (c + d - 2.0 * a))
    return r1, r2


def period4_nodes(a, b, c, d, derivs=(-1.0, -1.0, -1.0, -1.0)):
    """Hermite data ``(x, p(x), p'(x))`` making ``(a,b) -> (b,d) -> (d,c) -> (c,a)``."""
    return [(a, d - a, derivs[0]), (b, d - b, derivs[1]), (c, a - c, derivs[2]), (d, a - d, derivs[3])]


def construct_period4(a: float, b: float, c: float, d: float, derivs=(-1.0, -1.0, -1.0, -1.0), tol: float = 1e-9) -> Polynomial:
    """Polynomial whose secant map has the four-cycle ``(a,b),(b,d),(d,c),(c,a)``.

    Raises
    ------
    IncompatibleQuadruple
        If ``a < b < c < d`` fails or the closing conditions are violated by
        more than ``tol``.
    """
    if not a < b < c < d:
        raise IncompatibleQuadruple("need a < b < c < d")
    r1, r2 = period4_residuals(a, b, c, d)
    size = 1.0 + max(abs(a), abs(b), abs(c), abs(d))
    if max(abs(r1), abs(r2)) > tol * size:
        raise IncompatibleQuadruple(f"closing conditions fail: residuals {r1:.3g}, {r2:.3g}")
    return hermite_interpolate(period4_nodes(a, b, c, d, derivs))


def verify_period4(p: Polynomial, quadruple=GOLDEN_QUADRUPLE, order_tol: float = 1e-6) -> CycleReport:
    """Refine the constructed four-cycle and check its orbit order."""
    a, b, c, d = quadruple
    expected = [(a, b), (b, d), (d, c), (c, a)]
    rep = refine_cycle(p, expected, 4)
    for got, want in zip(rep.points, expected):
        if math.hypot(got[0] - want[0], got[1] - want[1]) > order_tol:
            raise NotPeriodic(f"cycle point {got} does not match {want}")
    return rep
