"""End-to-end acceptance checks, runnable from the command line."""

from __future__ import annotations

import io
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import poly
from .dynamics import GOLDEN_QUADRUPLE, construct_period4, iterate_orbit, period4_nodes, period4_residuals, search_periodic, verify_period4
from .focal import focal_points, image_tangent_of_germ, kappa_coefficient, point_to_slope, singular_slopes, slope_to_point, CurveGerm
from .poly import Polynomial, cauchy_bound, hermite_newton, real_roots
from .render import RenderConfig, render, write_ppm
from .secant import jacobian, secant_step
from .torus import chart_consistency_error, critical_three_cycle

CUBIC = Polynomial([0.0, 6.0, -5.0, 1.0])
TORUS_CUBIC = Polynomial([3.0, -4.0, 0.0, 1.0 / 3.0])
P7_NEWTON = (2.61803, -1.0, 0.0, 0.0, -2.61803, 11.70820, -9.23607, 7.05573)
SEED = 20240611


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name:<15} {self.seconds:7.2f}s  {self.detail}"


def random_polynomial(rng: np.random.Generator, degree: int, min_real: int = 2, spread: float = 3.0) -> Polynomial:
    """Random polynomial with at least ``min_real`` well-separated simple real roots."""
    while True:
        n_real = int(rng.integers(min_real, degree + 1))
        if (degree - n_real) % 2:
            n_real += 1 if n_real < degree else -1
        if n_real < min_real:
            continue
        roots = np.sort(rng.uniform(-spread, spread, n_real))
        if n_real > 1 and np.min(np.diff(roots)) < 0.3:
            continue
        p = Polynomial.from_roots(roots, leading=float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)))
        c = np.array(p.coeffs)
        for _ in range((degree - n_real) // 2):
            re, im = rng.uniform(-spread, spread), rng.uniform(0.5, 2.0)
            c = np.convolve(c, [re * re + im * im, -2.0 * re, 1.0])
        return Polynomial(c)


# --------------------------------------------------------------------------


def check_q_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst = worst_diag = 0.0
    for _ in range(1000):
        k = int(rng.integers(1, 9))
        c = rng.uniform(-5, 5, k + 1)
        p = Polynomial(c)
        x, y = rng.uniform(-5, 5, 2)
        m = max(1.0, abs(x), abs(y))
        scale = float(np.sum(np.abs(c))) * m**k
        q = poly.q_eval(p, x, y)
        worst = max(worst, abs(p(x) - p(y) - (x - y) * q) / scale)
        d = p.derivative()
        worst_diag = max(worst_diag, abs(poly.q_eval(p, x, x) - d(x)) / (scale * max(k, 1)))
    ok = worst <= 1e-9 and worst_diag <= 1e-10
    return ok, f"max scaled defect {worst:.2e}, diagonal {worst_diag:.2e}"


def check_jacobian() -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 1)
    worst, done = 0.0, 0
    while done < 200:
        p = random_polynomial(rng, int(rng.integers(2, 6)))
        x, y = rng.uniform(-3, 3, 2)
        q = poly.q_eval(p, x, y)
        if abs(q) < 0.1 * (1.0 + abs(p(y))):
            continue
        J = jacobian(p, x, y)
        h = 1e-5
        fx = (np.array(secant_step(p, x + h, y)) - np.array(secant_step(p, x - h, y))) / (2 * h)
        fy = (np.array(secant_step(p, x, y + h)) - np.array(secant_step(p, x, y - h))) / (2 * h)
        fd = np.column_stack([fx, fy])
        worst = max(worst, float(np.max(np.abs(J - fd)) / max(1.0, float(np.max(np.abs(J))))))
        done += 1
    return worst <= 1e-5, f"max relative deviation {worst:.2e} over {done} points"


def check_fixed_points() -> tuple[bool, str]:
    roots = real_roots(CUBIC)
    reports = search_periodic(CUBIC, 1, window=(-1, 5, -1, 5), roots=roots)
    pts = sorted(r.points[0] for r in reports)
    ok = len(reports) == 3
    ok &= all(abs(x - a) <= 1e-10 and abs(y - a) <= 1e-10 for (x, y), a in zip(pts, roots.roots))
    eig = max((max(r.moduli) for r in reports), default=math.inf)
    ok &= eig <= 1e-12
    return ok, f"{len(reports)} fixed points, max |eigenvalue| {eig:.1e}"


def check_focal_geometry() -> tuple[bool, str]:
    roots = real_roots(CUBIC)
    fps = focal_points(CUBIC, roots)
    exact = {(a, b) for a in (0.0, 2.0, 3.0) for b in (0.0, 2.0, 3.0) if a != b}
    placed = all(min(math.hypot(Q.x - a, Q.y - b) for a, b in exact) <= 1e-10 for Q in fps)
    ok = len(fps) == 6 and placed

    rng = np.random.default_rng(SEED + 2)
    trip = 0.0
    for Q in fps:
        for m in rng.uniform(-10, 10, 20):
            back = point_to_slope(Q, slope_to_point(Q, m))
            trip = max(trip, abs(back - m) / (1.0 + abs(m)))
    ok &= trip <= 1e-10

    Q = next(F for F in fps if F.i == 2 and F.j == 1)
    land = 0.0
    for m in (-3.0, -0.5, 0.0, 0.7, 2.0, 5.0):
        def image_y(t):
            return secant_step(CUBIC, Q.x + t, Q.y + m * t)[1]

        t = 1e-3
        y0 = 2.0 * image_y(t / 2) - image_y(t)  # first-order extrapolation to t = 0
        land = max(land, abs(y0 - (6 + 6 * m) / (3 + 2 * m)))
    ok &= land <= 1e-4
    return ok, f"{len(fps)} focal points, round trip {trip:.1e}, landing {land:.1e}"


def _image_slope_oracle(p: Polynomial, germ: CurveGerm, t: float = 1e-4) -> float:
    def Y(s):
        return secant_step(p, *germ.point(s))[1]

    d1 = (Y(t) - Y(-t)) / (2 * t)
    d2 = (Y(t / 2) - Y(-t / 2)) / t
    return (4 * d2 - d1) / 3


def check_curvature() -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 3)
    worst, done = 0.0, 0
    while done < 50:
        k = int(rng.integers(3, 5))
        p = random_polynomial(rng, k, min_real=k)
        roots = real_roots(p)
        fps = focal_points(p, roots)
        Q = fps[int(rng.integers(len(fps)))]
        slopes = singular_slopes(Q, roots)
        l = list(slopes)[int(rng.integers(len(slopes)))]
        ml = slopes[l]
        b = (Q.dpi - Q.dpj * ml) / (Q.x - Q.y)
        if abs(ml) > 20 or abs(b) < 0.05 * abs(Q.dpi / (Q.x - Q.y)):
            continue  # nearly vertical or degenerate images make the oracle unreliable
        k0, k1 = rng.uniform(-3, 3, 2)
        v0 = _image_slope_oracle(p, CurveGerm(Q, ml, k0))
        v1 = _image_slope_oracle(p, CurveGerm(Q, ml, k1))
        coeff_fd = (v1 - v0) / (k1 - k0)
        coeff = kappa_coefficient(Q, roots.roots[l])
        _, v = image_tangent_of_germ(p, roots, CurveGerm(Q, ml, k0), l)
        err = max(abs(coeff - coeff_fd) / max(1.0, abs(coeff)), abs(v - v0) / max(1.0, abs(v)))
        worst = max(worst, err)
        done += 1
    return worst <= 1e-4, f"max relative deviation {worst:.1e} over {done} draws"


def check_no_low_periods() -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 4)
    found = 0
    for n in range(20):
        p = random_polynomial(rng, 2 + n % 4)
        b = cauchy_bound(p)
        for q in (2, 3):
            found += len(search_periodic(p, q, window=(-b, b, -b, b), grid=(40, 40)))
    return found == 0, f"{found} period-2/3 orbits over 20 polynomials"


def check_period4() -> tuple[bool, str]:
    a, b, c, d = GOLDEN_QUADRUPLE
    r1, r2 = period4_residuals(a, b, c, d)
    _, coeffs = hermite_newton(period4_nodes(a, b, c, d))
    coef_err = max(abs(u - v) for u, v in zip(coeffs, P7_NEWTON))
    p = construct_period4(a, b, c, d)
    rep = verify_period4(p)
    lam = sorted(rep.moduli)
    eig_err = max(abs(lam[0]), abs(lam[1] - 0.14589803))
    out = iterate_orbit(p, (a + 1e-3, b + 1e-3), max_iter=100, keep_trace=False)
    lands = out.kind == "cycle" and out.period == 4
    if lands:
        lands = all(min(math.hypot(u - x, v - y) for x, y in rep.points) <= 1e-6 for u, v in out.points)
    ok = max(abs(r1), abs(r2)) <= 1e-12 and coef_err <= 1e-4 and rep.residual <= 1e-9 and eig_err <= 1e-6 and lands
    return ok, (
        f"coefficients {coef_err:.1e}, residual {rep.residual:.1e}, eigenvalues {eig_err:.1e}, "
        f"perturbed seed -> {out.label()} after {out.iterations}"
    )


def check_torus() -> tuple[bool, str]:
    rep = critical_three_cycle(TORUS_CUBIC, 2.0)
    ev = sorted(abs(v) for v in rep.eigenvalues)
    eig_err = max(abs(ev[0]), abs(ev[1] - 1.0))
    mat_err = float(np.max(np.abs(rep.multiplier_matrix - np.array([[0.0, 1.0], [0.0, 1.0]]))))
    ys = np.array([1e3, 1e4, 1e5])
    slopes = []
    for x0 in (-1.3, 0.4, 2.7):
        errs = [chart_consistency_error(TORUS_CUBIC, x0, y) for y in ys]
        slopes.append(float(np.polyfit(np.log(ys), np.log(errs), 1)[0]))
    ok = eig_err <= 1e-9 and mat_err <= 1e-9 and max(slopes) <= -0.9
    return ok, f"eigenvalues {eig_err:.1e}, product {mat_err:.1e}, worst log-log slope {max(slopes):.2f}"


def check_figures() -> tuple[bool, str]:
    t0 = time.perf_counter()
    g = render(CUBIC, RenderConfig((-1, 5, -1, 5), 600, 600))
    secs = time.perf_counter() - t0
    c = g.counts()
    root_frac = sum(c[f"root{k}"] for k in range(g.n_roots)) / g.classes.size
    ok = secs < 5.0 and root_frac >= 0.9 and c["focal"] > 0

    pstar = construct_period4(*GOLDEN_QUADRUPLE)
    gs = render(pstar, RenderConfig((-1, 5, -1, 5), 600, 600))
    c4 = gs.counts().get("cycle4", 0)
    ok &= c4 > 0

    cfg8 = RenderConfig((1.92, 2.08, 1.92, 2.08), 200, 200)
    g8 = render(TORUS_CUBIC, cfg8)
    xs, ys = cfg8.centers()
    hit = (g8.classes == g8.cycle_id) & (g8.periods == 3)
    near = 0.0
    if hit.any():
        X, Y = np.meshgrid(xs, ys)
        near = float(np.min(np.hypot(X[hit] - 2.0, Y[hit] - 2.0)))
    c3 = int(hit.sum())
    ok &= c3 > 0 and near <= 0.01
    return ok, (
        f"cubic {secs:.2f}s, {100 * root_frac:.1f}% roots, {c['focal']} focal px; "
        f"p* {c4} cycle-4 px; window near (2,2) {c3} cycle-3 px"
    )


def check_determinism() -> tuple[bool, str]:
    cfg = RenderConfig((-1, 5, -1, 5), 160, 120)
    blobs = []
    with tempfile.TemporaryDirectory() as tmp:
        for n, workers in enumerate((1, 4)):
            path = Path(tmp) / f"r{n}.ppm"
            write_ppm(path, render(CUBIC, cfg, workers=workers), shade=True, max_iter=cfg.max_iter)
            blobs.append(path.read_bytes())
    same_img = blobs[0] == blobs[1]
    pstar = construct_period4(*GOLDEN_QUADRUPLE)
    runs = [search_periodic(pstar, 4, window=(0, 4, 0, 4), grid=(20, 20), workers=w) for w in (1, 3)]
    same_cycles = [r.to_dict() for r in runs[0]] == [r.to_dict() for r in runs[1]]
    return same_img and same_cycles, f"images identical: {same_img}, cycle reports identical: {same_cycles} ({len(runs[0])} cycles)"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "q-identity": check_q_identity,
    "jacobian": check_jacobian,
    "fixed-points": check_fixed_points,
    "focal-geometry": check_focal_geometry,
    "curvature": check_curvature,
    "no-low-periods": check_no_low_periods,
    "period4": check_period4,
    "torus": check_torus,
    "figures": check_figures,
    "determinism": check_determinism,
}
TIME_LIMITS = {"q-identity": 1.0, "jacobian": 1.0, "no-low-periods": 30.0}


def run_check(name: str) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, detail = CHECKS[name]()
    except Exception as exc:  # a crashing check is a failing check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    secs = time.perf_counter() - t0
    limit = TIME_LIMITS.get(name)
    if limit is not None and secs >= limit:
        passed, detail = False, f"{detail}; exceeded {limit:g}s"
    return CheckResult(name, bool(passed), detail, secs)


def run_all(only: list[str] | None = None, out: io.TextIOBase | None = None) -> list[CheckResult]:
    names = list(CHECKS) if not only else only
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    results = []
    for n in names:
        res = run_check(n)
        results.append(res)
        if out is not None:
            print(res.line(), file=out, flush=True)
    return results
