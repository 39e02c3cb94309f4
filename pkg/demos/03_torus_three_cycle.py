"""The secant map on the torus and the three-cycle through infinity.

Adding one point at infinity to each axis turns the plane into a torus.
At a critical point x0 of p (p'(x0) = 0, p(x0) != 0) the map sends
(x0, x0) -> (x0, inf) -> (inf, x0) -> (x0, x0). This demo walks that
cycle with charts, prints its multipliers, and shows plane orbits near
(x0, x0) being dragged along it.

Run:  python demos/03_torus_three_cycle.py
"""

from secant_dynamics import (
    Polynomial,
    TorusPoint,
    chart_decode,
    chart_encode,
    critical_three_cycle,
    extended_jacobian,
    extended_step,
    iterate_orbit,
)
from secant_dynamics.torus import chart_consistency_error

p = Polynomial([3.0, -4.0, 0.0, 1.0 / 3.0])  # p'(2) = 0, p(2) = -7/3
x0 = 2.0

print("orbit of (x0, x0) on the torus")
pt = TorusPoint(x0, x0)
for n in range(4):
    print(f"  {n}: {pt.kind:10s} ({pt.x}, {pt.y})")
    pt = extended_step(p, pt)

print("\nchart coordinates of the vertical point at infinity")
v = TorusPoint.vert_inf(x0)
uv = chart_encode(v, 2)
print(f"  chart 2: {uv} -> decoded {chart_decode(uv, 2)}")

print("\nJacobians in local charts along the cycle")
pt = TorusPoint(x0, x0)
for _ in range(3):
    J, cin, cout = extended_jacobian(p, pt)
    print(f"  at {pt.kind:10s} chart {cin} -> {cout}: {J.round(6).tolist()}")
    pt = extended_step(p, pt)

rep = critical_three_cycle(p, x0)
print("\nmultiplier matrix of S^3:", rep.multiplier_matrix)
print("eigenvalues:", rep.eigenvalues)

print("\nchart-consistency error near infinity (decays like 1/y^2)")
for y in (1e2, 1e3, 1e4):
    print(f"  y = {y:.0e}: {chart_consistency_error(p, x0, y):.3e}")

print("\nplane orbits starting near (x0, x0)")
for eps in (1e-2, 1e-3, 1e-4):
    out = iterate_orbit(p, (x0 + eps, x0 + eps), keep_trace=False)
    print(f"  offset {eps:.0e}: {out.label()} after {out.iterations} steps")
