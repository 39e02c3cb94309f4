"""Fixed points, focal points and how curves are focused through them.

The secant method for p(x) = x (x - 2) (x - 3) is iterated as a map of the
plane. Its only fixed points are (a, a) for the roots a, and both
eigenvalues of the Jacobian vanish there. The denominator of the map
vanishes on a curve that meets the numerator at the off-diagonal pairs of
roots; these are the focal points, and arcs through them are sent to arcs
crossing the prefocal line x = a_j.

Run:  python demos/01_fixed_points_and_focal_geometry.py
"""

import numpy as np

from secant_dynamics import (
    CurveGerm,
    Polynomial,
    eig2,
    focal_points,
    image_tangent_of_germ,
    jacobian,
    kappa_coefficient,
    point_to_slope,
    real_roots,
    search_periodic,
    secant_step,
    singular_slopes,
    slope_to_point,
)

p = Polynomial([0.0, 6.0, -5.0, 1.0])
roots = real_roots(p)
print("roots:", roots.roots)
print("p' at roots:", roots.derivs)

# Fixed points: a grid-seeded Newton search for 1-cycles recovers the roots.
print("\nfixed points of S")
for rep in search_periodic(p, 1, window=(-1, 5, -1, 5)):
    (x, y), = rep.points
    print(f"  ({x:+.15f}, {y:+.15f})  eigenvalues {rep.eigenvalues}")

# A single secant step next to a root shows superlinear contraction.
x, y = 3.1, 3.01
for _ in range(5):
    x, y = secant_step(p, x, y)
    print(f"  step -> y - 3 = {y - 3:+.3e}")

# Focal points sit on off-diagonal root pairs.
print("\nfocal points")
for Q in focal_points(p, roots):
    slopes = singular_slopes(Q, roots)
    print(f"  {Q.label}: ({Q.x:g}, {Q.y:g}), prefocal line x = {Q.prefocal_x:g}, singular slopes {slopes}")

# Slope <-> landing point is a bijection for each focal point.
Q = focal_points(p, roots)[0]
for m in (-2.0, 0.5, 3.0):
    y_land = slope_to_point(Q, m)
    print(f"  slope {m:+.1f} lands at (x={Q.prefocal_x:g}, y={y_land:+.6f}); back to slope {point_to_slope(Q, y_land):+.12f}")

# The landing point is reproduced by pushing a short arc through the map.
m = 0.5
for t in (1e-2, 1e-3, 1e-4):
    ax, ay = Q.x + t, Q.y + m * t
    img = secant_step(p, ax, ay)
    print(f"  t={t:.0e}: image of (Q + t(1, m)) = ({img[0]:.6f}, {img[1]:.6f})")

# Along a singular slope the first-order image degenerates onto the root
# (x = a_j, y = a_l); the curvature of the arc then decides the tangent of
# the image there.
print()
for l, m_l in singular_slopes(Q, roots).items():
    al = roots.roots[l]
    print(f"  kappa coefficient for root {al:g}: {kappa_coefficient(Q, al):+.6f}")
    for kappa in (-1.0, 0.0, 1.0):
        germ = CurveGerm(Q, slope=m_l, curvature=kappa)
        print(f"    curvature {kappa:+.0f}: image tangent {image_tangent_of_germ(p, roots, germ, l)}")

# Jacobian sanity check at an arbitrary point.
J = jacobian(p, 1.3, 4.2)
print("\nJacobian at (1.3, 4.2):\n", np.array(J), "\neigenvalues:", eig2(J))
