import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from secant_dynamics.errors import NotSingularSlope
from secant_dynamics.focal import (
    CurveGerm,
    focal_points,
    image_tangent_of_germ,
    kappa_coefficient,
    point_to_slope,
    singular_slopes,
    slope_to_point,
    transversality,
)
from secant_dynamics.poly import Polynomial, real_roots
from secant_dynamics.secant import secant_step

from strategies import rooted_polynomials


def Q(cubic_roots, cubic, i, j):
    return next(F for F in focal_points(cubic, cubic_roots) if (F.i, F.j) == (i, j))


@pytest.fixture
def q32(cubic, cubic_roots):
    return Q(cubic_roots, cubic, 2, 1)


class TestFocalPoints:
    def test_cubic_has_six(self, cubic, cubic_roots):
        pts = {(round(F.x, 10), round(F.y, 10)) for F in focal_points(cubic, cubic_roots)}
        assert pts == {(0, 2), (0, 3), (2, 0), (2, 3), (3, 0), (3, 2)}

    def test_none_without_roots(self):
        p = Polynomial([1.0, 0.0, 1.0])
        assert focal_points(p, real_roots(p)) == []

    def test_pstar_has_42(self, pstar):
        assert len(focal_points(pstar, real_roots(pstar))) == 42

    def test_label(self, q32):
        assert q32.label == "Q_{3,2}"
        assert q32.prefocal_x == pytest.approx(2.0)

    @given(rooted_polynomials())
    def test_count(self, case):
        p, roots = case
        assert len(focal_points(p, real_roots(p))) == len(roots) * (len(roots) - 1)


class TestTransversality:
    def test_q32(self, q32):
        assert transversality(q32) == pytest.approx(-6.0)

    def test_q23(self, cubic, cubic_roots):
        assert transversality(Q(cubic_roots, cubic, 1, 2)) == pytest.approx(6.0)

    def test_matches_gradients(self, q32):
        nx, ny, dx, dy = q32.gradients()
        assert nx * dy - ny * dx == pytest.approx(transversality(q32))

    @given(rooted_polynomials())
    def test_nonzero(self, case):
        p, _ = case
        for F in focal_points(p, real_roots(p)):
            assert transversality(F) != 0.0


class TestSlopes:
    def test_slope_zero(self, q32):
        assert slope_to_point(q32, 0.0) == pytest.approx(2.0)

    def test_vertical_slope(self, q32):
        assert slope_to_point(q32, math.inf) == pytest.approx(3.0)

    def test_unit_slope(self, q32):
        assert slope_to_point(q32, 1.0) == pytest.approx(12 / 5)

    def test_pole(self, q32):
        assert slope_to_point(q32, q32.dpi / q32.dpj) == math.inf

    def test_inverse_examples(self, q32):
        assert point_to_slope(q32, 2.0) == pytest.approx(0.0, abs=1e-14)
        assert point_to_slope(q32, 12 / 5) == pytest.approx(1.0)
        assert point_to_slope(q32, 3.0) == math.inf

    def test_inverse_at_infinity(self, q32):
        assert slope_to_point(q32, point_to_slope(q32, math.inf)) == math.inf

    @given(rooted_polynomials(), st.floats(-1e3, 1e3), st.data())
    def test_round_trip(self, case, m, data):
        p, _ = case
        fps = focal_points(p, real_roots(p))
        F = fps[data.draw(st.integers(0, len(fps) - 1))]
        y = slope_to_point(F, m)
        assume(math.isfinite(y))
        assert point_to_slope(F, y) == pytest.approx(m, rel=1e-10, abs=1e-10)

    def test_singular_slope_examples(self, cubic, cubic_roots, q32):
        assert singular_slopes(q32, cubic_roots) == {0: pytest.approx(-1.0)}
        q12 = Q(cubic_roots, cubic, 0, 1)
        assert singular_slopes(q12, cubic_roots)[2] == pytest.approx(-1.0)

    @given(rooted_polynomials(min_n=3))
    def test_singular_slopes_land_on_focal_points(self, case):
        p, _ = case
        r = real_roots(p)
        for F in focal_points(p, r):
            for l, m in singular_slopes(F, r).items():
                assert slope_to_point(F, m) == pytest.approx(r.roots[l], abs=1e-9)

    @pytest.mark.parametrize("m", [-3.0, -0.5, 0.0, 0.7, 2.0, 5.0])
    def test_first_order_landing(self, cubic, q32, m):
        def image(t):
            return secant_step(cubic, q32.x + t, q32.y + m * t)

        t = 1e-3
        x0 = 2 * image(t / 2)[0] - image(t)[0]
        y0 = 2 * image(t / 2)[1] - image(t)[1]
        assert x0 == pytest.approx(q32.prefocal_x, abs=1e-4)
        assert y0 == pytest.approx((6 + 6 * m) / (3 + 2 * m), abs=1e-4)


def fd_image_slope(p, germ, t=1e-4):
    def Y(s):
        return secant_step(p, *germ.point(s))[1]

    d1 = (Y(t) - Y(-t)) / (2 * t)
    d2 = (Y(t / 2) - Y(-t / 2)) / t
    return (4 * d2 - d1) / 3


class TestCurvature:
    def test_kappa_coefficient(self, q32):
        assert kappa_coefficient(q32, 0.0) == pytest.approx(3.0)

    @pytest.mark.parametrize("kappa", [0.0, 1.0, 2.5, -4.0])
    def test_tangent_matches_oracle(self, cubic, cubic_roots, q32, kappa):
        germ = CurveGerm(q32, -1.0, kappa)
        ml, v = image_tangent_of_germ(cubic, cubic_roots, germ, 0)
        assert ml == pytest.approx(-1.0)
        assert v == pytest.approx(fd_image_slope(cubic, germ), rel=1e-4)

    def test_affine_in_kappa(self, cubic, cubic_roots, q32):
        v = [image_tangent_of_germ(cubic, cubic_roots, CurveGerm(q32, -1.0, k), 0)[1] for k in (-1.0, 0.5, 3.0)]
        assert v[1] - v[0] == pytest.approx(3.0 * 1.5)
        assert v[2] - v[1] == pytest.approx(3.0 * 2.5)

    def test_wrong_slope(self, cubic, cubic_roots, q32):
        with pytest.raises(NotSingularSlope):
            image_tangent_of_germ(cubic, cubic_roots, CurveGerm(q32, -0.9, 0.0), 0)

    @given(rooted_polynomials(min_n=3, max_n=4), st.floats(-3, 3), st.data())
    def test_random_germs(self, case, kappa, data):
        p, _ = case
        r = real_roots(p)
        fps = focal_points(p, r)
        F = fps[data.draw(st.integers(0, len(fps) - 1))]
        slopes = singular_slopes(F, r)
        l = data.draw(st.sampled_from(sorted(slopes)))
        ml = slopes[l]
        b = (F.dpi - F.dpj * ml) / (F.x - F.y)
        assume(abs(ml) < 20 and abs(b) > 0.05 * abs(F.dpi / (F.x - F.y)))
        germ = CurveGerm(F, ml, kappa)
        _, v = image_tangent_of_germ(p, r, germ, l)
        assert abs(v - fd_image_slope(p, germ)) <= 1e-4 * max(1.0, abs(v))
