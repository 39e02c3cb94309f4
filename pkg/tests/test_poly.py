import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from secant_dynamics.errors import DuplicateAbscissa, MultipleRootDetected
from secant_dynamics.poly import (
    Polynomial,
    cauchy_bound,
    hermite_interpolate,
    hermite_newton,
    horner,
    q_eval,
    q_partials,
    real_roots,
)

from conftest import SQRT5
from strategies import coord, polynomials, rooted_polynomials


def term_scale(p, *xs):
    m = max([1.0] + [abs(x) for x in xs])
    return sum(abs(c) * m**j for j, c in enumerate(p.coeffs))


class TestEvaluation:
    def test_root_of_cubic(self, cubic):
        assert cubic(0.0) == 0.0

    def test_hand_value(self, cubic):
        assert cubic(1.0) == 2.0

    def test_pstar_at_one(self, pstar):
        assert pstar(1.0) == pytest.approx((5 + SQRT5) / 2 - 1, abs=1e-4)

    def test_horner_vectorises(self, cubic):
        xs = np.linspace(-2, 4, 7)
        assert np.allclose(horner(cubic.coeffs, xs), xs**3 - 5 * xs**2 + 6 * xs)

    def test_trailing_zeros_trimmed(self):
        assert Polynomial([1.0, 2.0, 0.0, 0.0]).degree == 1

    def test_parse_coefficients_and_roots(self, cubic):
        assert Polynomial.parse("0,6,-5,1") == cubic
        assert Polynomial.parse("roots:0,2,3") == cubic

    def test_text_round_trip(self, pstar):
        assert Polynomial.parse(pstar.to_text()) == pstar


class TestDerivativeAndReversal:
    def test_power_rule(self, cubic):
        assert cubic.derivative() == Polynomial([6.0, -10.0, 3.0])

    def test_constant(self):
        d = Polynomial([5.0]).derivative()
        assert d(3.7) == 0.0

    def test_critical_points_of_torus_cubic(self, torus_cubic):
        d = torus_cubic.derivative()
        assert d.coeffs == pytest.approx((-4.0, 0.0, 1.0))

    def test_reversed_cubic(self, cubic):
        assert cubic.reversed().coeffs == (1.0, -5.0, 6.0)

    def test_reversed_monomial(self):
        assert Polynomial([0.0, 0.0, 1.0]).reversed().coeffs == (1.0,)

    def test_reversed_general(self, torus_cubic):
        assert torus_cubic.reversed().coeffs == pytest.approx((1 / 3, 0.0, -4.0, 3.0))

    @given(polynomials(), st.floats(0.05, 20) | st.floats(-20, -0.05))
    def test_reversed_identity(self, p, y):
        r = p.reversed()
        want = y**p.degree * p(1.0 / y)
        assert abs(r(y) - want) <= 1e-12 * term_scale(p.reversed(), y) + 1e-12 * abs(want)

    @given(polynomials())
    def test_double_reversal(self, p):
        assume(p.coeffs[0] != 0.0)
        assert p.reversed().reversed() == p


class TestQ:
    def test_quadratic(self):
        assert q_eval(Polynomial([0, 0, 1]), 1.0, 2.0) == 3.0

    def test_diagonal_is_derivative(self, cubic):
        assert q_eval(cubic, 1.0, 1.0) == -1.0

    def test_vanishes_on_equal_values(self, cubic):
        assert q_eval(cubic, 1.0, 2 + math.sqrt(2)) == pytest.approx(0.0, abs=1e-14)

    def test_partials_quadratic(self):
        assert q_partials(Polynomial([0, 0, 1]), 0.3, -7.0) == (1.0, 1.0)

    def test_partials_cubic_diagonal(self, cubic):
        assert q_partials(cubic, 1.0, 1.0) == (-2.0, -2.0)

    def test_partials_x_cubed(self):
        assert q_partials(Polynomial([0, 0, 0, 1]), 1.0, 2.0) == (4.0, 5.0)

    @given(polynomials(), coord, coord)
    def test_divided_difference_identity(self, p, x, y):
        q = q_eval(p, x, y)
        assert abs(p(x) - p(y) - (x - y) * q) <= 1e-9 * max(1.0, abs(p(x)), abs(p(y)), 1e-6 * term_scale(p, x, y))

    @given(polynomials(), coord)
    def test_diagonal_values(self, p, x):
        s = term_scale(p, x)
        assert abs(q_eval(p, x, x) - p.derivative()(x)) <= 1e-10 * s
        half = 0.5 * p.derivative().derivative()(x)
        qx, qy = q_partials(p, x, x)
        assert abs(qx - half) <= 1e-10 * s * p.degree
        assert abs(qy - half) <= 1e-10 * s * p.degree

    @given(polynomials(max_degree=6), st.floats(-3, 3), st.floats(-3, 3))
    def test_partials_match_finite_differences(self, p, x, y):
        h = 1e-6
        fx = (q_eval(p, x + h, y) - q_eval(p, x - h, y)) / (2 * h)
        fy = (q_eval(p, x, y + h) - q_eval(p, x, y - h)) / (2 * h)
        qx, qy = q_partials(p, x, y)
        s = term_scale(p, x, y)
        assert abs(qx - fx) <= 1e-5 * max(abs(qx), 1e-3 * s)
        assert abs(qy - fy) <= 1e-5 * max(abs(qy), 1e-3 * s)

    def test_arrays_broadcast(self, cubic):
        xs = np.array([0.0, 1.0, 2.0])
        assert np.array_equal(q_eval(cubic, xs, xs), cubic.derivative()(xs))


class TestRealRoots:
    def test_cubic(self, cubic):
        r = real_roots(cubic)
        assert r.roots == pytest.approx([0.0, 2.0, 3.0], abs=1e-12)
        assert r.derivs == pytest.approx([6.0, -2.0, 3.0], abs=1e-10)

    def test_no_real_roots(self):
        assert len(real_roots(Polynomial([1.0, 0.0, 1.0]))) == 0

    def test_pstar_has_seven(self, pstar):
        assert len(real_roots(pstar)) == 7

    def test_double_root_rejected(self):
        with pytest.raises(MultipleRootDetected):
            real_roots(Polynomial.from_roots([1.0, 1.0, -2.0]))

    def test_cauchy_bound_contains_roots(self, pstar):
        assert max(abs(a) for a in real_roots(pstar).roots) < cauchy_bound(pstar)

    @given(rooted_polynomials(max_n=7))
    def test_recovers_known_roots(self, case):
        p, roots = case
        found = real_roots(p).roots
        assert len(found) == len(roots)
        assert np.max(np.abs(np.array(found) - roots)) <= 1e-10

    @given(rooted_polynomials())
    def test_roots_are_sorted_and_simple(self, case):
        r = real_roots(case[0])
        assert all(a < b for a, b in zip(r.roots, r.roots[1:]))
        assert all(d != 0.0 for d in r.derivs)


class TestHermite:
    def test_single_node(self):
        p = hermite_interpolate([(2.0, 3.0, -1.5)])
        assert p.coeffs == pytest.approx((6.0, -1.5))

    def test_identity_recovered(self):
        p = hermite_interpolate([(0.0, 0.0, 1.0), (1.0, 1.0, 1.0)])
        assert p.coeffs == pytest.approx((0.0, 1.0), abs=1e-14)

    def test_duplicate_abscissa(self):
        with pytest.raises(DuplicateAbscissa):
            hermite_interpolate([(1.0, 0.0, 0.0), (1.0, 2.0, 0.0)])

    def test_golden_quadruple_newton_coefficients(self, quad):
        a, b, c, d = quad
        nodes = [(a, d - a, -1.0), (b, d - b, -1.0), (c, a - c, -1.0), (d, a - d, -1.0)]
        z, coeffs = hermite_newton(nodes)
        assert z == [a, a, b, b, c, c, d, d]
        want = [2.61803, -1.0, 0.0, 0.0, -2.61803, 11.70820, -9.23607, 7.05573]
        assert coeffs == pytest.approx(want, abs=1e-4)

    @given(
        st.lists(st.floats(-3, 3), min_size=1, max_size=5, unique=True),
        st.lists(st.floats(-5, 5), min_size=10, max_size=10),
    )
    def test_matches_data(self, xs, data):
        xs = sorted(xs)
        assume(len(xs) < 2 or min(np.diff(xs)) > 0.2)
        nodes = [(x, data[2 * i], data[2 * i + 1]) for i, x in enumerate(xs)]
        p = hermite_interpolate(nodes)
        dp = p.derivative()
        s = 1.0 + sum(abs(c) * 3.0**j for j, c in enumerate(p.coeffs))
        for x, v, d in nodes:
            assert abs(p(x) - v) <= 1e-8 * s
            assert abs(dp(x) - d) <= 1e-8 * s * max(p.degree, 1)
