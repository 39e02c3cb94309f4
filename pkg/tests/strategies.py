"""Hypothesis strategies shared by the property tests."""

import numpy as np
from hypothesis import strategies as st

from secant_dynamics.poly import Polynomial

coeff = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def polynomials(draw, min_degree=2, max_degree=8):
    k = draw(st.integers(min_degree, max_degree))
    c = draw(st.lists(coeff, min_size=k, max_size=k))
    lead = draw(st.floats(0.5, 5)) * draw(st.sampled_from([-1.0, 1.0]))
    return Polynomial(c + [lead])


@st.composite
def separated_roots(draw, min_n=2, max_n=5, spread=3.0, gap=0.3):
    n = draw(st.integers(min_n, max_n))
    roots = draw(st.lists(st.floats(-spread, spread), min_size=n, max_size=n))
    roots = np.sort(roots)
    if n > 1 and np.min(np.diff(roots)) < gap:
        from hypothesis import assume

        assume(False)
    return [float(r) for r in roots]


@st.composite
def rooted_polynomials(draw, min_n=2, max_n=5):
    roots = draw(separated_roots(min_n, max_n))
    lead = draw(st.floats(0.5, 2.0)) * draw(st.sampled_from([-1.0, 1.0]))
    return Polynomial.from_roots(roots, leading=lead), roots
