"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from cderiv.poly import MPoly

small_fraction = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))


@st.composite
def polys(draw, max_terms=4, exps=exponents):
    terms = draw(st.dictionaries(exps, small_fraction, max_size=max_terms))
    return MPoly.from_dict(terms)


@st.composite
def polys_in(draw, var_index: int, max_deg=4):
    coeffs = draw(st.lists(small_fraction, min_size=1, max_size=max_deg + 1))
    terms = {}
    for k, c in enumerate(coeffs):
        e = [0, 0, 0, 0]
        e[var_index] = k
        terms[tuple(e)] = c
    return MPoly.from_dict(terms)
