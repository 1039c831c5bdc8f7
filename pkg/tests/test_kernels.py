from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cderiv import _backend, _kernels_py

compiled = pytest.importorskip("cderiv._kernels")

keys = st.integers(min_value=0, max_value=(1 << 20))
coeffs = st.one_of(
    st.integers(min_value=-50, max_value=50).filter(bool),
    st.fractions(min_value=-10, max_value=10, max_denominator=7).filter(bool),
)
term_maps = st.dictionaries(keys, coeffs, max_size=8)
small_ints = st.integers(min_value=-9, max_value=9)


@st.composite
def int_matrices(draw):
    ncols = draw(st.integers(min_value=1, max_value=6))
    rows = draw(st.lists(st.lists(small_ints, min_size=ncols, max_size=ncols), max_size=7))
    return rows, ncols


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")


@given(term_maps, term_maps)
def test_mul_terms_agree(a, b):
    assert compiled.mul_terms(a, b) == _kernels_py.mul_terms(a, b)


@given(term_maps, term_maps, coeffs)
def test_add_terms_agree(a, b, scale):
    assert compiled.add_terms(a, b, scale) == _kernels_py.add_terms(a, b, scale)


@given(term_maps)
def test_add_negation_cancels(a):
    assert compiled.add_terms(a, a, -1) == {}


@given(int_matrices())
def test_rref_int_agree(m):
    rows, ncols = m
    assert compiled.rref_int(rows, ncols) == _kernels_py.rref_int(rows, ncols)


@given(int_matrices())
def test_rref_int_is_reduced(m):
    rows, ncols = m
    reduced, pivots = compiled.rref_int(rows, ncols)
    assert len(reduced) == len(pivots)
    assert list(pivots) == sorted(pivots)
    for r, p in zip(reduced, pivots):
        assert r[p] > 0
        assert all(other[p] == 0 for other in reduced if other is not r)


def test_rref_int_rank_example():
    reduced, pivots = _kernels_py.rref_int([[2, 4], [1, 2], [0, 3]], 2)
    assert list(pivots) == [0, 1]
    assert all(Fraction(v) == int(v) for r in reduced for v in r)
