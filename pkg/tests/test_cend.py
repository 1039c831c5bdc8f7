import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import small_fraction

from cderiv.cend import (
    ConfMap,
    GroupSpec,
    Morphism,
    cartan_involution,
    compose,
    diagonal,
    gc_bracket,
    invert,
    matrix_order,
    swap,
)
from cderiv.gmod import Parity
from cderiv.lcsa import AlgebraError, builtin
from cderiv.poly import D, ONE, X, ZERO, MPoly, Var
from cderiv.verify import gc_jacobi_residual, gc_skew_residual

de_exps = st.tuples(st.integers(0, 2), st.integers(0, 2), st.just(0), st.just(0))


@st.composite
def conf_maps(draw, A, parity=None):
    parity = draw(st.sampled_from([Parity.EVEN, Parity.ODD])) if parity is None else parity
    n = A.rank
    m = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if A.parities[i] == A.parities[j] + parity:
                m[i][j] = MPoly.from_dict(draw(st.dictionaries(de_exps, small_fraction, max_size=2)))
    return ConfMap(A, parity, m)


NS = builtin("neveu_schwarz")
SL2 = builtin("cur_sl2")


@given(conf_maps(SL2, Parity.EVEN), st.integers(0, 2), st.integers(0, 2))
def test_conformal_sesquilinearity(f, j, k):
    a = SL2.unit_vector(j, D**k)
    da = SL2.unit_vector(j, D ** (k + 1))
    assert f.apply(da) == tuple((D + X) * c for c in f.apply(a))


@given(conf_maps(NS), conf_maps(NS))
def test_gc_skew_symmetry(f, g):
    assert gc_skew_residual(gc_bracket, f, g).is_zero()


@given(conf_maps(NS), conf_maps(NS), conf_maps(NS))
def test_gc_jacobi(f, g, h):
    assert gc_jacobi_residual(gc_bracket, f, g, h).is_zero()


@given(conf_maps(SL2, Parity.EVEN), conf_maps(SL2, Parity.EVEN), st.integers(0, 2))
def test_composition_evaluates_in_sequence(f, g, j):
    fg = compose(f, g)
    e = SL2.unit_vector(j)
    y = MPoly.var(Var.X1)
    assert fg.apply(e, y) == f.apply(g.apply(e, y - X), X)


@given(conf_maps(SL2, Parity.EVEN), st.integers(0, 2))
def test_left_and_right_composition_with_morphisms(f, j):
    s = Morphism.from_images(SL2, [SL2.unit_vector(0), SL2.unit_vector(1, D), SL2.unit_vector(2)])
    e = SL2.unit_vector(j)
    assert f.left(s).apply(e) == s.apply(f.apply(e))
    assert f.right(s).apply(e) == f.apply(s.apply(e))


@given(small_fraction, st.integers(0, 2))
def test_unimodular_inverse(c, k):
    A = builtin("abelian(2|0)")
    s = Morphism(A, [[ONE, c * D**k], [ZERO, ONE]])
    assert (invert(s) @ s).is_identity()
    assert s.power(-2) == invert(s) @ invert(s)


def test_non_unimodular_matrix_is_not_invertible():
    A = builtin("abelian(2|0)")
    with pytest.raises(AlgebraError):
        invert(Morphism(A, [[D, ZERO], [ZERO, ONE]]))


def test_homomorphism_checks():
    inv = cartan_involution(SL2)
    assert inv.check_homomorphism()[0]
    assert inv.is_automorphism()
    V = builtin("virasoro")
    two = Morphism(V, [[MPoly.const(2)]], "s")
    ok, witness = two.check_homomorphism()
    assert not ok and witness is not None
    minus = Morphism.scalar(V, -1)
    assert minus.generalized and not minus.is_automorphism()
    with pytest.raises(AlgebraError):
        GroupSpec.cyclic(two)


def test_orders():
    A = builtin("abelian(2|0)")
    assert matrix_order(Morphism.identity(A)) == 1
    assert matrix_order(swap(A)) == 2
    assert matrix_order(cartan_involution(SL2)) == 2
    assert matrix_order(diagonal(A, [1, 2])) is None


def test_morphisms_must_be_lambda_free_and_even():
    with pytest.raises(AlgebraError):
        Morphism(builtin("virasoro"), [[X]])
    with pytest.raises(AlgebraError):
        Morphism(NS, [[ONE, ONE], [ZERO, ONE]])


def test_conf_map_grading():
    with pytest.raises(AlgebraError):
        ConfMap(NS, Parity.EVEN, [[ONE, ONE], [ZERO, ONE]])
    ConfMap(NS, Parity.ODD, [[ZERO, ONE], [ONE, ZERO]])
