from fractions import Fraction

import pytest

from _oracle import expand_laurent
from cderiv.cend import GroupSpec, Morphism, cartan_involution
from cderiv.hilbert import (
    INCONCLUSIVE,
    NOT_PERIODIC,
    RATIONAL,
    ClosedForm,
    HilbertError,
    HilbertWindow,
    rationality_probe,
    render_polynomial,
    series,
)
from cderiv.lcsa import builtin
from cderiv.solver import DegreeBound, InteriorKind, solve_interior


@pytest.fixture(scope="module")
def sl2_report():
    A = builtin("cur_sl2")
    return series(A, cartan_involution(A), HilbertWindow(-3, 3, DegreeBound(2, 2)))


def test_window_validation():
    with pytest.raises(ValueError):
        HilbertWindow(1, 3)
    w = HilbertWindow(-2, 1)
    assert len(w) == 4
    assert list(w.powers()) == [-2, -1, 0, 1]


def test_involution_series_is_two_periodic(sl2_report):
    r = sl2_report
    assert r.saturated
    assert r.order == 2
    assert r.periodicity == 2
    assert r.ranks() == {-3: 1, -2: 2, -1: 1, 0: 2, 1: 1, 2: 2, 3: 1}
    assert r.polynomial is True
    assert r.folded() == [2, 1]


def test_involution_series_json(sl2_report):
    js = sl2_report.to_json()
    assert js["order"] == 2
    assert js["closed_form"] == "2 + t"
    assert js["window"] == {"k_min": -3, "k_max": 3, "bound": [2, 2], "interior": "minus"}
    assert [c["k"] for c in js["coefficients"]] == list(range(-3, 4))


def test_involution_probe_matches_window(sl2_report):
    v = rationality_probe(sl2_report, 2)
    assert v.verdict == RATIONAL
    assert v.reexpansion_matches
    assert v.closed_form.render() == "t*(1 + 2*t)/(1 - t^2) + (t^(-1) + 2)/(1 - t^(-2))"


def test_uncached_powers_give_identical_spaces():
    A = builtin("cur_sl2")
    r = series(A, cartan_involution(A), HilbertWindow(-1, 1, DegreeBound(1, 1)), cache=False)
    lo, hi = r.coefficients[-1], r.coefficients[1]
    assert lo.spaces.keys() == hi.spaces.keys()
    for par in lo.spaces:
        a, b = lo.spaces[par], hi.spaces[par]
        assert a is not b
        assert a.vectors == b.vectors
        assert [f.render() for f in a.basis] == [f.render() for f in b.basis]


def test_interior_chain():
    A = builtin("cur_sl2")
    G = GroupSpec.cyclic(cartan_involution(A))
    b = DegreeBound(1, 1)
    for k in (0, 1):
        dims = [solve_interior(A, G, k, kind, b).dim_Q for kind in (InteriorKind.STAR, InteriorKind.PLUS, InteriorKind.MINUS)]
        assert dims[0] >= dims[1] >= dims[2]


def test_identity_sigma_on_abelian_is_inconclusive():
    A = builtin("abelian(1|0)")
    r = series(A, Morphism.identity(A), HilbertWindow(-1, 1, DegreeBound(1, 1)))
    assert not r.saturated
    assert r.polynomial is None
    assert r.verdict() == INCONCLUSIVE
    assert rationality_probe(r, 1).verdict == INCONCLUSIVE


def test_non_automorphism_rejected():
    A = builtin("virasoro")
    with pytest.raises(HilbertError):
        series(A, Morphism.scalar(A, 2), HilbertWindow(0, 1))


def test_probe_constant_series():
    v = rationality_probe({k: 3 for k in range(-2, 3)}, 1)
    assert v.verdict == RATIONAL
    assert v.closed_form.render() == "t*(3)/(1 - t) + (3)/(1 - t^(-1))"


def test_probe_two_periodic_series():
    ranks = {k: (5 if k % 2 else 4) for k in range(-3, 4)}
    v = rationality_probe(ranks, 2)
    assert v.verdict == RATIONAL
    assert v.reexpansion_matches


def test_probe_aperiodic_series():
    v = rationality_probe({-2: 1, -1: 2, 0: 3, 1: 4, 2: 5}, 2)
    assert v.verdict == NOT_PERIODIC
    assert v.closed_form is None


def test_probe_window_too_short():
    with pytest.raises(HilbertError):
        rationality_probe({0: 1, 1: 1, 2: 1}, 2)


def test_probe_with_exceptional_power():
    ranks = {k: 2 for k in range(-3, 4)}
    ranks[0] = 7
    assert rationality_probe(ranks, 1).verdict == NOT_PERIODIC
    v = rationality_probe(ranks, 1, exceptions=[0])
    assert v.verdict == RATIONAL
    assert v.closed_form.correction == {0: Fraction(5)}


@pytest.mark.parametrize(
    "ranks,l0,exc",
    [
        ({k: 3 for k in range(-3, 4)}, 1, ()),
        ({k: (1 if k % 2 else 2) for k in range(-3, 4)}, 2, ()),
        ({k: [1, 4, 2][k % 3] for k in range(-4, 5)}, 3, ()),
        ({**{k: 2 for k in range(-3, 4)}, 1: 6}, 1, (1,)),
    ],
)
def test_closed_form_against_series_oracle(ranks, l0, exc):
    v = rationality_probe(ranks, l0, exceptions=exc)
    assert v.verdict == RATIONAL
    k_min, k_max = min(ranks), max(ranks)
    ref = expand_laurent(v.closed_form.render(), k_min, k_max)
    assert {k: int(ref[k]) for k in ref} == ranks


def test_closed_form_expand_is_exact():
    cf = ClosedForm(2, [Fraction(1), Fraction(2)])
    assert cf.expand(-3, 3) == {-3: 1, -2: 2, -1: 1, 0: 2, 1: 1, 2: 2, 3: 1}


def test_render_polynomial():
    assert render_polynomial([2, 1]) == "2 + t"
    assert render_polynomial([0, 0, 3]) == "3*t^2"
