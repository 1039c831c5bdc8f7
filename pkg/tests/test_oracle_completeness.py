"""Solver spaces against the independent sympy reference."""

import itertools

import pytest
import sympy as sp

import _oracle as ref
from cderiv.cend import diagonal, swap
from cderiv.lcsa import builtin
from cderiv.solver import DegreeBound, EquationKind, Kind, solve

NAMES = ["abelian(1|0)", "abelian(2|0)", "virasoro", "heisenberg_pair"]
BOUNDS = [(1, 1), (2, 1), (2, 2)]


def _kind(A, tag):
    if tag == "der":
        return EquationKind.der(), {}
    if tag == "abg":
        return EquationKind.alpha_beta_gamma(1, 0, 0), {"abg": (1, 0, 0)}
    if tag == "qcentroid":
        return EquationKind.simple(Kind.QCENTROID), {}
    if tag == "sigma_tau":
        s = swap(A) if A.name.startswith("abelian") else diagonal(A, [1, -1], "flip")
        m = [[sp.Integer(int(e.constant_value())) for e in row] for row in s.matrix]
        return EquationKind.sigma_tau(s), {"sigma": m}
    raise ValueError(tag)


CASES = [
    (name, tag, b)
    for name in NAMES
    for tag in ("der", "abg", "qcentroid", "sigma_tau")
    for b in BOUNDS
    if not (tag == "sigma_tau" and builtin(name).rank < 2)
]


@pytest.mark.parametrize("name,tag,bound", CASES)
def test_solver_matches_reference_span(name, tag, bound):
    A = builtin(name)
    kind, kw = _kind(A, tag)
    space = solve(A, kind, DegreeBound(*bound))
    rows, n = ref.solution_basis(name, "sigma_tau" if tag == "sigma_tau" else tag, *bound, **kw)
    assert n == len(space.layout)
    mine = [[sp.Rational(c.numerator, c.denominator) for c in v] for v in space.vectors]
    assert ref.same_span(mine, rows, n)


@pytest.mark.parametrize("name", NAMES)
def test_monomial_solutions_are_found(name):
    """Every single-monomial map satisfying the identity lies in the solver space."""
    A = ref.RefAlgebra(name)
    space = solve(builtin(name), EquationKind.der(), DegreeBound(2, 2))
    for k, (i, j, p, q) in enumerate(itertools.product(range(A.n), range(A.n), range(3), range(3))):
        F = [[sp.Integer(0)] * A.n for _ in range(A.n)]
        F[i][j] = ref.d**p * ref.x**q
        if all(sp.expand(r) == 0 for r in ref.residuals(A, F, "der")):
            vec = [0] * len(space.layout)
            vec[space.layout.index((0, i, j, p, q))] = 1
            mine = [[sp.Rational(c.numerator, c.denominator) for c in v] for v in space.vectors]
            assert ref.same_span(mine, mine + [vec], len(vec))
