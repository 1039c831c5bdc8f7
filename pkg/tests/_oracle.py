"""Independent sympy reference for solution spaces.

Nothing here imports the package's polynomial, bracket or solver code. The
structure constants are retyped by hand, the lambda-bracket is rebuilt from
sesquilinearity and skew-symmetry, and the general map is written with one
sympy unknown per coefficient in the degree box.
"""

from __future__ import annotations

import itertools

import sympy as sp

d, x, y = sp.symbols("d x y")

# (names, parities, {(i, j): [coeff of a_0, coeff of a_1, ...]}) for i <= j,
# written as [a_i _x a_j] with spectral variable x.
TABLES = {
    "abelian(1|0)": (["e1"], [0], {}),
    "abelian(2|0)": (["e1", "e2"], [0, 0], {}),
    "virasoro": (["L"], [0], {(0, 0): [d + 2 * x]}),
    "heisenberg_pair": (["a", "b"], [0, 0], {(0, 1): [0, 1]}),
}


class RefAlgebra:
    def __init__(self, name):
        self.names, self.par, table = TABLES[name]
        self.n = len(self.names)
        self.S = {}
        for i in range(self.n):
            for j in range(self.n):
                if i <= j:
                    self.S[(i, j)] = [sp.sympify(c) for c in table.get((i, j), [0] * self.n)]
                else:
                    # [a_i _x a_j] = -(-1)^{p_i p_j} [a_j _{-d-x} a_i]
                    src = table.get((j, i), [0] * self.n)
                    s = -((-1) ** (self.par[i] * self.par[j]))
                    self.S[(i, j)] = [sp.expand(s * sp.sympify(c).subs(x, -d - x)) for c in src]

    def bracket(self, u, v, lam):
        """[u _lam v] for coefficient lists u, v (polynomials in d)."""
        out = [sp.Integer(0)] * self.n
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj == 0:
                    continue
                coeff = sp.sympify(ui).subs(d, -lam) * sp.sympify(vj).subs(d, d + lam)
                sij = [c.subs(x, lam) for c in self.S[(i, j)]]
                for k in range(self.n):
                    out[k] += coeff * sij[k]
        return [sp.expand(c) for c in out]

    def unit(self, i):
        return [sp.Integer(1 if k == i else 0) for k in range(self.n)]


def apply_map(F, v, lam):
    """f_lam(v) where F[k][j] is a polynomial in d and x (x = the slot)."""
    n = len(F)
    out = [sp.Integer(0)] * n
    for j, vj in enumerate(v):
        if vj == 0:
            continue
        shifted = sp.sympify(vj).subs(d, d + lam)
        for k in range(n):
            out[k] += shifted * F[k][j].subs(x, lam)
    return [sp.expand(c) for c in out]


def apply_morphism(M, v):
    n = len(M)
    return [sp.expand(sum(M[k][j] * v[j] for j in range(n))) for k in range(n)]


def general_map(A: RefAlgebra, parity: int, dp: int, dl: int):
    """(F, unknowns) with unknowns ordered by (i, j, p, q)."""
    unknowns = []
    F = [[sp.Integer(0)] * A.n for _ in range(A.n)]
    for i, j in itertools.product(range(A.n), repeat=2):
        if (A.par[i] - A.par[j] - parity) % 2:
            continue
        for p in range(dp + 1):
            for q in range(dl + 1):
                c = sp.Symbol(f"c_{i}_{j}_{p}_{q}")
                unknowns.append(c)
                F[i][j] += c * d**p * x**q
    return F, unknowns


def residuals(A: RefAlgebra, F, kind: str, sigma=None, tau=None, abg=(1, 1, 1)):
    """Defining identity of ``kind`` for an even map, slot x, bracket variable y."""
    out = []
    ident = [[sp.Integer(int(i == j)) for j in range(A.n)] for i in range(A.n)]
    sigma = sigma or ident
    tau = tau or ident
    for i, j in itertools.product(range(A.n), repeat=2):
        ai, aj = A.unit(i), A.unit(j)
        lhs = apply_map(F, A.bracket(ai, aj, y), x)
        t1 = A.bracket(apply_map(F, ai, x), apply_morphism(sigma, aj), x + y)
        t2 = A.bracket(apply_morphism(tau, ai), apply_map(F, aj, x), y)
        if kind in ("der", "sigma_tau"):
            out += [lhs[k] - t1[k] - t2[k] for k in range(A.n)]
        elif kind == "abg":
            a, b, g = abg
            out += [a * lhs[k] - b * t1[k] - g * t2[k] for k in range(A.n)]
        elif kind == "qcentroid":
            out += [t1[k] - t2[k] for k in range(A.n)]
        else:
            raise ValueError(kind)
    return out


def solution_basis(name: str, kind: str, dp: int, dl: int, parity: int = 0, **kw):
    """Rows spanning the solution space, coordinates ordered as (i, j, p, q)."""
    A = RefAlgebra(name)
    F, unknowns = general_map(A, parity, dp, dl)
    eqs = []
    for r in residuals(A, F, kind, **kw):
        poly = sp.Poly(sp.expand(r), d, x, y)
        eqs.extend(poly.coeffs())
    if not unknowns:
        return [], 0
    if not eqs:
        return [list(row) for row in sp.eye(len(unknowns)).tolist()], len(unknowns)
    M, _ = sp.linear_eq_to_matrix(eqs, unknowns)
    null = M.nullspace()
    return [list(v) for v in null], len(unknowns)


def same_span(rows_a, rows_b, ncols: int) -> bool:
    """Mutual containment of two row spans over Q."""
    ma = sp.Matrix(rows_a) if rows_a else sp.zeros(0, ncols)
    mb = sp.Matrix(rows_b) if rows_b else sp.zeros(0, ncols)
    ra, rb = ma.rank(), mb.rank()
    if ra != rb:
        return False
    if ra == 0:
        return True
    return ma.col_join(mb).rank() == ra


def expand_laurent(closed: str, k_min: int, k_max: int) -> dict:
    """Coefficients of a rendered closed form: the first summand in powers of
    t, the second in powers of 1/t, and an optional trailing Laurent polynomial."""
    t, u = sp.symbols("t u")
    text = closed.replace("^", "**")
    pieces = [p.strip() for p in text.split(" + (")]
    pos = sp.sympify(pieces[0], locals={"t": t})
    neg = sp.sympify("(" + pieces[1], locals={"t": t}) if len(pieces) > 1 else sp.Integer(0)
    extra = sp.sympify("(" + pieces[2], locals={"t": t}) if len(pieces) > 2 else sp.Integer(0)
    out = {k: sp.Integer(0) for k in range(k_min, k_max + 1)}
    sp_pos = sp.series(pos, t, 0, k_max + 1).removeO()
    for k in range(1, k_max + 1):
        out[k] += sp_pos.coeff(t, k)
    sp_neg = sp.series(sp.simplify(neg.subs(t, 1 / u)), u, 0, -k_min + 1).removeO()
    for k in range(k_min, 1):
        out[k] += sp_neg.coeff(u, -k)
    shift = -k_min
    extra = sp.expand(extra * t**shift)
    for k in range(k_min, k_max + 1):
        out[k] += extra.coeff(t, k + shift)
    return out
