"""Lie conformal superalgebras given by structure tables.

An algebra is a free Q[d]-module with homogeneous basis a_1..a_n and
lambda-brackets ``[a_i _x a_j] = sum_k p^k_ij(d, x) a_k``. Only pairs
``i <= j`` are stored; the reverse pairs come from skew-supersymmetry.
Vectors throughout are tuples of :class:`MPoly`, one per basis slot, and may
carry spectral variables as parameters (e.g. ``d_x(a)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .gmod import Basis, Element, Parity, PolyMatrix, nullspace_over_Q, sign, vector_parity
from .poly import D, ONE, ZERO, MPoly, Var, X

Vector = tuple  # tuple[MPoly, ...]


class AlgebraError(ValueError):
    pass


def as_vector(v) -> Vector:
    if isinstance(v, Element):
        return v.coords
    return tuple(MPoly.coerce(c) for c in v)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(p, a: Vector) -> Vector:
    p = MPoly.coerce(p)
    return tuple(p * x for x in a)


def vzero(a: Vector) -> bool:
    return all(x.is_zero() for x in a)


def vsubs(a: Vector, mapping) -> Vector:
    return tuple(x.subs(mapping) for x in a)


@dataclass
class AxiomReport:
    passed: bool
    violations: list = field(default_factory=list)  # (axiom, indices, residual vector)

    def to_json(self, basis: Basis) -> dict:
        return {
            "passed": self.passed,
            "violations": [
                {
                    "axiom": ax,
                    "witness": [basis.names[i] for i in idx],
                    "residual": [str(c) for c in res],
                }
                for ax, idx, res in self.violations
            ],
        }


class Algebra:
    """A finite Lie conformal superalgebra presented by a structure table.

    ``table`` maps ``(i, j)`` with ``i <= j`` to the coefficient vector of
    ``[a_i _x a_j]``, polynomials in ``d`` and ``x`` only.
    """

    def __init__(self, basis: Basis, table: Mapping[tuple[int, int], Sequence], name: str = "R"):
        self.basis = basis
        self.name = name
        n = basis.rank
        stored: dict[tuple[int, int], Vector] = {}
        for (i, j), vec in table.items():
            if not (0 <= i < n and 0 <= j < n):
                raise AlgebraError(f"bracket index ({i}, {j}) out of range")
            if i > j:
                raise AlgebraError(
                    f"bracket [{basis.names[i]}, {basis.names[j]}] must be declared as the (i, j) "
                    "pair with i <= j; the reverse is derived by skew-supersymmetry"
                )
            vec = as_vector(vec)
            if len(vec) != n:
                raise AlgebraError("structure vector has the wrong length")
            want = basis.parities[i] + basis.parities[j]
            for k, p in enumerate(vec):
                if p.variables() - {Var.PARTIAL, Var.X0}:
                    raise AlgebraError(f"structure polynomial {p} uses variables beyond d, x")
                if not p.is_zero() and basis.parities[k] != want:
                    raise AlgebraError(
                        f"grading violation: [{basis.names[i]}, {basis.names[j]}] has a "
                        f"component along {basis.names[k]} of the wrong parity"
                    )
            if not vzero(vec):
                stored[(i, j)] = vec
        self.table = stored
        self._basis_cache: dict[tuple[int, int], Vector] = {}
        self._slot_cache: dict = {}
        self._axioms: AxiomReport | None = None

    @property
    def rank(self) -> int:
        return self.basis.rank

    @property
    def parities(self) -> tuple[Parity, ...]:
        return self.basis.parities

    def gen(self, name_or_index, coeff=ONE) -> Element:
        return Element.gen(self.basis, name_or_index, coeff)

    def unit_vector(self, i: int, coeff=ONE) -> Vector:
        v = [ZERO] * self.rank
        v[i] = MPoly.coerce(coeff)
        return tuple(v)

    def parity_of(self, v) -> Parity | None:
        return vector_parity(self.basis, as_vector(v))

    # -- brackets ---------------------------------------------------------
    def structure(self, i: int, j: int) -> Vector:
        """``[a_i _x a_j]`` for any ordered pair, in ``d`` and ``x``."""
        key = (i, j)
        hit = self._basis_cache.get(key)
        if hit is not None:
            return hit
        zero = (ZERO,) * self.rank
        if i <= j:
            out = self.table.get(key, zero)
        else:
            stored = self.table.get((j, i), zero)
            s = -sign(self.parities[i] * self.parities[j])
            out = tuple(s * p.subs({Var.X0: -D - X}) for p in stored)
        self._basis_cache[key] = out
        return out

    def structure_at(self, i: int, j: int, slot: MPoly) -> Vector:
        key = (i, j, slot)
        hit = self._slot_cache.get(key)
        if hit is None:
            hit = tuple(p.subs({Var.X0: slot}) for p in self.structure(i, j))
            self._slot_cache[key] = hit
        return hit

    def bracket_vec(self, a: Vector, b: Vector, slot) -> Vector:
        """``[a _slot b]`` by sesquilinearity; no homogeneity check."""
        slot = MPoly.coerce(slot)
        out = [ZERO] * self.rank
        neg = -slot
        shift = D + slot
        rights = [(j, q.subs({Var.PARTIAL: shift})) for j, q in enumerate(b) if not q.is_zero()]
        if not rights:
            return tuple(out)
        for i, p in enumerate(a):
            if p.is_zero():
                continue
            left = p.subs({Var.PARTIAL: neg})
            for j, right in rights:
                st = self.structure_at(i, j, slot)
                coef = None
                for k, s in enumerate(st):
                    if s.is_zero():
                        continue
                    if coef is None:
                        coef = left * right
                    out[k] = out[k] + coef * s
        return tuple(out)

    def bracket(self, a, b, slot=Var.X0) -> Vector:
        """``[a _slot b]``; ``a`` and ``b`` must be homogeneous."""
        if isinstance(slot, Var):
            if slot == Var.PARTIAL:
                raise AlgebraError("the bracket slot must be a spectral variable, not d")
            slot = MPoly.var(slot)
        a, b = as_vector(a), as_vector(b)
        if self.parity_of(a) is None or self.parity_of(b) is None:
            raise AlgebraError("bracket arguments must be homogeneous")
        return self.bracket_vec(a, b, slot)

    # -- axioms -----------------------------------------------------------
    def check_axioms(self) -> AxiomReport:
        if self._axioms is not None:
            return self._axioms
        n = self.rank
        par = self.parities
        violations = []
        e = [self.unit_vector(i) for i in range(n)]
        x, y = MPoly.var(Var.X0), MPoly.var(Var.X1)
        for i in range(n):
            for j in range(n):
                lhs = self.bracket_vec(e[i], e[j], x)
                rhs = self.bracket_vec(e[j], e[i], -D - x)
                res = vadd(lhs, vscale(sign(par[i] * par[j]), rhs))
                if not vzero(res):
                    violations.append(("C2", (i, j), res))
        for i in range(n):
            for j in range(n):
                ij = self.bracket_vec(e[i], e[j], x)
                for k in range(n):
                    t1 = self.bracket_vec(e[i], self.bracket_vec(e[j], e[k], y), x)
                    t2 = self.bracket_vec(ij, e[k], x + y)
                    t3 = self.bracket_vec(e[j], self.bracket_vec(e[i], e[k], x), y)
                    res = vsub(vsub(t1, t2), vscale(sign(par[i] * par[j]), t3))
                    if not vzero(res):
                        violations.append(("C3", (i, j, k), res))
        self._axioms = AxiomReport(not violations, violations)
        return self._axioms

    @property
    def skew_ok(self) -> bool:
        return not any(v[0] == "C2" for v in self.check_axioms().violations)

    @property
    def jacobi_ok(self) -> bool:
        return not any(v[0] == "C3" for v in self.check_axioms().violations)

    def require_axioms(self):
        rep = self.check_axioms()
        if not rep.passed:
            ax, idx, res = rep.violations[0]
            names = ", ".join(self.basis.names[i] for i in idx)
            raise AlgebraError(f"{self.name} fails {ax} at ({names}): residual {[str(c) for c in res]}")

    # -- structural sets --------------------------------------------------
    def _kernel_elements(self, images, n_unknowns) -> list[Vector]:
        """Kernel of a Q-linear map given by the image vectors of unknowns."""
        rows: dict = {}
        for u, img in enumerate(images):
            for k, p in enumerate(img):
                for key, c in p.items():
                    rows.setdefault((k, key), {})[u] = c
        m = [[r.get(u, Fraction(0)) for u in range(n_unknowns)] for _, r in sorted(rows.items())]
        return nullspace_over_Q(m, n_unknowns) if m else [
            [Fraction(int(i == j)) for j in range(n_unknowns)] for i in range(n_unknowns)
        ]

    def _elements_from_kernel(self, unknowns, kernel) -> PolyMatrix:
        cols = []
        for vec in kernel:
            coords = [ZERO] * self.rank
            for (k, p), c in zip(unknowns, vec):
                if c:
                    coords[k] = coords[k] + (D ** p) * c
            cols.append(tuple(coords))
        return PolyMatrix.from_columns(self.rank, cols)

    def center(self, d_bound: int) -> PolyMatrix:
        """Q-basis of central elements with d-degree <= ``d_bound``."""
        return self._annihilated(d_bound, [self.unit_vector(j) for j in range(self.rank)], left=True)

    def centralizer(self, c, d_bound: int) -> PolyMatrix:
        """Q-basis of ``b`` (d-degree <= bound) with ``[c _x b] = 0``."""
        return self._annihilated(d_bound, [as_vector(c)], left=False)

    def _annihilated(self, d_bound, partners, left) -> PolyMatrix:
        if d_bound < 0:
            raise ValueError("degree bound must be non-negative")
        unknowns = [(k, p) for k in range(self.rank) for p in range(d_bound + 1)]
        x = MPoly.var(Var.X0)
        images = []
        for k, p in unknowns:
            u = self.unit_vector(k, D ** p)
            img = ()
            for w in partners:
                img += self.bracket_vec(u, w, x) if left else self.bracket_vec(w, u, x)
            images.append(img)
        return self._elements_from_kernel(unknowns, self._kernel_elements(images, len(unknowns)))

    def is_central(self, v) -> bool:
        """Exact test that ``[v _y a_j] = 0`` for every generator (``v`` may carry x)."""
        v = as_vector(v)
        y = MPoly.var(Var.X1)
        return all(vzero(self.bracket_vec(v, self.unit_vector(j), y)) for j in range(self.rank))

    def derived_subalgebra(self) -> PolyMatrix:
        """Q[d]-generators of the span of all n-products."""
        cols: list[Vector] = []
        seen = set()
        for i in range(self.rank):
            for j in range(i, self.rank):
                vec = self.structure(i, j)
                if vzero(vec):
                    continue
                top = max(p.degree_in(Var.X0) for p in vec)
                for k in range(top + 1):
                    col = tuple(p.coefficient_of(Var.X0, k) for p in vec)
                    if not vzero(col) and col not in seen:
                        seen.add(col)
                        cols.append(col)
        return PolyMatrix.from_columns(self.rank, cols)

    def adjoint(self, r, slot: Var = Var.X0):
        from .cend import ConfMap

        r = as_vector(r)
        par = self.parity_of(r)
        if par is None:
            raise AlgebraError("adjoint needs a homogeneous element")
        s = MPoly.var(slot)
        cols = [self.bracket_vec(r, self.unit_vector(j), s) for j in range(self.rank)]
        matrix = tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))
        return ConfMap(self, par, matrix, slot)

    def __repr__(self) -> str:
        return f"Algebra({self.name}, rank {self.basis.superdim})"


# ---------------------------------------------------------------------------
# built-in algebras


def _virasoro() -> Algebra:
    return Algebra(Basis(("L",), (Parity.EVEN,)), {(0, 0): (D + 2 * X,)}, "virasoro")


def _neveu_schwarz() -> Algebra:
    b = Basis(("L", "G"), (Parity.EVEN, Parity.ODD))
    return Algebra(
        b,
        {
            (0, 0): (D + 2 * X, ZERO),
            (0, 1): (ZERO, D + Fraction(3, 2) * X),
            (1, 1): (MPoly.const(2), ZERO),
        },
        "neveu_schwarz",
    )


def _cur_sl2() -> Algebra:
    # basis e, h, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
    b = Basis(("e", "h", "f"), (Parity.EVEN,) * 3)
    c = MPoly.const
    return Algebra(
        b,
        {
            (0, 1): (c(-2), ZERO, ZERO),
            (0, 2): (ZERO, c(1), ZERO),
            (1, 2): (ZERO, ZERO, c(-2)),
        },
        "cur_sl2",
    )


def _heisenberg_pair() -> Algebra:
    b = Basis(("a", "b"), (Parity.EVEN, Parity.EVEN))
    return Algebra(b, {(0, 1): (ZERO, ONE)}, "heisenberg_pair")


def abelian(n_even: int, n_odd: int = 0) -> Algebra:
    names = tuple(f"e{i + 1}" for i in range(n_even + n_odd))
    pars = (Parity.EVEN,) * n_even + (Parity.ODD,) * n_odd
    return Algebra(Basis(names, pars), {}, f"abelian({n_even}|{n_odd})")


_BUILTINS = {
    "virasoro": _virasoro,
    "neveu_schwarz": _neveu_schwarz,
    "cur_sl2": _cur_sl2,
    "heisenberg_pair": _heisenberg_pair,
}

BUILTIN_NAMES = ("virasoro", "neveu_schwarz", "cur_sl2", "abelian(n|m)", "heisenberg_pair")


def builtin(name: str) -> Algebra:
    name = name.strip()
    m = re.fullmatch(r"abelian\((\d+)\|(\d+)\)", name)
    if m:
        return abelian(int(m.group(1)), int(m.group(2)))
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise AlgebraError(f"unknown built-in algebra {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None
