"""Conformal linear maps of an algebra to itself, their composition and
gc-bracket, and the d-linear morphisms that play the roles of sigma and tau.

A :class:`ConfMap` stores a matrix over Q[d, x, y, z]; entry ``M[i][j]`` is
the coefficient of ``a_i`` in ``f_s(a_j)`` where ``s`` is the map's slot
variable. Any other spectral variable in the matrix is a parameter, which is
how two-slot results such as ``[f_x g]_y`` are represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .gmod import Parity, sign
from .lcsa import Algebra, AlgebraError, Vector, as_vector, vscale, vsub, vzero
from .poly import D, ONE, ZERO, MPoly, Var


def _matrix(rows) -> tuple[tuple[MPoly, ...], ...]:
    return tuple(tuple(MPoly.coerce(e) for e in row) for row in rows)


def _columns_to_matrix(cols: Sequence[Vector]) -> tuple[tuple[MPoly, ...], ...]:
    n = len(cols)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _slot_poly(at) -> MPoly:
    if isinstance(at, Var):
        if at == Var.PARTIAL:
            raise AlgebraError("a conformal map is evaluated at a spectral variable, not d")
        return MPoly.var(at)
    return MPoly.coerce(at)


class ConfMap:
    """A conformal linear map ``R -> R[slot]`` of a given parity."""

    __slots__ = ("algebra", "parity", "matrix", "slot", "_hash")

    def __init__(self, algebra: Algebra, parity, matrix, slot: Var = Var.X0):
        self.algebra = algebra
        self.parity = Parity(parity)
        self.matrix = _matrix(matrix)
        self.slot = Var(slot)
        self._hash = None
        n = algebra.rank
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise AlgebraError("conformal map matrix has the wrong shape")
        if self.slot == Var.PARTIAL:
            raise AlgebraError("slot variable must be spectral")
        par = algebra.parities
        for i in range(n):
            for j in range(n):
                if not self.matrix[i][j].is_zero() and par[i] != par[j] + self.parity:
                    raise AlgebraError(
                        f"entry ({algebra.basis.names[i]}, {algebra.basis.names[j]}) violates the "
                        f"grading of a map of parity {self.parity}"
                    )

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, algebra: Algebra, parity=Parity.EVEN, slot=Var.X0) -> "ConfMap":
        n = algebra.rank
        return cls(algebra, parity, [[ZERO] * n for _ in range(n)], slot)

    @classmethod
    def identity(cls, algebra: Algebra, slot=Var.X0) -> "ConfMap":
        n = algebra.rank
        return cls(algebra, Parity.EVEN, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)], slot)

    @classmethod
    def from_columns(cls, algebra: Algebra, parity, cols: Sequence[Vector], slot=Var.X0) -> "ConfMap":
        return cls(algebra, parity, _columns_to_matrix([as_vector(c) for c in cols]), slot)

    # -- evaluation -------------------------------------------------------
    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.matrix)

    def at(self, at) -> tuple[tuple[MPoly, ...], ...]:
        """Matrix with the slot variable replaced by ``at``."""
        s = _slot_poly(at)
        return tuple(tuple(e.subs({self.slot: s}) for e in row) for row in self.matrix)

    def apply(self, a, at=None) -> Vector:
        """``f_at(a)``: coefficients of ``a`` are shifted ``d -> d + at``."""
        s = _slot_poly(self.slot if at is None else at)
        a = as_vector(a)
        n = self.algebra.rank
        out = [ZERO] * n
        shift = D + s
        for j, c in enumerate(a):
            if c.is_zero():
                continue
            cs = c.subs({Var.PARTIAL: shift})
            for i in range(n):
                m = self.matrix[i][j]
                if not m.is_zero():
                    out[i] = out[i] + cs * m.subs({self.slot: s})
        return tuple(out)

    # -- module structure -------------------------------------------------
    def __add__(self, other: "ConfMap") -> "ConfMap":
        self._same(other)
        return ConfMap(
            self.algebra,
            self.parity,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)],
            self.slot,
        )

    def __sub__(self, other: "ConfMap") -> "ConfMap":
        return self + other.scale(-1)

    def __neg__(self) -> "ConfMap":
        return self.scale(-1)

    def scale(self, c) -> "ConfMap":
        c = MPoly.coerce(c)
        return ConfMap(self.algebra, self.parity, [[c * e for e in r] for r in self.matrix], self.slot)

    def dshift(self) -> "ConfMap":
        """The module action ``(d f)_s = -s f_s``."""
        return self.scale(-MPoly.var(self.slot))

    def with_slot(self, slot: Var) -> "ConfMap":
        """Rename the slot variable (the new one must not already occur)."""
        if slot == self.slot:
            return self
        return ConfMap(self.algebra, self.parity, self.at(slot), slot)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.matrix for e in r)

    def left(self, s: "Morphism") -> "ConfMap":
        """``s . f``: apply the morphism after the map."""
        n = self.algebra.rank
        m = [[sum((s.matrix[i][k] * self.matrix[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]
        return ConfMap(self.algebra, self.parity, m, self.slot)

    def right(self, s: "Morphism") -> "ConfMap":
        """``f . s``: apply the morphism first; its d is shifted by the slot."""
        n = self.algebra.rank
        shifted = s.shifted(MPoly.var(self.slot))
        m = [[sum((self.matrix[i][k] * shifted[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]
        return ConfMap(self.algebra, self.parity, m, self.slot)

    def _same(self, other: "ConfMap"):
        if other.algebra is not self.algebra and other.algebra.rank != self.algebra.rank:
            raise AlgebraError("dimension mismatch")
        if other.slot != self.slot:
            raise AlgebraError("maps use different slot variables")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfMap):
            return NotImplemented
        return (
            self.slot == other.slot
            and self.matrix == other.matrix
            and (self.parity == other.parity or self.is_zero())
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.slot, self.matrix))
        return self._hash

    def render(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.matrix]

    def __repr__(self) -> str:
        return f"ConfMap({self.parity}, slot={self.slot.symbol}, {self.render()})"


def apply(f: ConfMap, a, slot=None) -> Vector:
    if isinstance(slot, Var) and slot == Var.PARTIAL:
        raise AlgebraError("slot = d is not allowed")
    return f.apply(a, slot)


def compose(f: ConfMap, g: ConfMap, lam=Var.X0, total: Var = Var.X1) -> ConfMap:
    """``(f_lam g)_total = f_lam g_(total - lam)`` as a map in slot ``total``."""
    if f.algebra.rank != g.algebra.rank:
        raise AlgebraError("dimension mismatch")
    lam = _slot_poly(lam)
    inner = MPoly.var(total) - lam
    n = f.algebra.rank
    cols = [f.apply(g.apply(f.algebra.unit_vector(j), inner), lam) for j in range(n)]
    return ConfMap(f.algebra, f.parity + g.parity, _columns_to_matrix(cols), total)


def gc_bracket(f: ConfMap, g: ConfMap, lam=Var.X0, total: Var = Var.X1) -> ConfMap:
    """``[f_lam g]_total = f_lam g_(total-lam) - (-1)^{|f||g|} g_(total-lam) f_lam``."""
    if f.algebra.rank != g.algebra.rank:
        raise AlgebraError("dimension mismatch")
    lam = _slot_poly(lam)
    inner = MPoly.var(total) - lam
    s = sign(f.parity * g.parity)
    n = f.algebra.rank
    cols = []
    for j in range(n):
        e = f.algebra.unit_vector(j)
        fg = f.apply(g.apply(e, inner), lam)
        gf = g.apply(f.apply(e, lam), inner)
        cols.append(vsub(fg, vscale(s, gf)))
    return ConfMap(f.algebra, f.parity + g.parity, _columns_to_matrix(cols), total)


# ---------------------------------------------------------------------------
# morphisms


def _det(m) -> MPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class Morphism:
    """An even d-linear map ``R -> R`` given by a lambda-free matrix.

    ``generalized=True`` marks a map used only as a coefficient (for example
    ``-id``) that is not expected to be a bracket homomorphism.
    """

    __slots__ = ("algebra", "matrix", "name", "generalized", "_checks")

    def __init__(self, algebra: Algebra, matrix, name: str = "", generalized: bool = False):
        self.algebra = algebra
        self.matrix = _matrix(matrix)
        self.name = name
        self.generalized = generalized
        self._checks: dict = {}
        n = algebra.rank
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise AlgebraError("morphism matrix has the wrong shape")
        par = algebra.parities
        for i in range(n):
            for j in range(n):
                e = self.matrix[i][j]
                if e.variables() - {Var.PARTIAL}:
                    raise AlgebraError(f"morphism entry {e} involves a spectral variable")
                if not e.is_zero() and par[i] != par[j]:
                    raise AlgebraError("morphisms must be even")

    @classmethod
    def identity(cls, algebra: Algebra) -> "Morphism":
        n = algebra.rank
        return cls(algebra, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)], "id")

    @classmethod
    def scalar(cls, algebra: Algebra, c, name: str | None = None) -> "Morphism":
        c = Fraction(c)
        n = algebra.rank
        label = name or ("id" if c == 1 else "-id" if c == -1 else f"{c}*id")
        return cls(
            algebra,
            [[MPoly.const(c) if i == j else ZERO for j in range(n)] for i in range(n)],
            label,
            generalized=(c != 1),
        )

    @classmethod
    def from_images(cls, algebra: Algebra, images: Sequence, name: str = "") -> "Morphism":
        return cls(algebra, _columns_to_matrix([as_vector(v) for v in images]), name)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.matrix)

    def apply(self, a) -> Vector:
        a = as_vector(a)
        n = self.algebra.rank
        return tuple(sum((self.matrix[i][j] * a[j] for j in range(n) if not a[j].is_zero()), ZERO) for i in range(n))

    def shifted(self, s: MPoly):
        """Matrix with ``d -> d + s`` (how a morphism looks after a conformal map)."""
        shift = D + s
        return tuple(tuple(e.subs({Var.PARTIAL: shift}) for e in row) for row in self.matrix)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        n = self.algebra.rank
        m = [[sum((self.matrix[i][k] * other.matrix[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]
        name = f"{self.name}*{other.name}" if self.name and other.name else ""
        return Morphism(self.algebra, m, name, self.generalized or other.generalized)

    def __sub__(self, other: "Morphism") -> "Morphism":
        m = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        return Morphism(self.algebra, m, "", True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def is_identity(self) -> bool:
        return self == Morphism.identity(self.algebra)

    def power(self, k: int) -> "Morphism":
        base = self if k >= 0 else invert(self)
        out = Morphism.identity(self.algebra)
        for _ in range(abs(k)):
            out = out @ base
        if self.name:
            out.name = "id" if k == 0 else self.name if k == 1 else f"{self.name}^{k}"
        out.generalized = self.generalized
        return out

    def determinant(self) -> MPoly:
        return _det([list(r) for r in self.matrix])

    def check_homomorphism(self):
        """``(ok, witness)``; the witness is the first nonzero residual found."""
        if "hom" in self._checks:
            return self._checks["hom"]
        A = self.algebra
        x = MPoly.var(Var.X0)
        result = (True, None)
        for i in range(A.rank):
            si = self.column(i)
            for j in range(A.rank):
                lhs = self.apply(A.structure(i, j))
                rhs = A.bracket_vec(si, self.column(j), x)
                res = vsub(lhs, rhs)
                if not vzero(res):
                    result = (False, {"pair": (A.basis.names[i], A.basis.names[j]), "residual": res})
                    break
            if not result[0]:
                break
        self._checks["hom"] = result
        return result

    def is_homomorphism(self) -> bool:
        return self.check_homomorphism()[0]

    def is_automorphism(self) -> bool:
        det = self.determinant()
        return det.is_constant() and not det.is_zero() and self.is_homomorphism()

    def render(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.matrix]

    def __repr__(self) -> str:
        return f"Morphism({self.name or '?'}, {self.render()})"


def check_homomorphism(s: Morphism):
    return s.check_homomorphism()


def invert(s: Morphism) -> Morphism:
    """Exact inverse over Q[d]; the determinant must be a nonzero constant."""
    det = s.determinant()
    if not det.is_constant() or det.is_zero():
        raise AlgebraError(f"determinant {det} is not a unit of Q[d]; not invertible")
    c = det.constant_value()
    m = [list(r) for r in s.matrix]
    n = len(m)
    if n == 1:
        adj = [[ONE]]
    else:
        adj = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
                cof = _det(minor)
                adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    inv = [[e / c for e in row] for row in adj]
    name = f"{s.name}^-1" if s.name else ""
    return Morphism(s.algebra, inv, name, s.generalized)


@dataclass
class GroupSpec:
    """A group of automorphisms given by generators (and optional orders)."""

    generators: list
    orders: dict = field(default_factory=dict)

    def __post_init__(self):
        for g in self.generators:
            if not g.is_automorphism():
                raise AlgebraError(f"group generator {g.name or g} is not an automorphism")

    @classmethod
    def cyclic(cls, sigma: Morphism) -> "GroupSpec":
        return cls([sigma])

    @property
    def generator(self) -> Morphism:
        return self.generators[0]

    def inverses(self) -> list:
        return [invert(g) for g in self.generators]


def matrix_order(s: Morphism, limit: int = 24):
    """Smallest ``n >= 1`` with ``s^n = id``, or ``None`` within ``limit``."""
    ident = Morphism.identity(s.algebra)
    p = s
    for n in range(1, limit + 1):
        if p == ident:
            return n
        p = p @ s
    return None


# ---------------------------------------------------------------------------
# standard morphisms of the built-in algebras


def swap(algebra: Algebra, i: int = 0, j: int = 1) -> Morphism:
    n = algebra.rank
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    return Morphism(algebra, [[ONE if perm[c] == r else ZERO for c in range(n)] for r in range(n)], "swap")


def diagonal(algebra: Algebra, values: Sequence, name: str = "") -> Morphism:
    n = algebra.rank
    return Morphism(
        algebra, [[MPoly.const(values[i]) if i == j else ZERO for j in range(n)] for i in range(n)], name or "diag"
    )


def cartan_involution(algebra: Algebra) -> Morphism:
    """e <-> f, h -> -h on the current algebra of sl2 (basis e, h, f)."""
    if algebra.basis.names != ("e", "h", "f"):
        raise AlgebraError("the Cartan involution is defined for cur_sl2 (basis e, h, f)")
    m = [[ZERO, ZERO, ONE], [ZERO, MPoly.const(-1), ZERO], [ONE, ZERO, ZERO]]
    return Morphism(algebra, m, "invol")
