"""Z/2-graded free Q[d]-modules of finite rank and the exact linear algebra
over Q and over Q(d) that the solvers run on."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import lcm
from typing import Sequence

from ._backend import rref_int
from .poly import ONE, ZERO, MPoly, Var, univariate_divmod


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        if isinstance(other, int):
            return Parity((int(self) + int(other)) % 2)
        return NotImplemented

    __radd__ = __add__

    @classmethod
    def parse(cls, s: str) -> "Parity":
        try:
            return {"even": cls.EVEN, "odd": cls.ODD, "0": cls.EVEN, "1": cls.ODD}[str(s).lower()]
        except KeyError:
            raise ValueError(f"unknown parity {s!r}") from None

    def __str__(self) -> str:
        return self.name.lower()


def sign(p: int) -> int:
    """(-1)^p."""
    return -1 if p % 2 else 1


@dataclass(frozen=True)
class Basis:
    names: tuple[str, ...]
    parities: tuple[Parity, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "parities", tuple(Parity(p) for p in self.parities))
        if not self.names:
            raise ValueError("a basis needs at least one generator")
        if len(self.names) != len(self.parities):
            raise ValueError("names and parities differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate basis names in {self.names}")

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis element {name!r}") from None

    @property
    def superdim(self) -> tuple[int, int]:
        even = sum(1 for p in self.parities if p == Parity.EVEN)
        return even, len(self.parities) - even


def vector_parity(basis: Basis, coords: Sequence[MPoly]):
    """Parity of a homogeneous vector, ``None`` if it mixes parities.

    The zero vector counts as even.
    """
    seen = {basis.parities[i] for i, c in enumerate(coords) if not c.is_zero()}
    if len(seen) > 1:
        return None
    return seen.pop() if seen else Parity.EVEN


@dataclass(frozen=True)
class Element:
    """An element of the free module: one d-polynomial per basis slot."""

    basis: Basis
    coords: tuple[MPoly, ...]

    def __post_init__(self):
        coords = tuple(MPoly.coerce(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.basis.rank:
            raise ValueError("coordinate count differs from basis rank")
        for c in coords:
            if c.variables() - {Var.PARTIAL}:
                raise ValueError(f"element coordinate {c} involves a spectral variable")

    @classmethod
    def zero(cls, basis: Basis) -> "Element":
        return cls(basis, (ZERO,) * basis.rank)

    @classmethod
    def gen(cls, basis: Basis, name_or_index, coeff=ONE) -> "Element":
        i = name_or_index if isinstance(name_or_index, int) else basis.index(name_or_index)
        coords = [ZERO] * basis.rank
        coords[i] = MPoly.coerce(coeff)
        return cls(basis, tuple(coords))

    @property
    def parity(self):
        return vector_parity(self.basis, self.coords)

    def is_homogeneous(self) -> bool:
        return self.parity is not None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def degree(self) -> int:
        return max(c.degree_in(Var.PARTIAL) for c in self.coords)

    def __add__(self, other: "Element") -> "Element":
        return Element(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        return Element(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.basis, tuple(-a for a in self.coords))

    def scale(self, p) -> "Element":
        p = MPoly.coerce(p)
        return Element(self.basis, tuple(p * a for a in self.coords))

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.basis.names, self.coords):
            if not c.is_zero():
                parts.append(name if c == ONE else f"({c}) {name}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[MPoly, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(MPoly.coerce(e) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValueError("entry grid does not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence]) -> "PolyMatrix":
        columns = [tuple(c) for c in columns]
        entries = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls(nrows, len(columns), entries)

    def column(self, j: int) -> tuple[MPoly, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[MPoly, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def render(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]


# ---------------------------------------------------------------------------
# linear algebra over Q


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        m = 1
        for v in fr:
            if v.denominator != 1:
                m = lcm(m, v.denominator)
        out.append([int(v * m) for v in fr])
    return out


def rref_Q(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q, zero rows dropped."""
    reduced, pivots = rref_int(_integer_rows(rows), ncols)
    out = []
    for row, p in zip(reduced, pivots):
        piv = row[p]
        out.append([Fraction(v, piv) for v in row])
    return out, pivots


def nullspace_from_rref(reduced: Sequence[Sequence[Fraction]], pivots: Sequence[int], ncols: int):
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def nullspace_over_Q(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Kernel basis: one vector per free column, in column order."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    reduced, pivots = rref_Q(m, ncols)
    return nullspace_from_rref(reduced, pivots, ncols)


def rank_Q(m: Sequence[Sequence], ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    return len(rref_int(_integer_rows(m), ncols)[1])


def solve_affine_Q(m: Sequence[Sequence], rhs: Sequence, ncols: int):
    """One solution of ``m x = rhs`` over Q, or ``None`` when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(m, rhs)]
    reduced, pivots = rref_Q(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[ncols]
    return x


def row_space(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Canonical basis of a row span: its reduced echelon form."""
    return rref_Q(rows, ncols)[0]


def intersect_rowspaces(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Canonical basis of span(a) ∩ span(b) via annihilators."""
    ann = nullspace_over_Q(a, ncols) + nullspace_over_Q(b, ncols)
    if not ann:
        return row_space([[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)], ncols)
    return row_space(nullspace_over_Q(ann, ncols), ncols)


# ---------------------------------------------------------------------------
# linear algebra over Q(d)


def rank_over_fraction_field(m: PolyMatrix, var: Var = Var.PARTIAL) -> int:
    """Rank over Q(var) by Bareiss fraction-free elimination."""
    for row in m.entries:
        for e in row:
            if e.variables() - {var}:
                raise ValueError(f"entry {e} involves variables other than {var.symbol}")
    a = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    rank = 0
    prev = ONE
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if not a[r][col].is_zero()), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            f = a[r][col]
            for c in range(col, ncols):
                num = p * a[r][c] - f * a[rank][c]
                q, rem = univariate_divmod(num, prev, var)
                if not rem.is_zero():
                    raise ArithmeticError("Bareiss division left a remainder")
                a[r][c] = q
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def submodule_membership(gens: PolyMatrix, v, slack: int = 2) -> bool:
    """Whether ``v`` is a Q[d]-combination of the columns of ``gens``.

    Witness degrees are bounded by deg(v) + max column degree + ``slack``;
    ``False`` means "not a member at that bound".
    """
    return membership_witness(gens, v, slack) is not None


def membership_witness(gens: PolyMatrix, v, slack: int = 2):
    target = list(v.coords) if isinstance(v, Element) else [MPoly.coerce(c) for c in v]
    for e in target:
        if e.variables() - {Var.PARTIAL}:
            raise ValueError("membership is decided for d-only vectors")
    if all(c.is_zero() for c in target):
        return [ZERO] * gens.cols
    if gens.cols == 0:
        return None
    cols = gens.columns()
    coldeg = max((e.degree_in(Var.PARTIAL) for col in cols for e in col), default=0)
    vdeg = max(c.degree_in(Var.PARTIAL) for c in target)
    bound = max(vdeg, 0) + max(coldeg, 0) + slack
    # unknowns: coefficient of d^p in the multiplier of column k
    unknowns = [(k, p) for k in range(len(cols)) for p in range(bound + 1)]
    top = bound + max(coldeg, 0)
    rows = []
    rhs = []
    for i in range(gens.rows):
        for e in range(top + 1):
            row = []
            for k, p in unknowns:
                row.append(cols[k][i].coefficient_of(Var.PARTIAL, e - p).constant_value() if e >= p else Fraction(0))
            rows.append(row)
            rhs.append(target[i].coefficient_of(Var.PARTIAL, e).constant_value())
    x = solve_affine_Q(rows, rhs, len(unknowns))
    if x is None:
        return None
    D = MPoly.var(Var.PARTIAL)
    out = [ZERO] * len(cols)
    for (k, p), c in zip(unknowns, x):
        if c:
            out[k] = out[k] + (D ** p) * c
    return out
