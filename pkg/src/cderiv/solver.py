"""Derivation-type spaces as truncated solution spaces of linear systems.

Every defining identity (conformal derivations, (sigma, tau)- and
(alpha, beta, gamma)-derivations, generalized derivations, quasiderivations,
(quasi)centroids, central derivations) is linear in the unknown map. The
unknown's matrix entries are expanded over monomials ``d^p x^q`` inside a
degree box, each monomial map is pushed through the identity, and the
kernel of the resulting Q-linear system is the space at that bound.

Spaces are stored as the reduced row echelon form of their coordinate
vectors, so equal spaces have identical bases.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .cend import ConfMap, GroupSpec, Morphism
from .gmod import (
    Parity,
    PolyMatrix,
    intersect_rowspaces,
    nullspace_from_rref,
    rank_over_fraction_field,
    rref_Q,
    sign,
)
from .lcsa import Algebra, AlgebraError, Vector, vadd, vscale, vsub, vzero
from .poly import ZERO, MPoly, Var, unpack

X0 = MPoly.var(Var.X0)
X1 = MPoly.var(Var.X1)


@dataclass(frozen=True)
class DegreeBound:
    d_partial: int = 2
    d_lambda: int = 2
    slack: int = 2

    def __post_init__(self):
        if self.d_partial < 0 or self.d_lambda < 0 or self.slack < 0:
            raise ValueError("degree bounds must be non-negative")

    @classmethod
    def default(cls) -> "DegreeBound":
        env = os.environ.get("LCSA_DEFAULT_BOUND")
        if env:
            dp, dl = (int(v) for v in env.split(","))
            return cls(dp, dl)
        return cls(2, 2)

    def grow(self, step: int = 1) -> "DegreeBound":
        return DegreeBound(self.d_partial + step, self.d_lambda + step, self.slack)

    def as_list(self) -> list[int]:
        return [self.d_partial, self.d_lambda]


class Kind(str, Enum):
    DER = "der"
    SIGMA_TAU = "sigma_tau"
    ABG = "abg"
    GDER = "gder"
    QDER = "qder"
    CENTROID = "centroid"
    QCENTROID = "qcentroid"
    ZDER = "zder"
    # auxiliary systems used by the verifiers
    FULL = "full"
    ANNIHILATOR = "annihilator"


def _frac3(abg) -> tuple[Fraction, Fraction, Fraction]:
    a, b, g = (Fraction(v) for v in abg)
    return a, b, g


@dataclass(frozen=True)
class EquationKind:
    tag: Kind
    parity: Parity = Parity.EVEN
    sigma: Morphism | None = None
    tau: Morphism | None = None
    abg: tuple | None = None
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        if self.tag == Kind.ABG:
            if self.abg is None:
                raise ValueError("ABG needs (alpha, beta, gamma)")
            object.__setattr__(self, "abg", _frac3(self.abg))

    # constructors
    @classmethod
    def der(cls, parity=Parity.EVEN):
        return cls(Kind.DER, parity)

    @classmethod
    def sigma_tau(cls, sigma: Morphism, tau: Morphism | None = None, parity=Parity.EVEN, strict=False):
        if tau is None:
            tau = Morphism.identity(sigma.algebra)
        return cls(Kind.SIGMA_TAU, parity, sigma, tau, strict=strict)

    @classmethod
    def alpha_beta_gamma(cls, alpha, beta, gamma, parity=Parity.EVEN):
        return cls(Kind.ABG, parity, abg=(alpha, beta, gamma))

    @classmethod
    def simple(cls, tag: Kind, parity=Parity.EVEN):
        return cls(Kind(tag), parity)

    @property
    def n_maps(self) -> int:
        return {Kind.GDER: 3, Kind.QDER: 2}.get(self.tag, 1)

    def with_parity(self, parity) -> "EquationKind":
        return EquationKind(self.tag, parity, self.sigma, self.tau, self.abg, self.strict)

    def label(self) -> str:
        if self.tag == Kind.SIGMA_TAU:
            return f"sigma_tau({self.sigma.name or 'sigma'},{self.tau.name or 'tau'})"
        if self.tag == Kind.ABG:
            return "abg(" + ",".join(_fmt(v) for v in self.abg) + ")"
        return self.tag.value

    def __hash__(self):
        return hash((self.tag, self.parity, self.abg, self.sigma and self.sigma.matrix, self.tau and self.tau.matrix))

    def __eq__(self, other):
        if not isinstance(other, EquationKind):
            return NotImplemented
        return (
            self.tag == other.tag
            and self.parity == other.parity
            and self.abg == other.abg
            and (self.sigma and self.sigma.matrix) == (other.sigma and other.sigma.matrix)
            and (self.tau and self.tau.matrix) == (other.tau and other.tau.matrix)
        )


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class SolverError(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# identities


def derivation_terms(A: Algebra, d: ConfMap, i: int, j: int, bvar: MPoly, sigma=None, tau=None):
    """The three bracket terms of a twisted derivation identity at ``(a_i, a_j)``.

    Returns ``(lhs, t1, t2)`` with ``lhs = d_s([a_i _b a_j])``,
    ``t1 = [(d_s a_i) _(s+b) sigma(a_j)]`` and
    ``t2 = (-1)^{|a_i||d|} [tau(a_i) _b d_s(a_j)]`` where ``s`` is ``d.slot``.
    """
    s = MPoly.var(d.slot)
    ei, ej = A.unit_vector(i), A.unit_vector(j)
    lhs = d.apply(A.bracket_vec(ei, ej, bvar), s)
    sb = ej if sigma is None else sigma.column(j)
    t1 = A.bracket_vec(d.apply(ei, s), sb, s + bvar)
    ta = ei if tau is None else tau.column(i)
    t2 = vscale(sign(A.parities[i] * d.parity), A.bracket_vec(ta, d.apply(ej, s), bvar))
    return lhs, t1, t2


def residuals(A: Algebra, kind: EquationKind, maps: Sequence[ConfMap | None], bvar=X1) -> list[Vector]:
    """Residual vectors of the defining identity for every ordered basis pair.

    ``maps`` holds one map, or ``(f, f', f'')`` for GDER and ``(f, f')`` for
    QDER; ``None`` entries count as zero. All residuals vanish exactly when
    the maps satisfy the identity.
    """
    n = A.rank
    out: list[Vector] = []
    zero = (ZERO,) * n
    tag = kind.tag

    def terms(m, i, j, sigma=None, tau=None):
        if m is None:
            return zero, zero, zero
        return derivation_terms(A, m, i, j, bvar, sigma, tau)

    for i in range(n):
        for j in range(n):
            if tag == Kind.GDER:
                f, f1, f2 = maps
                _, t1, _ = terms(f, i, j)
                _, _, t2 = terms(f1, i, j)
                lhs, _, _ = terms(f2, i, j)
                out.append(vsub(vadd(t1, t2), lhs))
                continue
            if tag == Kind.QDER:
                f, f1 = maps
                _, t1, t2 = terms(f, i, j)
                lhs, _, _ = terms(f1, i, j)
                out.append(vsub(vadd(t1, t2), lhs))
                continue
            (d,) = maps
            if tag == Kind.SIGMA_TAU:
                lhs, t1, t2 = terms(d, i, j, kind.sigma, kind.tau)
            else:
                lhs, t1, t2 = terms(d, i, j)
            if tag == Kind.DER or tag == Kind.SIGMA_TAU:
                out.append(vsub(vsub(lhs, t1), t2))
            elif tag == Kind.ABG:
                a, b, g = kind.abg
                out.append(vsub(vsub(vscale(a, lhs), vscale(b, t1)), vscale(g, t2)))
            elif tag == Kind.CENTROID:
                out.append(vsub(t1, t2))
                out.append(vsub(t2, lhs))
            elif tag == Kind.QCENTROID:
                out.append(vsub(t1, t2))
            elif tag == Kind.ZDER:
                out.append(t1)
                out.append(lhs)
            elif tag == Kind.FULL:
                pass
            else:
                raise SolverError(f"no pairwise identity for kind {tag}")
    return out


def commutator(d: ConfMap, s: Morphism) -> ConfMap:
    """``d_x s - s d_x`` as a conformal map."""
    return d.right(s) - d.left(s)


# ---------------------------------------------------------------------------
# unknowns and systems


def unknown_layout(A: Algebra, parity, bound: DegreeBound, n_maps: int = 1) -> list[tuple[int, int, int, int, int]]:
    """Coordinates ``(block, i, j, p, q)``: coefficient of ``d^p x^q`` in ``M[i][j]``."""
    par = A.parities
    parity = Parity(parity)
    out = []
    for block in range(n_maps):
        for i in range(A.rank):
            for j in range(A.rank):
                if par[i] != par[j] + parity:
                    continue
                for p in range(bound.d_partial + 1):
                    for q in range(bound.d_lambda + 1):
                        out.append((block, i, j, p, q))
    return out


def _monomial_map(A, parity, i, j, p, q) -> ConfMap:
    n = A.rank
    m = [[ZERO] * n for _ in range(n)]
    m[i][j] = MPoly.monomial((p, q, 0, 0))
    return ConfMap(A, parity, m)


def maps_from_vector(A: Algebra, parity, layout, vec, n_maps: int = 1) -> list[ConfMap]:
    n = A.rank
    mats = [[[ZERO] * n for _ in range(n)] for _ in range(n_maps)]
    for (block, i, j, p, q), c in zip(layout, vec):
        if c:
            mats[block][i][j] = mats[block][i][j] + MPoly.monomial((p, q, 0, 0), c)
    return [ConfMap(A, parity, m) for m in mats]


def vector_from_map(f: ConfMap, layout, block: int = 0):
    """Coordinates of ``f`` in ``layout``; ``None`` if ``f`` leaves the box."""
    index = {u: k for k, u in enumerate(layout)}
    vec = [Fraction(0)] * len(layout)
    g = f.with_slot(Var.X0)
    for i, row in enumerate(g.matrix):
        for j, e in enumerate(row):
            for key, c in e.items():
                dp, dq, e1, e2 = unpack(key)
                k = index.get((block, i, j, dp, dq))
                if k is None or e1 or e2:
                    return None
                vec[k] = c
    return vec


class _System:
    """Sparse accumulation of linear equations, one column per unknown."""

    def __init__(self, n_unknowns: int):
        self.n = n_unknowns
        self.rows: dict = {}

    def add_vectors(self, u: int, tag, vectors: Sequence[Vector]):
        for e, vec in enumerate(vectors):
            for k, p in enumerate(vec):
                for key, c in p.items():
                    self.rows.setdefault((tag, e, k, key), {})[u] = c

    def kernel(self) -> list[list[Fraction]]:
        zero = Fraction(0)
        dense = [[r.get(u, zero) for u in range(self.n)] for _, r in sorted(self.rows.items(), key=_row_key)]
        reduced, pivots = rref_Q(dense, self.n)
        return nullspace_from_rref(reduced, pivots, self.n)


def _row_key(item):
    (tag, e, k, key), _ = item
    return (str(tag), e, k, key)


# ---------------------------------------------------------------------------
# solution spaces


@dataclass
class SolutionSpace:
    algebra: Algebra
    kind: EquationKind
    bound: DegreeBound
    layout: list
    vectors: list  # canonical RREF rows (Fractions)
    label: str = ""
    joint: list = field(default_factory=list)  # GDER/QDER joint kernel vectors
    joint_layout: list = field(default_factory=list)
    saturated: bool | None = None
    residual_check: str = "pass"
    _basis: list | None = None
    _rank: int | None = None
    _gens: list | None = None

    @property
    def parity(self) -> Parity:
        return self.kind.parity

    @property
    def dim_Q(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> list[ConfMap]:
        if self._basis is None:
            self._basis = [maps_from_vector(self.algebra, self.parity, self.layout, v)[0] for v in self.vectors]
        return self._basis

    @property
    def joint_basis(self) -> list[tuple[ConfMap, ...]]:
        k = self.kind.n_maps
        return [tuple(maps_from_vector(self.algebra, self.parity, self.joint_layout, v, k)) for v in self.joint]

    @property
    def generators_over_Cpartial(self) -> list[int]:
        """Indices of a maximal Q(d)-independent sub-sequence of the basis."""
        if self._gens is None:
            self._compute_rank()
        return self._gens

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._compute_rank()
        return self._rank

    def _compute_rank(self):
        # d acts on Cend as -x, so the module rank is the rank over Q(x) of
        # the maps flattened by (i, j, d-power).
        flat_keys = sorted({(i, j, p) for _, i, j, p, _ in self.layout})
        chosen: list[int] = []
        cols: list[list[MPoly]] = []
        rank = 0
        for n, f in enumerate(self.basis):
            col = [f.matrix[i][j].coefficient_of(Var.PARTIAL, p) for i, j, p in flat_keys]
            trial = cols + [col]
            m = PolyMatrix.from_columns(len(flat_keys), trial)
            r = rank_over_fraction_field(m, Var.X0)
            if r > rank:
                rank = r
                cols = trial
                chosen.append(n)
        self._rank = rank
        self._gens = chosen

    def contains(self, f: ConfMap) -> bool:
        vec = vector_from_map(f, self.layout)
        if vec is None:
            return False
        if f.is_zero():
            return True
        if f.parity != self.parity:
            return False
        reduced, _ = rref_Q(self.vectors + [vec], len(self.layout))
        return len(reduced) == self.dim_Q

    def to_json(self) -> dict:
        return {
            "kind": self.label or self.kind.label(),
            "parity": str(self.parity),
            "bound": self.bound.as_list(),
            "dim_Q": self.dim_Q,
            "saturated": bool(self.saturated),
            "basis": [f.render() for f in self.basis],
            "residual_check": self.residual_check,
        }


def _check_kind(A: Algebra, kind: EquationKind):
    A.require_axioms()
    for s in (kind.sigma, kind.tau):
        if s is None:
            continue
        if s.algebra.rank != A.rank:
            raise SolverError("sigma/tau act on a different algebra")
        if kind.strict and (s.generalized or not s.is_automorphism()):
            raise SolverError(f"{s.name or 'map'} is not an automorphism (strict mode)")


def _finish(A, kind, bound, layout, kernel, label="", extra_check=None) -> SolutionSpace:
    n_maps = kind.n_maps
    if n_maps == 1:
        vectors = rref_Q(kernel, len(layout))[0] if kernel else []
        space = SolutionSpace(A, kind, bound, layout, vectors, label=label)
        bad = [f for f in space.basis if not _verify_single(A, kind, f, extra_check)]
    else:
        single = unknown_layout(A, kind.parity, bound)
        width = len(single)
        projected = [v[:width] for v in kernel]
        vectors = rref_Q(projected, width)[0] if projected else []
        space = SolutionSpace(A, kind, bound, single, vectors, label=label, joint=kernel, joint_layout=layout)
        bad = [t for t in space.joint_basis if not all(vzero(r) for r in residuals(A, kind, t))]
    if bad:
        space.residual_check = "fail"
        raise SolverError(f"{len(bad)} solution(s) failed re-substitution; solver defect")
    return space


def _verify_single(A, kind, f, extra_check) -> bool:
    if kind.tag not in (Kind.FULL, Kind.ANNIHILATOR):
        if not all(vzero(r) for r in residuals(A, kind, (f,))):
            return False
    return extra_check is None or extra_check(f)


def solve(A: Algebra, kind: EquationKind, bound: DegreeBound | None = None) -> SolutionSpace:
    """The Q-space of maps within ``bound`` satisfying the identity of ``kind``."""
    bound = bound or DegreeBound.default()
    _check_kind(A, kind)
    layout = unknown_layout(A, kind.parity, bound, kind.n_maps)
    system = _System(len(layout))
    if kind.tag != Kind.FULL:
        for u, (block, i, j, p, q) in enumerate(layout):
            m = _monomial_map(A, kind.parity, i, j, p, q)
            maps = [None] * kind.n_maps
            maps[block] = m
            system.add_vectors(u, "id", residuals(A, kind, maps))
    return _finish(A, kind, bound, layout, system.kernel())


def solve_constrained(
    A: Algebra,
    kind: EquationKind,
    bound: DegreeBound | None = None,
    constraints: Sequence = (),
    label: str = "",
) -> SolutionSpace:
    """``solve`` with extra linear conditions on the map.

    Each constraint sends a single-map candidate to a list of vectors that
    must all vanish; it has to be Q-linear in the map.
    """
    bound = bound or DegreeBound.default()
    if kind.n_maps != 1:
        raise SolverError("extra constraints are supported for single-map kinds only")
    _check_kind(A, kind)
    layout = unknown_layout(A, kind.parity, bound)
    system = _System(len(layout))
    for u, (_, i, j, p, q) in enumerate(layout):
        m = _monomial_map(A, kind.parity, i, j, p, q)
        if kind.tag not in (Kind.FULL, Kind.ANNIHILATOR):
            system.add_vectors(u, "id", residuals(A, kind, (m,)))
        for c, con in enumerate(constraints):
            system.add_vectors(u, f"c{c}", con(m))

    def holds(f):
        return all(vzero(v) for con in constraints for v in con(f))

    return _finish(A, kind, bound, layout, system.kernel(), label=label, extra_check=holds)


def solve_annihilator(A: Algebra, vectors: Sequence[Vector], parity=Parity.EVEN, bound: DegreeBound | None = None):
    """Maps with ``d_x(v) = 0`` for every given d-only vector ``v``."""
    kind = EquationKind(Kind.ANNIHILATOR, parity)
    return solve_constrained(A, kind, bound, [lambda m: [m.apply(v) for v in vectors]], label="annihilator")


def commutes_with(s: Morphism):
    """Constraint: ``d_x s = s d_x``."""
    return lambda m: list(commutator(m, s).matrix)


class InteriorKind(str, Enum):
    PLUS = "plus"
    MINUS = "minus"
    STAR = "star"


def solve_interior(
    A: Algebra,
    G: GroupSpec,
    sigma_power: int,
    interior: InteriorKind,
    bound: DegreeBound | None = None,
    parity=Parity.EVEN,
) -> SolutionSpace:
    """``CDer_{s^k}`` with the commutation constraints of the chosen interior."""
    interior = InteriorKind(interior)
    sigma_k = G.generator.power(sigma_power)
    kind = EquationKind.sigma_tau(sigma_k, Morphism.identity(A), parity)
    if interior == InteriorKind.STAR:
        commute = []
    elif interior == InteriorKind.PLUS:
        commute = [sigma_k]
    else:
        commute = list(G.generators)
    label = f"interior_{interior.value}({G.generator.name or 'sigma'}^{sigma_power})"
    return solve_constrained(A, kind, bound, [commutes_with(s) for s in commute], label=label)


def _compatible(s1: SolutionSpace, s2: SolutionSpace):
    if s1.bound.as_list() != s2.bound.as_list():
        raise SolverError("bound mismatch")
    if s1.algebra.rank != s2.algebra.rank or s1.parity != s2.parity:
        raise SolverError("spaces live in different coefficient spaces")


def intersect(s1: SolutionSpace, s2: SolutionSpace) -> SolutionSpace:
    _compatible(s1, s2)
    vectors = intersect_rowspaces(s1.vectors, s2.vectors, len(s1.layout)) if s1.vectors and s2.vectors else []
    label = f"({s1.label or s1.kind.label()}) & ({s2.label or s2.kind.label()})"
    return SolutionSpace(s1.algebra, s1.kind, s1.bound, s1.layout, vectors, label=label)


def space_equal(s1: SolutionSpace, s2: SolutionSpace) -> bool:
    _compatible(s1, s2)
    return s1.vectors == s2.vectors


def is_subspace(s1: SolutionSpace, s2: SolutionSpace) -> bool:
    _compatible(s1, s2)
    if not s1.vectors:
        return True
    reduced, _ = rref_Q(s2.vectors + s1.vectors, len(s1.layout))
    return len(reduced) == s2.dim_Q


def span_of_maps(A: Algebra, maps: Sequence[ConfMap], kind: EquationKind, bound: DegreeBound) -> SolutionSpace:
    """The Q-span of explicit maps as a space (maps outside the box are rejected)."""
    layout = unknown_layout(A, kind.parity, bound)
    vecs = []
    for f in maps:
        v = vector_from_map(f, layout)
        if v is None:
            raise SolverError("map leaves the degree box")
        vecs.append(v)
    vectors = rref_Q(vecs, len(layout))[0] if vecs else []
    return SolutionSpace(A, kind, bound, layout, vectors, label="span")


@dataclass
class ScanResult:
    steps: list  # (bound, dim_Q, generator count)
    saturated: bool
    rank: int | None
    space: SolutionSpace

    def to_json(self) -> dict:
        return {
            "steps": [{"bound": b.as_list(), "dim_Q": d, "generators": g} for b, d, g in self.steps],
            "saturated": self.saturated,
            "rank": self.rank if self.saturated else "unbounded at scan limit",
        }


def saturation_scan(A: Algebra, kind: EquationKind, bound0: DegreeBound, steps: int = 3, solver=None) -> ScanResult:
    """Re-solve at growing bounds; saturated when the Q(d)-rank stops moving."""
    if steps < 2:
        raise ValueError("a saturation scan needs at least two steps")
    solver = solver or (lambda b: solve(A, kind, b))
    rows = []
    space = None
    for s in range(steps):
        b = bound0.grow(s)
        space = solver(b)
        rows.append((b, space.dim_Q, space.rank))
    saturated = rows[-1][2] == rows[-2][2]
    space.saturated = saturated
    return ScanResult(rows, saturated, rows[-1][2] if saturated else None, space)
