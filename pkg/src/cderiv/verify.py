"""Executable checks for the structural statements about twisted and
weighted conformal derivations.

Each verifier returns a :class:`VerifyReport`. A claim is only evaluated
once every hypothesis has passed; otherwise the status is
``"hypotheses not met"``. Space identities are exact at the chosen degree
bound and are reported as ``"verified at bound"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .cend import ConfMap, Morphism, cartan_involution, diagonal, gc_bracket, invert, swap
from .gmod import Parity, sign
from .lcsa import Algebra, AlgebraError, vsub, vzero
from .poly import ZERO, MPoly, Var
from .solver import (
    DegreeBound,
    EquationKind,
    Kind,
    SolutionSpace,
    SolverError,
    commutator,
    intersect,
    residuals,
    saturation_scan,
    solve,
    solve_annihilator,
    solve_constrained,
    space_equal,
)

X0 = MPoly.var(Var.X0)
X1 = MPoly.var(Var.X1)
X2 = MPoly.var(Var.X2)

PROPOSITIONS = (
    "P2.1", "P2.2", "P2.3", "P2.4", "C2.5", "P2.6", "P2.7", "P2.8",
    "P4.1", "L4.2", "L4.3", "P4.4", "C4.5",
    "P4.6", "P4.7", "T4.8", "T4.9", "L4.10", "P4.11", "P4.12",
)  # fmt: skip

VERIFIED = "verified at bound"
FAILED = "failed"
UNMET = "hypotheses not met"


@dataclass
class VerifyReport:
    id: str
    algebra: str
    bound: DegreeBound
    hypotheses: list = field(default_factory=list)  # (name, passed, note)
    claim: str | None = None  # "pass" | "fail" | None when not evaluated
    witnesses: dict = field(default_factory=dict)

    def hypothesis(self, name: str, passed: bool, note: str = "") -> bool:
        self.hypotheses.append((name, bool(passed), note))
        return bool(passed)

    @property
    def hypotheses_ok(self) -> bool:
        return all(p for _, p, _ in self.hypotheses)

    def conclude(self, ok: bool) -> "VerifyReport":
        if not self.hypotheses_ok:
            raise RuntimeError("claim evaluated with failing hypotheses")
        self.claim = "pass" if ok else "fail"
        return self

    @property
    def status(self) -> str:
        if not self.hypotheses_ok:
            return UNMET
        if self.claim is None:
            return UNMET
        return VERIFIED if self.claim == "pass" else FAILED

    @property
    def failed(self) -> bool:
        return self.status == FAILED

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "algebra": self.algebra,
            "bound": self.bound.as_list(),
            "hypotheses": [{"name": n, "passed": p, "note": note} for n, p, note in self.hypotheses],
            "claim": self.claim,
            "status": self.status,
            "witnesses": _jsonable(self.witnesses),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (MPoly, Fraction)):
        return str(x)
    if isinstance(x, ConfMap):
        return x.render()
    if isinstance(x, DegreeBound):
        return x.as_list()
    return x


class Context:
    """Memoised solves shared by the verifiers of one run."""

    def __init__(self, A: Algebra, bound: DegreeBound | None = None, strict: bool = False):
        self.A = A
        self.bound = bound or DegreeBound.default()
        self.strict = strict
        self._cache: dict = {}

    @property
    def parities(self) -> tuple[Parity, ...]:
        odd = any(p == Parity.ODD for p in self.A.parities)
        return (Parity.EVEN, Parity.ODD) if odd else (Parity.EVEN,)

    def solve(self, kind: EquationKind, bound: DegreeBound | None = None) -> SolutionSpace:
        b = bound or self.bound
        if self.strict and kind.tag == Kind.SIGMA_TAU:
            kind = EquationKind(kind.tag, kind.parity, kind.sigma, kind.tau, strict=True)
        key = (kind, tuple(b.as_list()))
        if key not in self._cache:
            self._cache[key] = solve(self.A, kind, b)
        return self._cache[key]

    def abg(self, a, b, g, parity) -> SolutionSpace:
        return self.solve(EquationKind.alpha_beta_gamma(a, b, g, parity))

    def st(self, sigma, tau=None, parity=Parity.EVEN) -> SolutionSpace:
        return self.solve(EquationKind.sigma_tau(sigma, tau, parity))

    def report(self, pid: str) -> VerifyReport:
        return VerifyReport(pid, self.A.name, self.bound)


def _ident(A):
    return Morphism.identity(A)


def separating_witness(s1: SolutionSpace, s2: SolutionSpace) -> dict | None:
    """A basis map of one space lying outside the other, with its first
    nonzero residual against the other space's defining identity."""
    for inside, outside in ((s1, s2), (s2, s1)):
        for f in inside.basis:
            if outside.contains(f):
                continue
            out = {
                "map": f.render(),
                "in": inside.label or inside.kind.label(),
                "not_in": outside.label or outside.kind.label(),
                "residual": None,
            }
            tag = outside.kind.tag
            if tag not in (Kind.GDER, Kind.QDER, Kind.FULL):
                for vec in residuals(inside.algebra, outside.kind, [f]):
                    nz = [str(c) for c in vec if not c.is_zero()]
                    if nz:
                        out["residual"] = [str(c) for c in vec]
                        break
            return out
    return None


def _eq(rep: "VerifyReport", s1: SolutionSpace, s2: SolutionSpace) -> bool:
    """space_equal that records the first separating map on the report."""
    if space_equal(s1, s2):
        return True
    if "separating_map" not in rep.witnesses:
        rep.witnesses["separating_map"] = separating_witness(s1, s2)
    return False


def _is_auto(rep: VerifyReport, s: Morphism, label: str) -> bool:
    if s.generalized:
        return rep.hypothesis(f"{label} is an automorphism", False, "generalized scalar, not a bracket homomorphism")
    ok = s.is_automorphism()
    note = "" if ok else str(s.check_homomorphism()[1] or "determinant is not a unit")
    return rep.hypothesis(f"{label} is an automorphism", ok, note)


def _central_vectors(A: Algebra, vec) -> bool:
    """All spectral coefficients of a vector with parameters are central."""
    parts: dict = {}
    for k, p in enumerate(vec):
        for exps, c in p.terms.items():
            coeffs = parts.setdefault(exps[1:], [ZERO] * A.rank)
            coeffs[k] = coeffs[k] + MPoly.monomial((exps[0], 0, 0, 0), c)
    return all(A.is_central(tuple(v)) for v in parts.values())


def _map_is_central_valued(A: Algebra, f: ConfMap) -> bool:
    return all(_central_vectors(A, f.column(j)) for j in range(A.rank))


def _center_is_zero(ctx: Context) -> bool:
    return ctx.A.center(ctx.bound.d_partial).cols == 0


# ---------------------------------------------------------------------------
# twisted derivations


def verify_P2_1(ctx: Context, sigma: Morphism, tau: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.1")
    if not (_is_auto(rep, sigma, "sigma") & _is_auto(rep, tau, "tau")):
        return rep
    tinv = invert(tau)
    rho = tinv @ sigma
    ok = True
    dims = {}
    for par in ctx.parities:
        s1 = ctx.st(sigma, tau, par)
        s2 = ctx.st(rho, _ident(A), par)
        kind2 = EquationKind.sigma_tau(rho, _ident(A), par)
        bad = [n for n, d in enumerate(s1.basis) if not all(vzero(r) for r in residuals(A, kind2, (d.left(tinv),)))]
        roundtrip = all(d.left(tinv).left(tau) == d for d in s1.basis)
        same = s1.dim_Q == s2.dim_Q if _constant(tau) else s1.rank == s2.rank
        dims[str(par)] = {"sigma_tau": s1.dim_Q, "twisted": s2.dim_Q, "rank": [s1.rank, s2.rank]}
        if bad:
            rep.witnesses.setdefault("phi_images_failing", []).append([str(par), bad])
        ok = ok and not bad and roundtrip and same
    rep.witnesses["dims"] = dims
    return rep.conclude(ok)


def _constant(s: Morphism) -> bool:
    return all(e.is_constant() for r in s.matrix for e in r)


def twisted_bracket(f: ConfMap, g: ConfMap, sigma: Morphism, lam=Var.X0, total=Var.X1) -> ConfMap:
    """``phi^-1([phi(f)_lam phi(g)])`` with ``phi(d) = sigma^-1 d``."""
    sinv = invert(sigma)
    return gc_bracket(f.left(sinv), g.left(sinv), lam, total).left(sigma)


def gc_skew_residual(br: Callable, f: ConfMap, g: ConfMap) -> ConfMap:
    """``[f_x g]_y + (-1)^{|f||g|} [g_{y-x} f]_y``."""
    fg = br(f, g)
    gf = br(g, f)
    swapped = ConfMap(gf.algebra, gf.parity, [[e.subs({Var.X0: X1 - X0}) for e in r] for r in gf.matrix], gf.slot)
    return fg + swapped.scale(sign(f.parity * g.parity))


def gc_jacobi_residual(br: Callable, f: ConfMap, g: ConfMap, h: ConfMap) -> ConfMap:
    """Jacobi residual with parameters x (for f), y (for g) and total slot z."""
    lhs = br(f, br(g, h, Var.X1, Var.X2), Var.X0, Var.X2)
    fg = br(f, g, Var.X0, Var.X2)
    t1 = br(fg, h, X0 + X1, Var.X2)
    t2 = br(g, br(f, h, Var.X0, Var.X2), Var.X1, Var.X2)
    return lhs - t1 - t2.scale(sign(f.parity * g.parity))


def _same_parity_pairs(basis, limit):
    return basis[:limit]


def verify_P2_2(ctx: Context, sigma: Morphism, max_basis: int = 3) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.2")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    sinv = invert(sigma)

    def br(f, g, lam=Var.X0, total=Var.X1):
        return twisted_bracket(f, g, sigma, lam, total)

    elems = []
    for par in ctx.parities:
        elems += ctx.st(sigma, sigma, par).basis[:max_basis]
    ok = True
    counts = {"C1": 0, "C2": 0, "C3": 0, "intertwine": 0, "closure": 0}
    for f in elems:
        for g in elems:
            # sesquilinearity: [(d f)_x g] = -x [f_x g]
            c1 = br(f.dshift(), g) - br(f, g).scale(-X0)
            c2 = gc_skew_residual(br, f, g)
            inter = br(f, g).left(sinv) - gc_bracket(f.left(sinv), g.left(sinv))
            kind = EquationKind.sigma_tau(sigma, sigma, f.parity + g.parity)
            closed = all(vzero(r) for r in residuals(A, kind, (br(f, g),), bvar=X2))
            for key, good in (("C1", c1.is_zero()), ("C2", c2.is_zero()), ("intertwine", inter.is_zero()), ("closure", closed)):
                counts[key] += int(good)
                ok = ok and good
            for h in elems:
                good = gc_jacobi_residual(br, f, g, h).is_zero()
                counts["C3"] += int(good)
                ok = ok and good
    rep.witnesses["elements"] = len(elems)
    rep.witnesses["passed_checks"] = counts
    return rep.conclude(ok)


def verify_P2_3(ctx: Context, sigma: Morphism, tau: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.3")
    diff = sigma - tau
    central = all(A.is_central(diff.column(j)) for j in range(A.rank))
    _is_auto(rep, sigma, "sigma")
    _is_auto(rep, tau, "tau")
    if not rep.hypothesis("(sigma - tau)(R) lies in the center", central):
        return rep
    ok = True
    for par in ctx.parities:
        ok = ok and _eq(rep, ctx.st(sigma, None, par), ctx.st(tau, None, par))
    if sigma.is_identity() or tau.is_identity():
        rep.witnesses["equals_CDer"] = ok
    return rep.conclude(ok)


def _morphisms_commute(s: Morphism, t: Morphism) -> bool:
    return (s @ t).matrix == (t @ s).matrix


def verify_P2_4(ctx: Context, sigma: Morphism, sigma2: Morphism, f: ConfMap, g: ConfMap) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.4")
    k1 = EquationKind.sigma_tau(sigma, _ident(A), f.parity)
    k2 = EquationKind.sigma_tau(sigma2, _ident(A), g.parity)
    rep.hypothesis("f in CDer_sigma", all(vzero(r) for r in residuals(A, k1, (f,))))
    rep.hypothesis("g in CDer_sigma'", all(vzero(r) for r in residuals(A, k2, (g,))))
    rep.hypothesis("sigma and sigma' commute", _morphisms_commute(sigma, sigma2))
    rep.hypothesis("f commutes with sigma'", commutator(f, sigma2).is_zero())
    rep.hypothesis("g commutes with sigma", commutator(g, sigma).is_zero())
    if not rep.hypotheses_ok:
        return rep
    br = gc_bracket(f, g)
    kind = EquationKind.sigma_tau(sigma @ sigma2, _ident(A), f.parity + g.parity)
    res = residuals(A, kind, (br,), bvar=X2)
    bad = [r for r in res if not vzero(r)]
    if bad:
        rep.witnesses["residual"] = bad[0]
    rep.witnesses["bracket_zero"] = br.is_zero()
    return rep.conclude(not bad)


def verify_P2_4_space(ctx: Context, sigma: Morphism, sigma2: Morphism, max_basis: int = 4) -> VerifyReport:
    """Product closure over the interiors: f from CDer+_sigma commuting with sigma', g likewise."""
    A = ctx.A
    rep = ctx.report("P2.4")
    if not (_is_auto(rep, sigma, "sigma") & _is_auto(rep, sigma2, "sigma'")):
        return rep
    if not rep.hypothesis("sigma and sigma' commute", _morphisms_commute(sigma, sigma2)):
        return rep
    from .solver import commutes_with

    ok = True
    checked = 0
    for p1 in ctx.parities:
        F = solve_constrained(A, EquationKind.sigma_tau(sigma, None, p1), ctx.bound, [commutes_with(sigma2)])
        for p2 in ctx.parities:
            Gs = solve_constrained(A, EquationKind.sigma_tau(sigma2, None, p2), ctx.bound, [commutes_with(sigma)])
            kind = EquationKind.sigma_tau(sigma @ sigma2, _ident(A), p1 + p2)
            for f in F.basis[:max_basis]:
                for g in Gs.basis[:max_basis]:
                    checked += 1
                    res = residuals(A, kind, (gc_bracket(f, g),), bvar=X2)
                    if not all(vzero(r) for r in res):
                        ok = False
                        rep.witnesses.setdefault("failing_pairs", []).append([f.render(), g.render()])
    rep.witnesses["pairs_checked"] = checked
    return rep.conclude(ok)


def verify_C2_5(ctx: Context, sigma: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("C2.5")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    rep.hypothesis("sigma is involutive", (sigma @ sigma).is_identity())
    spaces = [ctx.st(sigma, None, p) for p in ctx.parities]
    elems = [f for s in spaces for f in s.basis]
    rep.hypothesis("sigma commutes with every element of CDer_sigma", all(commutator(f, sigma).is_zero() for f in elems))
    if not rep.hypotheses_ok:
        return rep
    printed = True
    corrected = True
    for f in elems:
        for g in elems:
            br = gc_bracket(f, g)
            par = f.parity + g.parity
            in_sigma = all(vzero(r) for r in residuals(A, EquationKind.sigma_tau(sigma, None, par), (br,), bvar=X2))
            in_sq = all(vzero(r) for r in residuals(A, EquationKind.sigma_tau(sigma @ sigma, None, par), (br,), bvar=X2))
            printed = printed and in_sigma
            corrected = corrected and in_sq
            if not in_sigma and "printed_counterexample" not in rep.witnesses:
                rep.witnesses["printed_counterexample"] = [f.render(), g.render()]
    rep.witnesses["closed_in_CDer_sigma"] = printed
    rep.witnesses["closed_in_CDer_sigma_squared"] = corrected
    return rep.conclude(printed)


def verify_P2_6(ctx: Context, sigma: Morphism, tau: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.6")
    if not (_is_auto(rep, sigma, "sigma") & _is_auto(rep, tau, "tau")):
        return rep
    ok = True
    n = 0
    for par in ctx.parities:
        k_left = EquationKind.sigma_tau(tau @ sigma, tau, par)
        k_right = EquationKind.sigma_tau(sigma @ tau, tau, par)
        for d in ctx.st(sigma, None, par).basis:
            n += 1
            a = all(vzero(r) for r in residuals(A, k_left, (d.left(tau),)))
            b = all(vzero(r) for r in residuals(A, k_right, (d.right(tau),)))
            if not (a and b):
                ok = False
                rep.witnesses.setdefault("failing", []).append({"d": d.render(), "tau_d": a, "d_tau": b})
    rep.witnesses["maps_checked"] = n
    return rep.conclude(ok)


def probe_elements(A: Algebra, degree: int = 1) -> list:
    """Basis elements, their d-dressings and pairwise sums of same parity."""
    out = []
    D = MPoly.var(Var.PARTIAL)
    for i in range(A.rank):
        for k in range(degree + 1):
            out.append(A.unit_vector(i, D ** k))
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            if A.parities[i] == A.parities[j]:
                out.append(tuple(a + b for a, b in zip(A.unit_vector(i), A.unit_vector(j))))
    return out


def verify_P2_7(ctx: Context, sigma: Morphism, tau: Morphism, probe_degree: int = 1) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.7")
    if not (_is_auto(rep, sigma, "sigma") & _is_auto(rep, tau, "tau")):
        return rep
    rho = invert(sigma) @ tau
    witness = None
    probes = probe_elements(A, probe_degree)
    for c in probes:
        diff = vsub(c, rho.apply(c))
        if vzero(A.bracket_vec(c, diff, X0)):
            witness = c
            break
    note = f"probed {len(probes)} elements, not proven"
    if witness is not None:
        note = "fails at c = " + " + ".join(f"({p}) {n}" for p, n in zip(witness, A.basis.names) if not p.is_zero())
    if not rep.hypothesis("c - sigma^-1 tau(c) is not in Z_c(R)", witness is None, note):
        return rep
    ok = True
    for par in ctx.parities:
        meet = intersect(ctx.st(sigma, None, par), ctx.st(tau, None, par))
        rep.witnesses[f"intersection_dim_{par}"] = meet.dim_Q
        ok = ok and meet.dim_Q == 0
    return rep.conclude(ok)


def verify_P2_8(ctx: Context, sigma: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P2.8")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    derived = A.derived_subalgebra().columns()

    def central_commutator(m):
        c = commutator(m, sigma)
        return [A.bracket_vec(c.column(j), A.unit_vector(k), X1) for j in range(A.rank) for k in range(A.rank)]

    ok = True
    total = 0
    for par in ctx.parities:
        kind = EquationKind.sigma_tau(sigma, None, par)
        S = solve_constrained(A, kind, ctx.bound, [central_commutator], label="P2.8 hypothesis")
        total += S.dim_Q
        for d in S.basis:
            c = commutator(d, sigma)
            if not all(vzero(c.apply(v)) for v in derived):
                ok = False
                rep.witnesses.setdefault("failing", []).append(d.render())
    rep.witnesses["maps_meeting_hypothesis"] = total
    rep.witnesses["derived_generators"] = len(derived)
    return rep.conclude(ok)


# ---------------------------------------------------------------------------
# centroids and twisted derivations


def verify_P4_1(ctx: Context, sigma: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P4.1")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    part1 = True
    dims = {}
    for par in ctx.parities:
        meet = intersect(ctx.solve(EquationKind.simple(Kind.CENTROID, par)), ctx.st(sigma, None, par))
        dims[str(par)] = meet.dim_Q
        part1 = part1 and all(_map_is_central_valued(A, d) for d in meet.basis)
    rep.witnesses["intersection_dims"] = dims
    rep.witnesses["ad_of_values_vanishes"] = part1
    zero_center = _center_is_zero(ctx)
    rep.witnesses["center_zero_at_bound"] = zero_center
    if zero_center:
        return rep.conclude(part1 and all(v == 0 for v in dims.values()))
    return rep.conclude(part1)


def _ad_vector(A: Algebra, v, slot: MPoly, parity) -> ConfMap:
    """``ad(v)`` at ``slot`` for a vector that may carry spectral parameters."""
    cols = [A.bracket_vec(v, A.unit_vector(j), slot) for j in range(A.rank)]
    return ConfMap.from_columns(A, parity, cols, Var.X1)


def verify_L4_2(ctx: Context, sigma: Morphism) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("L4.2")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    sinv = invert(sigma)
    ok = True
    n = 0
    for par in ctx.parities:
        for d in ctx.st(sigma, None, par).basis:
            for i in range(A.rank):
                n += 1
                ad_a = A.adjoint(A.unit_vector(i))
                lhs = gc_bracket(d, ad_a)
                v = sinv.apply(d.apply(A.unit_vector(i)))
                rhs = _ad_vector(A, v, X1, d.parity + A.parities[i]).left(sigma)
                if lhs.matrix != rhs.matrix:
                    ok = False
                    rep.witnesses.setdefault("failing", []).append({"d": d.render(), "a": A.basis.names[i]})
    rep.witnesses["cases"] = n
    return rep.conclude(ok)


def phi_a(A: Algebra, sigma: Morphism, d: ConfMap, a) -> ConfMap:
    """``d -> ad(sigma^-1 d_x(a))`` evaluated at slot y; x stays a parameter."""
    v = invert(sigma).apply(d.apply(a))
    par = A.parity_of(a) or Parity.EVEN
    return _ad_vector(A, v, X1, d.parity + par)


def verify_L4_3(ctx: Context, sigma: Morphism, a_index: int = 0) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("L4.3")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    a = A.unit_vector(a_index)
    ok = True
    for par in ctx.parities:
        basis = ctx.st(sigma, None, par).basis
        for f in basis:
            # d-equivariance: phi(d f) = -x phi(f)
            if phi_a(A, sigma, f.dshift(), a).matrix != phi_a(A, sigma, f, a).scale(-X0).matrix:
                ok = False
            for g in basis:
                if phi_a(A, sigma, f + g, a).matrix != (phi_a(A, sigma, f, a) + phi_a(A, sigma, g, a)).matrix:
                    ok = False
    rep.witnesses["a"] = A.basis.names[a_index]
    return rep.conclude(ok)


def verify_P4_4(ctx: Context, sigma: Morphism, a_index: int = 0) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P4.4")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    a = A.unit_vector(a_index)
    sinv = invert(sigma)

    def kernel_phi(m):
        v = sinv.apply(m.apply(a))
        return [A.bracket_vec(v, A.unit_vector(k), X1) for k in range(A.rank)]

    def value_central(m):
        v = m.apply(a)
        return [A.bracket_vec(v, A.unit_vector(k), X1) for k in range(A.rank)]

    ok = True
    closure = True
    dims = {}
    kernels = []
    for par in ctx.parities:
        kind = EquationKind.sigma_tau(sigma, None, par)
        K1 = solve_constrained(A, kind, ctx.bound, [kernel_phi], label="Ker phi")
        K2 = solve_constrained(A, kind, ctx.bound, [value_central], label="d(a) central")
        dims[str(par)] = K1.dim_Q
        ok = ok and _eq(rep, K1, K2)
        kernels += K1.basis
    for f in kernels:
        for g in kernels:
            v = gc_bracket(f, g).apply(a)
            if not all(vzero(A.bracket_vec(v, A.unit_vector(k), X2)) for k in range(A.rank)):
                closure = False
    rep.witnesses["kernel_dims"] = dims
    rep.witnesses["bracket_values_central"] = closure
    return rep.conclude(ok and closure)


def verify_C4_5(ctx: Context, sigma: Morphism, steps: int = 3, a0_candidates=None) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("C4.5")
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    rep.hypothesis("R is centerless (at bound)", _center_is_zero(ctx))
    found = None
    for i in a0_candidates if a0_candidates is not None else range(A.rank):
        a = A.unit_vector(i)
        ok = True
        for par in ctx.parities:
            kill = solve_constrained(A, EquationKind.sigma_tau(sigma, None, par), ctx.bound, [lambda m, a=a: [m.apply(a)]])
            ok = ok and kill.dim_Q == 0
        if ok:
            found = A.basis.names[i]
            break
    rep.hypothesis("some a0 has d(a0) != 0 for all nonzero d", found is not None, f"a0 = {found}" if found else "")
    if not rep.hypotheses_ok:
        return rep
    rank = 0
    start = DegreeBound(max(ctx.bound.d_partial - 1, 0), max(ctx.bound.d_lambda - 1, 0))
    for par in ctx.parities:
        scan = saturation_scan(A, EquationKind.sigma_tau(sigma, None, par), start, steps)
        rep.witnesses[f"scan_{par}"] = scan.to_json()
        if not rep.hypothesis(f"rank saturates ({par})", scan.saturated, "unbounded at scan limit"):
            return rep
        rank += scan.rank
    rep.witnesses["rank"] = rank
    rep.witnesses["rank_R"] = A.rank
    return rep.conclude(rank <= A.rank)


# ---------------------------------------------------------------------------
# weighted (alpha, beta, gamma)-derivations


def verify_P4_6(ctx: Context, abg=(1, 2, 3), scale=5) -> VerifyReport:
    rep = ctx.report("P4.6")
    items = {}
    a, b, g = abg
    for par in ctx.parities:
        der = ctx.solve(EquationKind.der(par))
        items[f"(1) {par}"] = _eq(rep, ctx.abg(1, 1, 1, par), der)
        items[f"(2) {par}"] = _eq(rep, ctx.abg(0, 1, -1, par), ctx.solve(EquationKind.simple(Kind.QCENTROID, par)))
        items[f"(3) {par}"] = _eq(rep, 
            intersect(ctx.abg(1, 0, 0, par), ctx.abg(0, 1, 0, par)), ctx.solve(EquationKind.simple(Kind.ZDER, par))
        )
        items[f"(4) {par}"] = _eq(rep, ctx.abg(scale * a, scale * b, scale * g, par), ctx.abg(a, b, g, par))
    rep.witnesses["items"] = items
    return rep.conclude(all(items.values()))


def verify_P4_7(ctx: Context, abg=(1, 2, 3)) -> VerifyReport:
    rep = ctx.report("P4.7")
    a, b, g = (Fraction(v) for v in abg)
    ok = True
    for par in ctx.parities:
        lhs = ctx.abg(a, b, g, par)
        rhs = intersect(ctx.abg(0, b - g, g - b, par), ctx.abg(2 * a, b + g, b + g, par))
        rep.witnesses[f"dim_{par}"] = lhs.dim_Q
        ok = ok and _eq(rep, lhs, rhs)
    rep.witnesses["abg"] = [a, b, g]
    return rep.conclude(ok)


def normal_form(abg) -> tuple[int, tuple[Fraction, Fraction, Fraction]]:
    """Case number (1-4) and normal-form triple for a weighted derivation."""
    a, b, g = (Fraction(v) for v in abg)
    if b == 0 and g == 0:
        return 1, (a, Fraction(0), Fraction(0))
    if b == g:
        return 4, (a / b, Fraction(1), Fraction(1))
    if b == -g:
        return 2, (a / b, Fraction(1), Fraction(-1))
    return 3, (a / (b + g), Fraction(1), Fraction(0))


DEFAULT_GRID = ((1, 2, 3), (2, 0, 0), (0, 3, 3), (1, -2, 2), (3, 1, 1), (0, 1, 2), (2, 1, 3), (0, 0, 0), (-1, 1, 4))


def verify_T4_8(ctx: Context, grid=DEFAULT_GRID) -> VerifyReport:
    rep = ctx.report("T4.8")
    ok = True
    rows = []
    for t in grid:
        case, nf = normal_form(t)
        same = all(_eq(rep, ctx.abg(*t, par), ctx.abg(*nf, par)) for par in ctx.parities)
        rows.append({"abg": list(t), "case": case, "delta": nf[0], "equal": same})
        ok = ok and same
    rep.witnesses["grid"] = rows
    return rep.conclude(ok)


def verify_T4_9(ctx: Context, deltas=(1, 2, Fraction(1, 2), -3)) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("T4.9")
    items = {}
    derived = A.derived_subalgebra().columns()
    for par in ctx.parities:
        full = ctx.solve(EquationKind(Kind.FULL, par))
        qc = ctx.abg(0, 1, -1, par)
        items[f"(i) {par}"] = _eq(rep, ctx.abg(0, 0, 0, par), full)
        ann = solve_annihilator(A, derived, par, ctx.bound)
        items[f"(ii) {par}"] = _eq(rep, ctx.abg(1, 0, 0, par), ann)
        items[f"(iii) {par}"] = _eq(rep, qc, ctx.solve(EquationKind.simple(Kind.QCENTROID, par)))
        for dl in deltas:
            items[f"(iv) delta={dl} {par}"] = _eq(rep, ctx.abg(dl, 1, -1, par), intersect(qc, ctx.abg(1, 0, 0, par)))
            items[f"(vi) delta={dl} {par}"] = _eq(rep, ctx.abg(dl, 1, 0, par), intersect(qc, ctx.abg(2 * dl, 1, 1, par)))
        rep.witnesses[f"dim_ii_{par}"] = ann.dim_Q
    rep.witnesses["items"] = items
    return rep.conclude(all(items.values()))


def verify_L4_10(ctx: Context, abg=(1, 2, 3)) -> VerifyReport:
    rep = ctx.report("L4.10")
    a, b, g = (Fraction(v) for v in abg)
    if not rep.hypothesis("beta + gamma != 0", b + g != 0, "the statement is read with beta+gamma in the denominator"):
        return rep
    rep.witnesses["beta_equals_gamma"] = b == g
    target = (a / (b + g), 1, 0)
    ok = all(_eq(rep, ctx.abg(a, b, g, par), ctx.abg(*target, par)) for par in ctx.parities)
    rep.witnesses["target"] = list(target)
    return rep.conclude(ok)


def verify_P4_11(ctx: Context, sigma: Morphism, alpha) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P4.11")
    alpha = Fraction(alpha)
    if not _is_auto(rep, sigma, "sigma"):
        return rep
    diff = sigma - Morphism.scalar(A, alpha)
    rep.hypothesis("(sigma - alpha id)(R) lies in the center", all(A.is_central(diff.column(j)) for j in range(A.rank)))
    if alpha != 1:
        rep.hypothesis("alpha != -1", alpha != -1, "the weighted form divides by alpha + 1")
    if not rep.hypotheses_ok:
        return rep
    ok = True
    for par in ctx.parities:
        cs = ctx.st(sigma, None, par)
        ok = ok and _eq(rep, cs, ctx.abg(1, alpha, 1, par))
        if alpha == 1:
            ok = ok and _eq(rep, cs, ctx.solve(EquationKind.der(par)))
        else:
            ok = ok and _eq(rep, cs, ctx.abg(1 / (alpha + 1), 1, 0, par))
    rep.witnesses["branch"] = "alpha = 1" if alpha == 1 else "alpha != 1"
    return rep.conclude(ok)


def verify_P4_12(ctx: Context, delta=1) -> VerifyReport:
    A = ctx.A
    rep = ctx.report("P4.12")
    delta = Fraction(delta)
    if not rep.hypothesis("delta != 0", delta != 0):
        return rep
    if not rep.hypothesis(
        "generalized scalars permitted", not ctx.strict, "-id and (1/delta) id are not automorphisms"
    ):
        return rep
    minus = Morphism.scalar(A, -1)
    inv = Morphism.scalar(A, 1 / delta)
    first = True
    second = True
    for par in ctx.parities:
        first = first and _eq(rep, ctx.abg(delta, 1, -1, par), ctx.st(_ident(A), minus, par))
        second = second and _eq(rep, ctx.abg(delta, 1, 1, par), ctx.st(inv, inv, par))
    rep.witnesses["delta_1_-1"] = first
    rep.witnesses["delta_1_1"] = second
    return rep.conclude(first and second)


# ---------------------------------------------------------------------------
# suite


def default_sigma(A: Algebra) -> Morphism:
    """A non-trivial automorphism for the built-in algebras where one is known."""
    names = A.basis.names
    if names == ("e", "h", "f"):
        return cartan_involution(A)
    if A.name.startswith("abelian") and A.rank >= 2 and A.parities[0] == A.parities[1]:
        return swap(A, 0, 1)
    if A.name == "heisenberg_pair":
        return diagonal(A, [1, -1], "flip")
    return Morphism.identity(A)


def default_tau(A: Algebra) -> Morphism:
    if A.name.startswith("abelian") and A.rank >= 2 and A.parities[0] == A.parities[1]:
        return diagonal(A, [1, 2] + [1] * (A.rank - 2), "diag12")
    return Morphism.identity(A)


def run(pid: str, ctx: Context, sigma=None, tau=None, abg=None, alpha=None, delta=None) -> VerifyReport:
    A = ctx.A
    sigma = sigma or default_sigma(A)
    tau = tau or default_tau(A)
    ident = Morphism.identity(A)
    abg = abg or (1, 2, 3)
    try:
        if pid == "P2.1":
            return verify_P2_1(ctx, sigma, tau)
        if pid == "P2.2":
            return verify_P2_2(ctx, sigma)
        if pid == "P2.3":
            return verify_P2_3(ctx, sigma, tau)
        if pid == "P2.4":
            return verify_P2_4_space(ctx, sigma, sigma)
        if pid == "C2.5":
            return verify_C2_5(ctx, sigma)
        if pid == "P2.6":
            return verify_P2_6(ctx, sigma, tau)
        if pid == "P2.7":
            return verify_P2_7(ctx, ident, sigma)
        if pid == "P2.8":
            return verify_P2_8(ctx, sigma)
        if pid == "P4.1":
            return verify_P4_1(ctx, sigma)
        if pid == "L4.2":
            return verify_L4_2(ctx, sigma)
        if pid == "L4.3":
            return verify_L4_3(ctx, sigma)
        if pid == "P4.4":
            return verify_P4_4(ctx, sigma)
        if pid == "C4.5":
            return verify_C4_5(ctx, sigma)
        if pid == "P4.6":
            return verify_P4_6(ctx, abg)
        if pid == "P4.7":
            return verify_P4_7(ctx, abg)
        if pid == "T4.8":
            return verify_T4_8(ctx)
        if pid == "T4.9":
            return verify_T4_9(ctx)
        if pid == "L4.10":
            return verify_L4_10(ctx, abg)
        if pid == "P4.11":
            return verify_P4_11(ctx, sigma, 1 if alpha is None else alpha)
        if pid == "P4.12":
            return verify_P4_12(ctx, 1 if delta is None else delta)
    except (SolverError, AlgebraError) as exc:
        rep = ctx.report(pid)
        rep.hypothesis("inputs accepted by the solver", False, str(exc))
        return rep
    raise KeyError(f"unknown proposition {pid!r}")


def run_suite(A: Algebra, bound: DegreeBound | None = None, ids: Sequence[str] = PROPOSITIONS, **kw) -> list[VerifyReport]:
    ctx = Context(A, bound, strict=kw.pop("strict", False))
    return [run(pid, ctx, **kw) for pid in ids]


def summary_table(reports: Sequence[VerifyReport]) -> str:
    width = max((len(r.id) for r in reports), default=4)
    lines = [f"{'id':<{width}}  {'algebra':<16}  status"]
    for r in reports:
        lines.append(f"{r.id:<{width}}  {r.algebra:<16}  {r.status}")
    return "\n".join(lines)
