"""Hilbert series of graded interiors for a cyclic group of automorphisms.

The coefficient at ``t^k`` is the saturated Q(d)-rank of the interior piece
attached to ``sigma^k`` (summed over parities). Entries whose rank is still
moving at the end of the saturation scan are kept, flagged unsaturated, and
make every downstream verdict ``"inconclusive at bound"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .cend import GroupSpec, Morphism, matrix_order
from .gmod import Parity
from .lcsa import Algebra, AlgebraError
from .solver import DegreeBound, InteriorKind, solve_interior

INCONCLUSIVE = "inconclusive at bound"
NOT_PERIODIC = "no l0-periodicity detected"
RATIONAL = "rational"


class HilbertError(AlgebraError):
    pass


@dataclass(frozen=True)
class HilbertWindow:
    k_min: int
    k_max: int
    bound: DegreeBound = field(default_factory=DegreeBound.default)
    interior: InteriorKind = InteriorKind.MINUS

    def __post_init__(self):
        if not self.k_min <= 0 <= self.k_max:
            raise ValueError("window must satisfy k_min <= 0 <= k_max")
        object.__setattr__(self, "interior", InteriorKind(self.interior))

    def powers(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def __len__(self) -> int:
        return self.k_max - self.k_min + 1


@dataclass
class Coefficient:
    k: int
    rank: int
    saturated: bool
    parts: dict  # parity -> (rank, saturated)
    spaces: dict  # parity -> SolutionSpace at the final scan bound


@dataclass
class SeriesReport:
    algebra: str
    sigma: str
    window: HilbertWindow
    coefficients: dict  # k -> Coefficient
    order: int | None

    @property
    def saturated(self) -> bool:
        return all(c.saturated for c in self.coefficients.values())

    def ranks(self) -> dict:
        return {k: c.rank for k, c in sorted(self.coefficients.items())}

    @property
    def periodicity(self) -> int | None:
        """Smallest period of the coefficient sequence visible in the window."""
        ranks = self.ranks()
        ks = sorted(ranks)
        for p in range(1, len(ks) // 2 + 1):
            if all(ranks[k] == ranks[k + p] for k in ks if k + p in ranks):
                return p
        return None

    @property
    def polynomial(self) -> bool | None:
        """True when sigma has finite order and the coefficients fold mod it.

        ``None`` signals an inconclusive verdict (unsaturated entries).
        """
        if not self.saturated:
            return None
        if self.order is None:
            return False
        r = self.ranks()
        return all(r[k] == r[j] for k in r for j in r if (k - j) % self.order == 0)

    def folded(self) -> list[int] | None:
        """Coefficients of ``sum_{k<n} r_k t^k`` for finite order ``n``."""
        if not self.polynomial:
            return None
        r = self.ranks()
        out = []
        for i in range(self.order):
            k = next(k for k in r if (k - i) % self.order == 0)
            out.append(r[k])
        return out

    def verdict(self) -> str:
        if not self.saturated:
            return INCONCLUSIVE
        if self.polynomial:
            return "polynomial"
        return "not polynomial at window"

    def to_json(self) -> dict:
        w = self.window
        folded = self.folded()
        return {
            "algebra": self.algebra,
            "sigma": self.sigma,
            "window": {
                "k_min": w.k_min,
                "k_max": w.k_max,
                "bound": w.bound.as_list(),
                "interior": w.interior.value,
            },
            "coefficients": [
                {"k": c.k, "rank": c.rank, "saturated": c.saturated}
                for _, c in sorted(self.coefficients.items())
            ],
            "order": self.order if self.order is not None else "infinite at window",
            "periodicity": self.periodicity,
            "polynomial": self.polynomial,
            "verdict": self.verdict(),
            "closed_form": render_polynomial(folded) if folded is not None else None,
        }


def _parities(A: Algebra) -> list[Parity]:
    return [Parity.EVEN, Parity.ODD] if Parity.ODD in A.parities else [Parity.EVEN]


def series(
    A: Algebra,
    sigma: Morphism,
    w: HilbertWindow,
    scan_steps: int = 2,
    cache: bool = True,
) -> SeriesReport:
    """Coefficient table of the Hilbert series over the window.

    Powers with equal matrices share one solve when ``cache`` is set; with
    ``cache=False`` every power is solved afresh.
    """
    if not sigma.is_automorphism():
        raise HilbertError(f"{sigma.name or 'sigma'} is not an automorphism")
    if scan_steps < 2:
        raise ValueError("saturation needs at least two bounds")
    G = GroupSpec.cyclic(sigma)
    limit = max(len(w), 2)
    order = matrix_order(sigma, limit=limit)

    memo: dict = {}
    coeffs = {}
    for k in w.powers():
        key = sigma.power(k).matrix
        if cache and key in memo:
            parts, spaces = memo[key]
        else:
            parts, spaces = {}, {}
            for par in _parities(A):
                ranks = []
                space = None
                for s in range(scan_steps):
                    space = solve_interior(A, G, k, w.interior, w.bound.grow(s), par)
                    ranks.append(space.rank)
                sat = ranks[-1] == ranks[-2]
                space.saturated = sat
                parts[par] = (ranks[-1], sat)
                spaces[par] = space
            memo[key] = (parts, spaces)
        rank = sum(r for r, _ in parts.values())
        sat = all(s for _, s in parts.values())
        coeffs[k] = Coefficient(k, rank, sat, dict(parts), dict(spaces))
    return SeriesReport(A.name, sigma.name or "sigma", w, coeffs, order)


# ---------------------------------------------------------------------------
# rational closed form


def _term(c, e: int) -> str:
    c = Fraction(c)
    cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if e == 0:
        return cs
    mono = "t" if e == 1 else f"t^{e}" if e > 0 else f"t^({e})"
    return mono if c == 1 else f"{cs}*{mono}"


def _sum(terms: list[tuple]) -> str:
    parts = [_term(c, e) for c, e in terms if c != 0]
    if not parts:
        return "0"
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


def render_polynomial(coeffs: list) -> str:
    return _sum([(c, i) for i, c in enumerate(coeffs)])


@dataclass
class ClosedForm:
    """``t/(1-t^l) sum m_i t^i + 1/(1-t^-l) sum m_i t^-(l-1-i) + correction``."""

    l0: int
    m: list
    correction: dict = field(default_factory=dict)  # k -> coefficient

    def render(self) -> str:
        l = self.l0
        pos = _sum([(c, i) for i, c in enumerate(self.m)])
        neg = _sum([(c, -(l - 1 - i)) for i, c in enumerate(self.m)])
        den_p = "1 - t" if l == 1 else f"1 - t^{l}"
        den_n = f"1 - t^({-l})"
        out = f"t*({pos})/({den_p}) + ({neg})/({den_n})"
        if any(self.correction.values()):
            out += " + (" + _sum(sorted(((c, k) for k, c in self.correction.items()), key=lambda ce: ce[1])) + ")"
        return out

    def expand(self, k_min: int, k_max: int) -> dict:
        """Formal Laurent expansion: the first summand in positive powers of
        ``t``, the second in powers of ``1/t``."""
        l = self.l0
        out = {k: Fraction(0) for k in range(k_min, k_max + 1)}
        # t * sum_i m_i t^i * sum_j t^(j l)
        for i, c in enumerate(self.m):
            e = 1 + i
            while e <= k_max:
                if e >= k_min:
                    out[e] += c
                e += l
        # sum_i m_i u^(l-1-i) * sum_j u^(j l), u = 1/t
        for i, c in enumerate(self.m):
            e = -(l - 1 - i)
            while e >= k_min:
                if e <= k_max:
                    out[e] += c
                e -= l
        for k, c in self.correction.items():
            if k_min <= k <= k_max:
                out[k] += c
        return out


@dataclass
class RationalityVerdict:
    verdict: str
    l0: int
    closed_form: ClosedForm | None = None
    reexpansion_matches: bool | None = None
    mismatches: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "l0": self.l0,
            "closed_form": self.closed_form.render() if self.closed_form else None,
            "reexpansion_matches": self.reexpansion_matches,
            "mismatches": self.mismatches,
        }


def rationality_probe(report: SeriesReport | dict, l0: int, exceptions: Iterable[int] = ()) -> RationalityVerdict:
    """Test l0-periodicity outside ``exceptions`` and emit the closed form.

    ``report`` may also be a plain ``{k: rank}`` mapping (treated as saturated).
    """
    if l0 < 1:
        raise ValueError("l0 must be positive")
    if isinstance(report, SeriesReport):
        if not report.saturated:
            return RationalityVerdict(INCONCLUSIVE, l0)
        ranks = report.ranks()
    else:
        ranks = dict(report)
    exc = set(exceptions)
    ks = sorted(ranks)
    if not ks or ks[-1] - ks[0] + 1 < 2 * l0:
        raise HilbertError(f"window of length {len(ks)} is too short for two periods of length {l0}")

    clean = [k for k in ks if k not in exc]
    for k in clean:
        if k + l0 in ranks and k + l0 not in exc and ranks[k] != ranks[k + l0]:
            return RationalityVerdict(NOT_PERIODIC, l0)

    # coefficient at t^k is m_{(k-1) mod l0}
    m: list = [None] * l0
    for k in clean:
        i = (k - 1) % l0
        if m[i] is None:
            m[i] = Fraction(ranks[k])
    if any(v is None for v in m):
        raise HilbertError("some residue class mod l0 has no non-exceptional coefficient")
    correction = {k: Fraction(ranks[k]) - m[(k - 1) % l0] for k in sorted(exc) if k in ranks}
    cf = ClosedForm(l0, m, {k: c for k, c in correction.items() if c})
    expanded = cf.expand(ks[0], ks[-1])
    bad = [k for k in ks if expanded[k] != ranks[k]]
    return RationalityVerdict(RATIONAL if not bad else NOT_PERIODIC, l0, cf, not bad, bad)
