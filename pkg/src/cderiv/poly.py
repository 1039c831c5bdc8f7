"""Exact sparse polynomials over Q in d (the translation operator) and three
spectral variables x, y, z.

Everything downstream (brackets, conformal maps, derivation residuals) is a
polynomial in these four variables, so this module owns the arithmetic and
the substitution calculus.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

from ._backend import add_terms, mul_terms


class Var(IntEnum):
    PARTIAL = 0
    X0 = 1
    X1 = 2
    X2 = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = ("d", "x", "y", "z")
SPECTRAL = (Var.X0, Var.X1, Var.X2)

_BITS = 16
_MASK = (1 << _BITS) - 1
_SHIFT = {Var.PARTIAL: 3 * _BITS, Var.X0: 2 * _BITS, Var.X1: _BITS, Var.X2: 0}


def pack(exps: Iterable[int]) -> int:
    e = tuple(exps)
    if len(e) != 4 or any(v < 0 or v > _MASK for v in e):
        raise ValueError(f"bad exponent tuple {e!r}")
    return (e[0] << 48) | (e[1] << 32) | (e[2] << 16) | e[3]


def unpack(key: int) -> tuple[int, int, int, int]:
    return ((key >> 48) & _MASK, (key >> 32) & _MASK, (key >> 16) & _MASK, key & _MASK)


def _exp(key: int, v: Var) -> int:
    return (key >> _SHIFT[v]) & _MASK


Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class MPoly:
    """Immutable polynomial in Q[d, x, y, z] stored as a canonical term map.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        self._terms: dict[int, Fraction] = dict(terms) if terms else {}
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict) -> "MPoly":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "MPoly":
        c = _as_fraction(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def var(cls, v: Var, power: int = 1) -> "MPoly":
        e = [0, 0, 0, 0]
        e[int(v)] = power
        return cls._raw({pack(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1) -> "MPoly":
        c = _as_fraction(coeff)
        return cls._raw({pack(exps): c} if c else {})

    @classmethod
    def from_dict(cls, terms: Mapping[tuple[int, int, int, int], object]) -> "MPoly":
        out: dict[int, Fraction] = {}
        for e, c in terms.items():
            k = pack(e)
            v = out.get(k, Fraction(0)) + _as_fraction(c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return cls._raw(out)

    @staticmethod
    def coerce(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        return MPoly.const(x)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int, int, int], Fraction]:
        return {unpack(k): c for k, c in self._terms.items()}

    def items(self) -> Iterator[tuple[int, Fraction]]:
        """Packed-key term iterator (internal hot paths)."""
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(0, Fraction(0))

    def variables(self) -> set[Var]:
        out = set()
        for k in self._terms:
            for v in Var:
                if _exp(k, v):
                    out.add(v)
        return out

    def involves(self, v: Var) -> bool:
        s = _SHIFT[v]
        return any((k >> s) & _MASK for k in self._terms)

    def degree_in(self, v: Var) -> int:
        if not self._terms:
            return -1
        s = _SHIFT[v]
        return max((k >> s) & _MASK for k in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(unpack(k)) for k in self._terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "MPoly":
        other = MPoly.coerce(other)
        return MPoly._raw(add_terms(self._terms, other._terms))

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "MPoly":
        other = MPoly.coerce(other)
        return MPoly._raw(add_terms(self._terms, other._terms, -1))

    def __rsub__(self, other) -> "MPoly":
        return MPoly.coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if not self._terms or not other._terms:
                return ZERO
            return MPoly._raw(mul_terms(self._terms, other._terms))
        c = _as_fraction(other)
        if not c:
            return ZERO
        return MPoly._raw({k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MPoly":
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return MPoly._raw({k: v / c for k, v in self._terms.items()})

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == MPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution -----------------------------------------------------
    def subs(self, mapping: Mapping[Var, object]) -> "MPoly":
        """Simultaneous substitution ``v -> mapping[v]``; other variables stay."""
        images = {v: MPoly.coerce(r) for v, r in mapping.items()}
        images = {v: r for v, r in images.items() if r != MPoly.var(v)}
        if not images or not self._terms:
            return self
        kept_mask = 0
        for v in Var:
            if v not in images:
                kept_mask |= _MASK << _SHIFT[v]
        powers: dict[tuple[Var, int], MPoly] = {}

        def power(v, e):
            key = (v, e)
            p = powers.get(key)
            if p is None:
                p = images[v] ** e
                powers[key] = p
            return p

        # group terms by their substituted-variable exponents
        groups: dict[tuple[int, ...], dict[int, Fraction]] = {}
        order = tuple(images)
        for k, c in self._terms.items():
            sig = tuple(_exp(k, v) for v in order)
            groups.setdefault(sig, {})[k & kept_mask] = c
        out: dict[int, Fraction] = {}
        for sig, rest in groups.items():
            factor = ONE
            for v, e in zip(order, sig):
                if e:
                    factor = factor * power(v, e)
            if factor.is_zero():
                continue
            out = add_terms(out, mul_terms(rest, factor._terms))
        return MPoly._raw(out)

    def substitute(self, v: Var, r) -> "MPoly":
        return self.subs({v: r})

    def coefficient_of(self, v: Var, k: int) -> "MPoly":
        s = _SHIFT[v]
        strip = ~(_MASK << s)
        out = {}
        for key, c in self._terms.items():
            if (key >> s) & _MASK == k:
                out[key & strip] = c
        return MPoly._raw(out)

    def coefficients(self, v: Var) -> dict[int, "MPoly"]:
        """All nonzero coefficients in powers of ``v``."""
        s = _SHIFT[v]
        strip = ~(_MASK << s)
        out: dict[int, dict] = {}
        for key, c in self._terms.items():
            out.setdefault((key >> s) & _MASK, {})[key & strip] = c
        return {e: MPoly._raw(t) for e, t in sorted(out.items())}

    def evaluate(self, values: Mapping[Var, object]) -> "MPoly":
        return self.subs({v: MPoly.const(c) for v, c in values.items()})

    def denominator_lcm(self) -> int:
        from math import lcm

        out = 1
        for c in self._terms.values():
            out = lcm(out, c.denominator)
        return out

    # -- rendering --------------------------------------------------------
    def sorted_keys(self) -> list[int]:
        return sorted(self._terms, key=lambda k: (-sum(unpack(k)), -k))

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"MPoly({render(self)!r})"


def _render_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _render_monomial(key: int) -> str:
    parts = []
    for v, e in zip(Var, unpack(key)):
        if e == 1:
            parts.append(v.symbol)
        elif e > 1:
            parts.append(f"{v.symbol}^{e}")
    return "*".join(parts)


def render(p: MPoly) -> str:
    """Deterministic text form: graded lex order, ``d x y z``, rationals p/q."""
    if p.is_zero():
        return "0"
    out = []
    for n, k in enumerate(p.sorted_keys()):
        c = p._terms[k]
        neg = c < 0
        a = -c if neg else c
        mono = _render_monomial(k)
        if not mono:
            body = _render_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_render_coeff(a)}*{mono}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


ZERO = MPoly()
ONE = MPoly.const(1)
D = MPoly.var(Var.PARTIAL)
X = MPoly.var(Var.X0)
Y = MPoly.var(Var.X1)
Z = MPoly.var(Var.X2)


def add(p: MPoly, q: MPoly) -> MPoly:
    return p + q


def mul(p: MPoly, q: MPoly) -> MPoly:
    return p * q


def substitute(p: MPoly, v: Var, r) -> MPoly:
    return p.substitute(v, r)


def coefficient_of(p: MPoly, v: Var, k: int) -> MPoly:
    return p.coefficient_of(v, k)


def degree_in(p: MPoly, v: Var) -> int:
    return p.degree_in(v)


def univariate_divmod(p: MPoly, q: MPoly, v: Var) -> tuple[MPoly, MPoly]:
    """Polynomial long division in Q[v]; both inputs must involve only ``v``."""
    for f in (p, q):
        if f.variables() - {v}:
            raise ValueError("univariate_divmod needs polynomials in a single variable")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    dq = q.degree_in(v)
    lead = q.coefficient_of(v, dq).constant_value()
    quot = ZERO
    rem = p
    while not rem.is_zero() and rem.degree_in(v) >= dq:
        dr = rem.degree_in(v)
        c = rem.coefficient_of(v, dr).constant_value() / lead
        t = MPoly.var(v, dr - dq) * c
        quot = quot + t
        rem = rem - t * q
    return quot, rem
