"""Syntax tree of the declaration language. Spans never take part in equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diagnostics import Span

_NOSPAN = Span(0, 0)


def _span():
    return field(default=_NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Atom:
    var: str  # "d" or "x"
    power: int = 1
    span: Span = _span()


@dataclass(frozen=True)
class Group:
    expr: "PolyExpr"
    power: int = 1
    span: Span = _span()


@dataclass(frozen=True)
class PolyTerm:
    sign: int
    coeff: Fraction | None
    factors: tuple = ()
    span: Span = _span()


@dataclass(frozen=True)
class PolyExpr:
    terms: tuple  # of PolyTerm
    span: Span = _span()


@dataclass(frozen=True)
class ModTerm:
    sign: int
    coeff: Fraction | None
    factors: tuple  # Atom | Group
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class ModExpr:
    terms: tuple  # of ModTerm; empty means the literal 0
    span: Span = _span()


@dataclass(frozen=True)
class BasisDecl:
    name: str
    parity: str
    span: Span = _span()


@dataclass(frozen=True)
class BracketDecl:
    left: str
    right: str
    rhs: ModExpr
    span: Span = _span()


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    basis: tuple  # of BasisDecl
    brackets: tuple  # of BracketDecl
    span: Span = _span()


@dataclass(frozen=True)
class Image:
    source: str
    expr: ModExpr
    span: Span = _span()


@dataclass(frozen=True)
class MapDecl:
    name: str
    algebra: str
    images: tuple  # of Image
    conformal: bool = False
    parity: str | None = None
    span: Span = _span()


@dataclass(frozen=True)
class TaskEntry:
    key: str
    values: tuple  # of str (identifiers or signed rationals)
    span: Span = _span()


@dataclass(frozen=True)
class TaskDecl:
    name: str
    entries: tuple  # of TaskEntry
    span: Span = _span()


@dataclass(frozen=True)
class SourceFile:
    items: tuple = ()

    def algebras(self) -> list[AlgebraDecl]:
        return [i for i in self.items if isinstance(i, AlgebraDecl)]

    def maps(self) -> list[MapDecl]:
        return [i for i in self.items if isinstance(i, MapDecl)]

    def tasks(self) -> list[TaskDecl]:
        return [i for i in self.items if isinstance(i, TaskDecl)]
