"""Semantic analysis: syntax trees to algebras, morphisms and tasks."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..cend import ConfMap, Morphism
from ..gmod import Basis, Parity
from ..lcsa import Algebra, AlgebraError
from ..poly import ZERO, D, X, MPoly
from .ast import AlgebraDecl, Atom, MapDecl, ModExpr, PolyExpr, SourceFile, TaskDecl
from .diagnostics import Diagnostic, FrontendError, Span
from .parser import parse

TASK_KEYS = {
    "command",
    "algebra",
    "kind",
    "parity",
    "dp",
    "dl",
    "sigma",
    "tau",
    "abg",
    "prop",
    "window",
    "interior",
    "power",
    "l0",
    "alpha",
    "delta",
    "strict",
}
COMMANDS = {"check", "solve", "solve-gder", "solve_gder", "interior", "hilbert", "verify"}


@dataclass
class Task:
    name: str
    options: dict  # key -> tuple of strings
    span: Span


@dataclass
class Program:
    algebras: dict = field(default_factory=dict)  # name -> Algebra
    maps: dict = field(default_factory=dict)  # name -> Morphism | ConfMap
    tasks: list = field(default_factory=list)
    spans: dict = field(default_factory=dict)  # name -> Span of the declaration

    def maps_on(self, algebra_name: str) -> list:
        return [m for m in self.maps.values() if m.algebra.name == algebra_name]


def _poly(e: PolyExpr) -> MPoly:
    total = ZERO
    for t in e.terms:
        p = MPoly.const(t.sign * (t.coeff if t.coeff is not None else 1))
        for f in t.factors:
            base = (D if f.var == "d" else X) if isinstance(f, Atom) else _poly(f.expr)
            p = p * base**f.power
        total = total + p
    return total


def _uses_x(e) -> Span | None:
    """Span of the first ``x`` inside an expression, if any."""
    for t in e.terms:
        for f in t.factors:
            if isinstance(f, Atom):
                if f.var == "x" and f.power > 0:
                    return f.span
            else:
                s = _uses_x(f.expr)
                if s is not None:
                    return s
    return None


class _Elaborator:
    def __init__(self):
        self.diags: list[Diagnostic] = []
        self.prog = Program()

    def error(self, span: Span, msg: str, witness: str | None = None):
        self.diags.append(Diagnostic("error", span, msg, witness))

    def vector(self, basis: Basis, e: ModExpr, want: Parity | None, context: str):
        vec = [ZERO] * basis.rank
        ok = True
        for t in e.terms:
            if t.name not in basis.names:
                self.error(t.span, f"unknown basis name {t.name!r} in {context}")
                ok = False
                continue
            k = basis.index(t.name)
            if want is not None and basis.parities[k] != want:
                self.error(
                    t.span,
                    f"grading violation (C2): {context} may only involve {want} generators, "
                    f"but {t.name} is {basis.parities[k]}",
                )
                ok = False
                continue
            coeff = MPoly.const(t.sign * (t.coeff if t.coeff is not None else 1))
            for f in t.factors:
                base = (D if f.var == "d" else X) if isinstance(f, Atom) else _poly(f.expr)
                coeff = coeff * base**f.power
            vec[k] = vec[k] + coeff
        return vec if ok else None

    def algebra(self, a: AlgebraDecl):
        if a.name in self.prog.algebras:
            self.error(a.span, f"algebra {a.name!r} declared twice")
            return
        names = tuple(b.name for b in a.basis)
        if len(set(names)) != len(names):
            seen = set()
            for b in a.basis:
                if b.name in seen:
                    self.error(b.span, f"duplicate basis name {b.name!r}")
                seen.add(b.name)
            return
        basis = Basis(names, tuple(Parity.parse(b.parity) for b in a.basis))
        table = {}
        before = len(self.diags)
        for br in a.brackets:
            for side in (br.left, br.right):
                if side not in names:
                    self.error(br.span, f"unknown basis name {side!r} in bracket [{br.left}, {br.right}]")
            if br.left not in names or br.right not in names:
                continue
            i, j = basis.index(br.left), basis.index(br.right)
            if i > j:
                self.error(
                    br.span,
                    f"bracket [{br.left}, {br.right}]: declare the (i,j) pair with i ≤ j; "
                    "the reverse is derived by skew-supersymmetry",
                )
                continue
            if (i, j) in table:
                self.error(br.span, f"bracket [{br.left}, {br.right}] declared twice")
                continue
            want = basis.parities[i] + basis.parities[j]
            vec = self.vector(basis, br.rhs, want, f"[{br.left}, {br.right}]")
            if vec is not None:
                table[(i, j)] = vec
        if len(self.diags) > before:
            return
        try:
            A = Algebra(basis, table, a.name)
        except AlgebraError as exc:  # defensive: the checks above should cover this
            self.error(a.span, str(exc))
            return
        self.prog.algebras[a.name] = A
        self.prog.spans[a.name] = a.span

    def map(self, m: MapDecl):
        if m.name in self.prog.maps:
            self.error(m.span, f"map {m.name!r} declared twice")
            return
        A = self.prog.algebras.get(m.algebra)
        if A is None:
            self.error(m.span, f"map {m.name!r} refers to unknown algebra {m.algebra!r}")
            return
        basis = A.basis
        par = Parity.parse(m.parity) if m.conformal else Parity.EVEN
        cols: dict[int, list] = {}
        ok = True
        for im in m.images:
            if im.source not in basis.names:
                self.error(im.span, f"unknown basis name {im.source!r} in map {m.name!r}")
                ok = False
                continue
            j = basis.index(im.source)
            if j in cols:
                self.error(im.span, f"image of {im.source!r} given twice in map {m.name!r}")
                ok = False
                continue
            if not m.conformal:
                xs = _uses_x(im.expr)
                if xs is not None:
                    self.error(xs, f"morphism {m.name!r} must be free of the spectral variable x")
                    ok = False
                    continue
            vec = self.vector(basis, im.expr, basis.parities[j] + par, f"the image of {im.source} under {m.name}")
            if vec is None:
                ok = False
                continue
            cols[j] = vec
        missing = [basis.names[j] for j in range(basis.rank) if j not in cols]
        if ok and missing:
            self.error(m.span, f"map {m.name!r} leaves {', '.join(missing)} without an image")
            ok = False
        if not ok:
            return
        matrix = [[cols[j][i] for j in range(basis.rank)] for i in range(basis.rank)]
        try:
            f = ConfMap(A, par, matrix) if m.conformal else Morphism(A, matrix, m.name)
        except AlgebraError as exc:
            self.error(m.span, str(exc))
            return
        self.prog.maps[m.name] = f
        self.prog.spans[m.name] = m.span

    def task(self, t: TaskDecl):
        if any(x.name == t.name for x in self.prog.tasks):
            self.error(t.span, f"task {t.name!r} declared twice")
            return
        opts = {}
        for e in t.entries:
            if e.key not in TASK_KEYS:
                self.error(e.span, f"unknown task key {e.key!r}")
                continue
            if e.key in opts:
                self.error(e.span, f"task key {e.key!r} given twice")
                continue
            opts[e.key] = e.values
            if e.key == "algebra" and e.values[0] not in self.prog.algebras:
                self.error(e.span, f"task {t.name!r} refers to unknown algebra {e.values[0]!r}")
            if e.key in ("sigma", "tau"):
                v = e.values[0]
                if v not in ("id", "-id") and v not in self.prog.maps:
                    self.error(e.span, f"task {t.name!r} refers to unknown map {v!r}")
            if e.key == "command" and e.values[0] not in COMMANDS:
                self.error(e.span, f"unknown command {e.values[0]!r}")
        self.prog.tasks.append(Task(t.name, opts, t.span))

    def run(self, f: SourceFile) -> Program:
        for item in f.items:
            if isinstance(item, AlgebraDecl):
                self.algebra(item)
            elif isinstance(item, MapDecl):
                self.map(item)
            else:
                self.task(item)
        if self.diags:
            raise FrontendError(self.diags)
        return self.prog


def elaborate(f: SourceFile) -> Program:
    return _Elaborator().run(f)


def load(text: str) -> Program:
    return elaborate(parse(text))


__all__ = ["Program", "Task", "elaborate", "load"]
