"""Recursive-descent parser producing :mod:`cderiv.frontend.ast` trees."""

from __future__ import annotations

from fractions import Fraction

from .ast import (
    AlgebraDecl,
    Atom,
    BasisDecl,
    BracketDecl,
    Group,
    Image,
    MapDecl,
    ModExpr,
    ModTerm,
    PolyExpr,
    PolyTerm,
    SourceFile,
    TaskDecl,
    TaskEntry,
)
from .diagnostics import Diagnostic, FrontendError, Span
from .lexer import Token, tokenize

RESERVED = {"d", "x"}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.diags: list[Diagnostic] = []

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of file" if tok.kind == "eof" else repr(tok.text)
        raise FrontendError(self.diags + [Diagnostic("error", tok.span, f"{msg}, found {found}")])

    def expect(self, text: str) -> Token:
        if not self.tok.is_(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.tok.is_(text):
            self.advance()
            return True
        return False

    def ident(self, what: str, allow_reserved: bool = False) -> Token:
        t = self.tok
        if t.kind != "ident":
            self.fail(f"expected {what}")
        if not allow_reserved and t.text in RESERVED:
            self.fail(f"{t.text!r} is reserved for the variables d and x; expected {what}")
        return self.advance()

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail("expected an integer")
        return int(self.advance().text)

    # -- items ---------------------------------------------------------------
    def file(self) -> SourceFile:
        items = []
        while self.tok.kind != "eof":
            if self.tok.is_("algebra"):
                items.append(self.algebra())
            elif self.tok.is_("map") or self.tok.is_("cmap"):
                items.append(self.map_decl())
            elif self.tok.is_("task"):
                items.append(self.task())
            else:
                self.fail("expected 'algebra', 'map', 'cmap' or 'task'")
        if self.diags:
            raise FrontendError(self.diags)
        return SourceFile(tuple(items))

    def algebra(self) -> AlgebraDecl:
        start = self.expect("algebra").span
        name = self.ident("an algebra name").text
        self.expect("{")
        basis = self.basis()
        brackets = []
        while self.tok.is_("["):
            brackets.append(self.bracket())
        self.expect("}")
        return AlgebraDecl(name, tuple(basis), tuple(brackets), start)

    def parity(self) -> str:
        if self.tok.is_("even") or self.tok.is_("odd"):
            return self.advance().text
        self.fail("expected a parity ('even' or 'odd')")

    def basis(self) -> list[BasisDecl]:
        self.expect("basis")
        out: list[BasisDecl] = []
        seen: dict[str, Span] = {}
        while True:
            t = self.ident("a basis name")
            self.expect(":")
            par = self.parity()
            if t.text in seen:
                self.diags.append(
                    Diagnostic("error", t.span, f"duplicate basis name {t.text!r} (first declared at {seen[t.text]})")
                )
            seen.setdefault(t.text, t.span)
            out.append(BasisDecl(t.text, par, t.span))
            if not self.accept(","):
                break
        self.expect(";")
        return out

    def bracket(self) -> BracketDecl:
        start = self.expect("[").span
        a = self.ident("a basis name").text
        self.expect(",")
        b = self.ident("a basis name").text
        self.expect("]")
        self.expect("=")
        rhs = self.mod_expr()
        self.expect(";")
        return BracketDecl(a, b, rhs, start)

    def map_decl(self) -> MapDecl:
        start = self.tok.span
        conformal = self.advance().text == "cmap"
        name = self.ident("a map name").text
        self.expect("on")
        alg = self.ident("an algebra name").text
        parity = None
        if conformal:
            self.expect(":")
            parity = self.parity()
        self.expect("{")
        images = []
        while not self.tok.is_("}"):
            t = self.ident("a basis name")
            self.expect("->")
            e = self.mod_expr()
            self.expect(";")
            images.append(Image(t.text, e, t.span))
        if not images:
            self.fail("a map needs at least one image")
        self.expect("}")
        return MapDecl(name, alg, tuple(images), conformal, parity, start)

    def task(self) -> TaskDecl:
        start = self.expect("task").span
        name = self.ident("a task name").text
        self.expect("{")
        entries = []
        while not self.tok.is_("}"):
            key = self.tok
            if key.kind not in ("ident", "keyword"):
                self.fail("expected a task key")
            self.advance()
            self.expect(":")
            values = [self.task_value()]
            while self.accept(","):
                values.append(self.task_value())
            self.expect(";")
            entries.append(TaskEntry(key.text, tuple(values), key.span))
        self.expect("}")
        return TaskDecl(name, tuple(entries), start)

    def task_value(self) -> str:
        t = self.tok
        if t.kind in ("ident", "keyword"):
            return self.advance().text
        neg = self.accept("-")
        if neg and self.tok.kind == "ident":
            return "-" + self.advance().text
        if self.tok.kind != "int":
            self.fail("expected a name or a number")
        s = self.advance().text
        if self.accept("/"):
            s += "/" + str(self.integer())
        return "-" + s if neg else s

    # -- expressions -------------------------------------------------------
    def coeff(self) -> Fraction | None:
        if self.tok.kind != "int":
            return None
        p = int(self.advance().text)
        if self.accept("/"):
            q = self.integer()
            if q == 0:
                self.fail("zero denominator", self.toks[self.i - 1])
            return Fraction(p, q)
        return Fraction(p)

    def power(self) -> int:
        if self.accept("^"):
            return self.integer()
        return 1

    def factors(self) -> list:
        out = []
        while True:
            t = self.tok
            if t.kind == "ident" and t.text in RESERVED:
                self.advance()
                out.append(Atom(t.text, self.power(), t.span))
            elif t.is_("("):
                self.advance()
                inner = self.poly_expr()
                self.expect(")")
                out.append(Group(inner, self.power(), t.span))
            else:
                return out
            self.accept("*")

    def signs(self, first: bool) -> int:
        if self.accept("-"):
            return -1
        if self.accept("+") or first:
            return 1
        return 0

    def poly_expr(self) -> PolyExpr:
        start = self.tok.span
        terms = []
        sign = self.signs(True)
        while True:
            span = self.tok.span
            c = self.coeff()
            if c is not None:
                self.accept("*")
            fs = self.factors()
            if c is None and not fs:
                self.fail("expected a polynomial term")
            terms.append(PolyTerm(sign, c, tuple(fs), span))
            sign = self.signs(False)
            if not sign:
                return PolyExpr(tuple(terms), start)

    def mod_expr(self) -> ModExpr:
        start = self.tok.span
        if self.tok.kind == "int" and self.tok.text == "0" and self.peek().is_(";"):
            self.advance()
            return ModExpr((), start)
        terms = []
        sign = self.signs(True)
        while True:
            span = self.tok.span
            c = self.coeff()
            if c is not None:
                self.accept("*")
            fs = self.factors()
            name = self.ident("a basis name")
            terms.append(ModTerm(sign, c, tuple(fs), name.text, span))
            sign = self.signs(False)
            if not sign:
                return ModExpr(tuple(terms), start)


def parse(text: str) -> SourceFile:
    """Parse a whole file; raises :class:`FrontendError` with spans."""
    return _Parser(text).file()
