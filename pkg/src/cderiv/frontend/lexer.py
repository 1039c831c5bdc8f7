"""Tokenizer for ``.lcsa`` files."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, FrontendError, Span

KEYWORDS = {"algebra", "basis", "map", "cmap", "on", "task", "even", "odd"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(?:\#|//)[^\n]*)
  | (?P<arrow>->)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'.]*)
  | (?P<punct>[{}\[\](),;:=+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "keyword", "int", "punct", "eof"
    text: str
    span: Span

    def is_(self, text: str) -> bool:
        return self.kind in ("punct", "keyword") and self.text == text


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, line_start, pos = 1, 0, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise FrontendError([Diagnostic("error", Span(line, col), f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            toks.append(Token("keyword" if s in KEYWORDS else "ident", s, Span(line, col)))
        elif kind in ("int", "punct"):
            toks.append(Token(kind, s, Span(line, col)))
        elif kind == "arrow":
            toks.append(Token("punct", s, Span(line, col)))
        pos = m.end()
    toks.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return toks
