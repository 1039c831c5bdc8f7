from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    span: Span
    message: str
    witness: str | None = None

    def render(self, filename: str = "<input>") -> str:
        out = f"{filename}:{self.span}: {self.severity}: {self.message}"
        if self.witness:
            out += f" [witness: {self.witness}]"
        return out

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "line": self.span.line,
            "col": self.span.col,
            "message": self.message,
            "witness": self.witness,
        }


class FrontendError(Exception):
    """Raised with one or more diagnostics; every diagnostic carries a span."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.render() for d in self.diagnostics))
