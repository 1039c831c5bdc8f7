"""Pretty printer; ``parse(print_file(ast)) == ast`` for every parsed tree."""

from __future__ import annotations

from fractions import Fraction

from .ast import AlgebraDecl, Atom, MapDecl, ModExpr, PolyExpr, SourceFile, TaskDecl


def _coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _factor(f) -> str:
    if isinstance(f, Atom):
        base = f.var
    else:
        base = f"({print_poly(f.expr)})"
    return base if f.power == 1 else f"{base}^{f.power}"


def _term_body(coeff, factors, name=None) -> str:
    parts = []
    if coeff is not None:
        parts.append(_coeff(coeff))
    parts.extend(_factor(f) for f in factors)
    if name is not None:
        parts.append(name)
    return " ".join(parts)


def _join(terms, body) -> str:
    out = ""
    for n, t in enumerate(terms):
        s = body(t)
        if n == 0:
            out = ("-" if t.sign < 0 else "") + s
        else:
            out += (" - " if t.sign < 0 else " + ") + s
    return out


def print_poly(e: PolyExpr) -> str:
    return _join(e.terms, lambda t: _term_body(t.coeff, t.factors))


def print_mod(e: ModExpr) -> str:
    if not e.terms:
        return "0"
    return _join(e.terms, lambda t: _term_body(t.coeff, t.factors, t.name))


def _print_algebra(a: AlgebraDecl) -> list[str]:
    lines = [f"algebra {a.name} {{"]
    lines.append("  basis " + ", ".join(f"{b.name}: {b.parity}" for b in a.basis) + ";")
    for br in a.brackets:
        lines.append(f"  [{br.left}, {br.right}] = {print_mod(br.rhs)};")
    lines.append("}")
    return lines


def _print_map(m: MapDecl) -> list[str]:
    head = f"cmap {m.name} on {m.algebra} : {m.parity}" if m.conformal else f"map {m.name} on {m.algebra}"
    lines = [head + " {"]
    lines.extend(f"  {im.source} -> {print_mod(im.expr)};" for im in m.images)
    lines.append("}")
    return lines


def _print_task(t: TaskDecl) -> list[str]:
    lines = [f"task {t.name} {{"]
    lines.extend(f"  {e.key}: {', '.join(e.values)};" for e in t.entries)
    lines.append("}")
    return lines


def print_file(f: SourceFile) -> str:
    blocks = []
    for item in f.items:
        if isinstance(item, AlgebraDecl):
            blocks.append(_print_algebra(item))
        elif isinstance(item, MapDecl):
            blocks.append(_print_map(item))
        else:
            blocks.append(_print_task(item))
    return "\n\n".join("\n".join(b) for b in blocks) + ("\n" if blocks else "")
