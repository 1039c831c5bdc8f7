"""Command-line driver.

Exit codes: 0 when every check passes (or a hypothesis is unmet), 1 when a
check fails, 2 for usage, input and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from typing import TextIO

from .. import hilbert as hb
from .. import verify as vf
from ..cend import GroupSpec, Morphism, cartan_involution, diagonal, swap
from ..gmod import Parity
from ..lcsa import Algebra, AlgebraError, builtin
from ..solver import DegreeBound, EquationKind, InteriorKind, Kind, SolverError, solve, solve_interior
from .diagnostics import FrontendError
from .elaborate import Program, Task, load

SOLVE_KINDS = ("der", "sigma_tau", "abg", "gder", "qder", "centroid", "qcentroid", "zder")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def builtin_program(name: str) -> Program:
    """A program holding one built-in algebra and its standard morphisms."""
    A = builtin(name)
    prog = Program(algebras={A.name: A})
    if A.basis.names == ("e", "h", "f"):
        prog.maps["invol"] = cartan_involution(A)
    elif A.name.startswith("abelian") and A.rank >= 2 and A.parities[0] == A.parities[1]:
        prog.maps["swap"] = swap(A, 0, 1)
        prog.maps["diag12"] = diagonal(A, [1, 2] + [1] * (A.rank - 2), "diag12")
    elif A.name == "heisenberg_pair":
        prog.maps["flip"] = diagonal(A, [1, -1], "flip")
    return prog


def corpus_path(name: str):
    return resources.files("cderiv") / "corpus" / f"{name}.lcsa"


def load_program(path: str) -> tuple[Program, str]:
    if path.startswith("builtin:"):
        try:
            return builtin_program(path[len("builtin:") :]), path
        except AlgebraError as exc:
            raise UsageError(str(exc)) from None
    if path.startswith("corpus:"):
        src = corpus_path(path[len("corpus:") :])
        if not src.is_file():
            raise UsageError(f"no corpus file named {path[len('corpus:'):]!r}")
        return load(src.read_text(encoding="utf-8")), path
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load(text), path


def pick_algebra(prog: Program, name: str | None) -> Algebra:
    if name:
        if name not in prog.algebras:
            raise UsageError(f"no algebra named {name!r}; declared: {', '.join(prog.algebras) or 'none'}")
        return prog.algebras[name]
    if not prog.algebras:
        raise UsageError("the input declares no algebra")
    return next(iter(prog.algebras.values()))


def resolve_morphism(spec: str | None, A: Algebra, prog: Program, default=None) -> Morphism:
    if spec is None:
        return default if default is not None else Morphism.identity(A)
    if spec == "id":
        return Morphism.identity(A)
    if spec == "-id":
        return Morphism.scalar(A, -1)
    if spec.startswith("scalar:"):
        try:
            return Morphism.scalar(A, Fraction(spec[len("scalar:") :]))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad scalar {spec!r}") from None
    m = prog.maps.get(spec)
    if not isinstance(m, Morphism) or m.algebra is not A:
        raise UsageError(f"no morphism named {spec!r} on {A.name}")
    return m


def default_sigma(A: Algebra, prog: Program) -> Morphism:
    for m in prog.maps.values():
        if isinstance(m, Morphism) and m.algebra is A:
            return m
    return vf.default_sigma(A)


def parse_triple(s: str) -> tuple:
    try:
        parts = tuple(Fraction(v) for v in s.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --abg value {s!r}") from None
    if len(parts) != 3:
        raise UsageError("--abg expects three comma-separated numbers")
    return parts


def parse_window(s: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in s.split(","))
    except ValueError:
        raise UsageError(f"bad --window value {s!r}; expected kmin,kmax") from None
    if not lo <= 0 <= hi:
        raise UsageError("--window needs kmin <= 0 <= kmax")
    return lo, hi


def bound_of(args) -> DegreeBound:
    base = DegreeBound.default()
    return DegreeBound(
        args.dp if args.dp is not None else base.d_partial,
        args.dl if args.dl is not None else base.d_lambda,
    )


def parities_of(args, A: Algebra) -> list[Parity]:
    if args.parity == "both":
        return [Parity.EVEN, Parity.ODD] if Parity.ODD in A.parities else [Parity.EVEN]
    return [Parity.parse(args.parity)]


# ---------------------------------------------------------------------------
# commands; each returns (exit code, JSON payload, text lines)


def cmd_check(args, prog: Program):
    names = [args.algebra] if args.algebra else list(prog.algebras)
    if not names:
        raise UsageError("the input declares no algebra")
    out, lines, code = {}, [], 0
    for name in names:
        A = pick_algebra(prog, name)
        rep = A.check_axioms()
        maps = {}
        for mname, m in prog.maps.items():
            if isinstance(m, Morphism) and m.algebra is A:
                ok, _ = m.check_homomorphism()
                maps[mname] = "homomorphism" if ok else "not a homomorphism"
        out[name] = {"axioms": rep.to_json(A.basis), "maps": maps}
        lines.append(f"{name}: {'PASS' if rep.passed else 'FAIL'}")
        for ax, idx, res in rep.violations:
            lines.append(f"  {ax} fails at {tuple(A.basis.names[i] for i in idx)}: residual {[str(c) for c in res]}")
        for mname, status in maps.items():
            lines.append(f"  map {mname}: {status}")
        if not rep.passed:
            code = 1
    return code, {"check": out}, lines


def _kind(args, A: Algebra, prog: Program, parity: Parity, kind: str) -> EquationKind:
    if kind == "der":
        return EquationKind.der(parity)
    if kind == "sigma_tau":
        sigma = resolve_morphism(args.sigma, A, prog, default_sigma(A, prog))
        tau = resolve_morphism(args.tau, A, prog)
        return EquationKind.sigma_tau(sigma, tau, parity, strict=args.strict_auto)
    if kind == "abg":
        if not args.abg:
            raise UsageError("--kind abg needs --abg a,b,g")
        return EquationKind.alpha_beta_gamma(*parse_triple(args.abg), parity)
    return EquationKind.simple(Kind(kind), parity)


def _space_json(space, joint: bool = False) -> dict:
    out = space.to_json()
    out["rank"] = space.rank
    if joint:
        out["joint_basis"] = [[f.render() for f in tup] for tup in space.joint_basis]
    return out


def _solve(args, prog: Program, kind: str):
    A = pick_algebra(prog, args.algebra)
    b = bound_of(args)
    spaces, lines, code = [], [], 0
    for par in parities_of(args, A):
        try:
            space = solve(A, _kind(args, A, prog, par, kind), b)
        except SolverError as exc:
            lines.append(f"error: {exc}")
            return 1, {"algebra": A.name, "error": str(exc)}, lines
        spaces.append(_space_json(space, joint=kind in ("gder", "qder")))
        lines.append(
            f"{A.name} {space.label or space.kind.label()} [{par}] bound {b.as_list()}: "
            f"dim_Q {space.dim_Q}, generators {space.rank}, residual check {space.residual_check}"
        )
        for f in space.basis:
            lines.append(f"  {f.render()}")
        if space.residual_check != "pass":
            code = 1
    return code, {"algebra": A.name, "spaces": spaces}, lines


def cmd_solve(args, prog):
    return _solve(args, prog, args.kind or "der")


def cmd_solve_gder(args, prog):
    kind = args.kind or "gder"
    if kind not in ("gder", "qder"):
        raise UsageError("solve-gder accepts --kind gder or qder")
    return _solve(args, prog, kind)


def cmd_interior(args, prog):
    A = pick_algebra(prog, args.algebra)
    sigma = resolve_morphism(args.sigma, A, prog, default_sigma(A, prog))
    b = bound_of(args)
    try:
        G = GroupSpec.cyclic(sigma)
    except AlgebraError as exc:
        return 1, {"algebra": A.name, "error": str(exc)}, [f"error: {exc}"]
    spaces, lines = [], []
    for par in parities_of(args, A):
        space = solve_interior(A, G, args.power, InteriorKind(args.interior), b, par)
        spaces.append(_space_json(space))
        lines.append(f"{A.name} {space.label} [{par}]: dim_Q {space.dim_Q}, generators {space.rank}")
    return 0, {"algebra": A.name, "spaces": spaces}, lines


def cmd_hilbert(args, prog):
    A = pick_algebra(prog, args.algebra)
    sigma = resolve_morphism(args.sigma, A, prog, default_sigma(A, prog))
    lo, hi = parse_window(args.window or "-3,3")
    w = hb.HilbertWindow(lo, hi, bound_of(args), InteriorKind(args.interior))
    try:
        rep = hb.series(A, sigma, w)
    except hb.HilbertError as exc:
        return 1, {"algebra": A.name, "error": str(exc)}, [f"error: {exc}"]
    payload = rep.to_json()
    lines = [f"{A.name} sigma={payload['sigma']} order={payload['order']} verdict={payload['verdict']}"]
    for c in payload["coefficients"]:
        lines.append(f"  k={c['k']:>3}  rank={c['rank']}{'' if c['saturated'] else '  (unsaturated)'}")
    if payload["closed_form"]:
        lines.append(f"  folded: {payload['closed_form']}")
    if args.l0:
        try:
            probe = hb.rationality_probe(rep, args.l0)
        except hb.HilbertError as exc:
            raise UsageError(str(exc)) from None
        payload["rationality"] = probe.to_json()
        lines.append(f"  l0={args.l0}: {probe.verdict}")
        if probe.closed_form:
            lines.append(f"  H(t) = {probe.closed_form.render()}")
    return 0, payload, lines


def _verify_reports(args, prog, A: Algebra, ids):
    sigma = resolve_morphism(args.sigma, A, prog, default_sigma(A, prog))
    tau = resolve_morphism(args.tau, A, prog, vf.default_tau(A))
    abg = parse_triple(args.abg) if args.abg else None
    alpha = Fraction(args.alpha) if args.alpha is not None else None
    delta = Fraction(args.delta) if args.delta is not None else None
    ctx = vf.Context(A, bound_of(args), strict=args.strict_auto)
    return [vf.run(pid, ctx, sigma, tau, abg, alpha, delta) for pid in ids]


def _prop_ids(args) -> list[str]:
    ids = args.prop or ["all"]
    if "all" in ids:
        return list(vf.PROPOSITIONS)
    unknown = [p for p in ids if p not in vf.PROPOSITIONS]
    if unknown:
        raise UsageError(f"unknown proposition(s) {', '.join(unknown)}; known: {', '.join(vf.PROPOSITIONS)}")
    return ids


def cmd_verify(args, prog):
    A = pick_algebra(prog, args.algebra)
    reports = _verify_reports(args, prog, A, _prop_ids(args))
    code = 1 if any(r.failed for r in reports) else 0
    return code, {"algebra": A.name, "reports": [r.to_json() for r in reports]}, vf.summary_table(reports).splitlines()


def task_argv(task: Task, path: str) -> list[str]:
    o = task.options
    cmd = o.get("command", ("solve",))[0].replace("_", "-")
    argv = [cmd]
    flags = {"kind", "parity", "dp", "dl", "sigma", "tau", "interior", "power", "l0", "alpha", "delta", "algebra"}
    for key, vals in o.items():
        if key in flags:
            argv.append(f"--{key}={vals[0]}")
        elif key == "abg":
            argv.append("--abg=" + ",".join(vals))
        elif key == "window":
            argv.append("--window=" + ",".join(vals))
        elif key == "prop":
            argv.extend(f"--prop={v}" for v in vals)
        elif key == "strict" and vals[0] in ("true", "yes", "1"):
            argv.append("--strict-auto")
    argv.append(path)
    return argv


def cmd_report(args, prog):
    names = [args.algebra] if args.algebra else list(prog.algebras)
    if not names:
        raise UsageError("the input declares no algebra")
    code, lines = 0, []
    c_code, c_payload, c_lines = cmd_check(args, prog)
    code = max(code, c_code)
    lines += c_lines
    algebras = {}
    for name in names:
        A = prog.algebras[name]
        entry = {"check": c_payload["check"][name]}
        if A.check_axioms().passed:
            reports = _verify_reports(args, prog, A, _prop_ids(args))
            entry["verify"] = [r.to_json() for r in reports]
            if any(r.failed for r in reports):
                code = 1
            lines += vf.summary_table(reports).splitlines()
        algebras[name] = entry
    tasks = {}
    parser = build_parser()
    for t in prog.tasks:
        targs = parser.parse_args(task_argv(t, args.file))
        if "algebra" not in t.options and args.algebra:
            targs.algebra = args.algebra
        t_code, t_payload, t_lines = COMMANDS[targs.command](targs, prog)
        tasks[t.name] = {"argv": task_argv(t, "<file>"), "exit": t_code, "result": t_payload}
        lines.append(f"task {t.name}: exit {t_code}")
        code = max(code, t_code)
    return code, {"algebras": algebras, "tasks": tasks}, lines


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "solve-gder": cmd_solve_gder,
    "interior": cmd_interior,
    "hilbert": cmd_hilbert,
    "verify": cmd_verify,
    "report": cmd_report,
}


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("file", help="a .lcsa file, builtin:NAME or corpus:NAME")
    common.add_argument("--algebra", help="algebra to use when the file declares several")
    common.add_argument("--dp", type=int, help="degree bound in d")
    common.add_argument("--dl", type=int, help="degree bound in the spectral variable")
    common.add_argument("--parity", choices=("even", "odd", "both"), default="even")
    common.add_argument("--sigma", help="morphism name, id, -id or scalar:p/q")
    common.add_argument("--tau", help="morphism name, id, -id or scalar:p/q")
    common.add_argument("--abg", help="alpha,beta,gamma")
    common.add_argument("--alpha", help="alpha for P4.11")
    common.add_argument("--delta", help="delta for P4.12")
    common.add_argument("--kind", choices=SOLVE_KINDS)
    common.add_argument("--prop", action="append", help="proposition id (repeatable) or all")
    common.add_argument("--power", type=int, default=1, help="exponent k of sigma^k")
    common.add_argument("--interior", choices=[k.value for k in InteriorKind], default="minus")
    common.add_argument("--window", help="kmin,kmax (write --window=-3,3)")
    common.add_argument("--l0", type=int, help="period for the rationality probe")
    common.add_argument("--strict-auto", action="store_true", help="reject generalized scalars")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    p = _Parser(prog="cderiv", description="Conformal (sigma, tau)- and (alpha, beta, gamma)-derivation workbench")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "check": "check the axioms of every declared algebra",
        "solve": "solve for a space of conformal derivation-like maps",
        "solve-gder": "generalized derivations and quasiderivations with their partner maps",
        "interior": "one graded piece of an interior for the cyclic group of sigma",
        "hilbert": "Hilbert series over a window of powers of sigma",
        "verify": "run proposition verifiers",
        "report": "axioms, the full verifier suite and every declared task",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return p


def run_cli(argv=None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        prog, name = load_program(args.file)
        code, payload, lines = COMMANDS[args.command](args, prog)
    except UsageError as exc:
        print(f"cderiv: error: {exc}", file=err)
        return 2
    except FrontendError as exc:
        for d in exc.diagnostics:
            print(d.render(getattr(args, "file", "<input>")), file=err)
        return 2
    if args.json:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
