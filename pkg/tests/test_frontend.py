from importlib import resources

import pytest

from cderiv.cend import ConfMap, Morphism
from cderiv.frontend import FrontendError, Span, load, parse, print_file
from cderiv.frontend.lexer import tokenize
from cderiv.lcsa import builtin

CORPUS = sorted(p for p in (resources.files("cderiv") / "corpus").iterdir() if p.name.endswith(".lcsa"))


def diagnostics_of(text: str):
    with pytest.raises(FrontendError) as info:
        load(text)
    return info.value.diagnostics


def test_corpus_has_six_files():
    assert len(CORPUS) >= 6


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_round_trip(path):
    ast = parse(path.read_text(encoding="utf-8"))
    printed = print_file(ast)
    assert parse(printed) == ast
    assert print_file(parse(printed)) == printed


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_elaborates(path):
    prog = load(path.read_text(encoding="utf-8"))
    assert prog.algebras


def test_virasoro_declaration_matches_builtin():
    prog = load("algebra Vir { basis L: even; [L,L] = (d + 2*x) L; }")
    A = prog.algebras["Vir"]
    assert A.check_axioms().passed
    assert A.table == builtin("virasoro").table


def test_corpus_tables_match_builtins():
    for name in ("virasoro", "cur_sl2", "heisenberg_pair"):
        prog = load((resources.files("cderiv") / "corpus" / f"{name}.lcsa").read_text(encoding="utf-8"))
        assert prog.algebras[name].table == builtin(name).table


def test_empty_file():
    assert parse("").items == ()
    assert parse("# only a comment\n").items == ()


def test_implicit_coefficients_and_optional_star():
    a = parse("algebra A { basis L: even; [L,L] = (d + 2*x) L; }")
    b = parse("algebra A { basis L: even; [L,L] = 1*(1 d + 2 x) * L; }")
    assert load(print_file(a)).algebras["A"].table == load(print_file(b)).algebras["A"].table


def test_rational_coefficients():
    prog = load("algebra NS { basis L: even, G: odd; [L, L] = (d + 2x) L; [L, G] = (d + 3/2 x) G; [G, G] = 2 L; }")
    assert prog.algebras["NS"].check_axioms().passed


def test_duplicate_basis_name():
    diags = diagnostics_of("algebra A { basis L: even, L: odd; }")
    assert len(diags) == 1
    assert "duplicate basis name" in diags[0].message
    assert diags[0].span == Span(1, 28)


def test_ordering_rule():
    text = "algebra NS {\n  basis L: even, G: odd;\n  [G, L] = 0;\n}\n"
    (diag,) = diagnostics_of(text)
    assert "declare the (i,j) pair with i ≤ j" in diag.message
    assert diag.span == Span(3, 3)


def test_grading_violation_names_the_axiom():
    text = "algebra B {\n  basis a: even, b: odd;\n  [a, a] = b;\n}\n"
    (diag,) = diagnostics_of(text)
    assert "(C2)" in diag.message
    assert diag.span.line == 3


def test_unknown_basis_name():
    (diag,) = diagnostics_of("algebra A { basis L: even; [L, L] = M; }")
    assert "unknown basis name 'M'" in diag.message


def test_spectral_variable_in_morphism():
    text = "algebra V { basis L: even; [L,L] = (d + 2x) L; }\nmap s on V { L -> x L; }\n"
    (diag,) = diagnostics_of(text)
    assert "free of the spectral variable" in diag.message
    assert diag.span == Span(2, 19)


def test_non_homomorphism_map_elaborates():
    prog = load("algebra Vir { basis L: even; [L,L] = (d + 2*x) L; }\nmap s on Vir { L -> 2 L; }")
    s = prog.maps["s"]
    assert isinstance(s, Morphism)
    assert not s.is_homomorphism()


def test_conformal_map_keeps_spectral_variable():
    prog = load("algebra V { basis L: even; [L,L] = (d + 2x) L; }\ncmap f on V : even { L -> x L; }")
    assert isinstance(prog.maps["f"], ConfMap)


def test_missing_image():
    (diag,) = diagnostics_of("algebra A { basis a: even, b: even; }\nmap s on A { a -> b; }")
    assert "without an image" in diag.message


def test_task_references():
    diags = diagnostics_of("algebra A { basis a: even; }\ntask t { command: verify; sigma: nope; colour: red; }")
    messages = " ".join(d.message for d in diags)
    assert "unknown map 'nope'" in messages
    assert "unknown task key 'colour'" in messages


def test_task_values():
    prog = load("algebra A { basis a: even; }\ntask t { command: hilbert; sigma: -id; window: -3, 3; prop: P4.7; }")
    (t,) = prog.tasks
    assert t.options["sigma"] == ("-id",)
    assert t.options["window"] == ("-3", "3")
    assert t.options["prop"] == ("P4.7",)


@pytest.mark.parametrize(
    "text",
    [
        "algebra { basis a: even; }",
        "algebra A { basis a: even }",
        "algebra A { basis a: nice; }",
        "algebra A { basis a: even; [a, a] = 1/0 a; }",
        "algebra A { basis d: even; }",
        "algebra A { basis a: even; } $",
    ],
)
def test_syntax_errors_carry_spans(text):
    diags = diagnostics_of(text)
    assert diags
    for d in diags:
        assert d.span.line >= 1 and d.span.col >= 1
        assert d.render("f.lcsa").startswith(f"f.lcsa:{d.span.line}:{d.span.col}: error: ")


def test_lexer_tracks_lines_and_columns():
    toks = tokenize("algebra A {\n  basis L: even;\n}")
    basis = next(t for t in toks if t.text == "basis")
    assert basis.span == Span(2, 3)
    assert toks[-1].kind == "eof"
