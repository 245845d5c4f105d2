import re

import pytest
from hypothesis import given, settings, strategies as st

from conftest import CORPUS, corpus_text
from finicheck.errors import LexError, ParseError
from finicheck.syntax import nodes as n
from finicheck.syntax import parse_expr, parse_source, pretty_print, to_ascii, tokenize
from gen import SyntaxGen


def kinds(text):
    return [t.kind for t in tokenize(text)]


def test_quantifier_tokens():
    assert kinds("∀x:T") == ["FORALL", "IDENT", "COLON", "IDENT"]


@pytest.mark.parametrize("uni,ascii_", [
    ("∀x:T", "forall x:T"),
    ("a ≔ b", "a := b"),
    ("a ≤ b ∧ c ≠ d", "a <= b and c != d"),
    ("p ⇒ q ⇔ r", "p => q <=> r"),
    ("¬p ∨ q", "not p or q"),
    ("a ≠ b", "a ~= b"),
    ("x ∈ s ∪ t", "x isin s union t"),
])
def test_ascii_aliases_give_same_kinds(uni, ascii_):
    assert kinds(uni) == kinds(ascii_)


def test_lexemes_and_gaps_reconstruct_source():
    src = corpus_text("gcd.spec")
    pos = 0
    for t in tokenize(src):
        gap = src[pos:t.span.start]
        stripped = re.sub(r"//[^\n]*|/\*.*?\*/", "", gap, flags=re.S)
        assert stripped.strip() == ""
        assert src[t.span.start:t.span.end] == t.lexeme
        pos = t.span.end
    assert src[pos:].strip() == ""


def test_block_comments_skipped():
    assert kinds("a /* b ∧ c */ + d") == ["IDENT", "PLUS", "IDENT"]


def test_lex_error_span():
    with pytest.raises(LexError) as info:
        tokenize("a + $")
    assert info.value.span.start == 4


def test_parse_error_lists_expected():
    with pytest.raises(ParseError) as info:
        parse_source("theorem t(x:ℤ[0,1]) ⇔ x = ;")
    assert info.value.expected


def test_gcd_corpus_has_eight_declarations():
    spec = parse_source(corpus_text("gcd.spec"))
    kinds_ = [type(d).__name__ for d in spec.decls]
    assert kinds_ == ["ValDecl", "TypeDecl", "PredDecl", "FunDecl",
                      "TheoremDecl", "TheoremDecl", "TheoremDecl", "ProcDecl"]


def test_and_binds_tighter_than_or():
    assert parse_expr("a ∧ b ∨ c") == parse_expr("(a ∧ b) ∨ c")


def test_implication_is_right_associative():
    assert parse_expr("a ⇒ b ⇒ c") == parse_expr("a ⇒ (b ⇒ c)")


def test_quantifier_body_extends_right():
    e = parse_expr("∀x:T. p(x) ⇒ ∃y:T. q(x,y)")
    assert isinstance(e, n.Quant) and e.op == "∀"
    assert isinstance(e.body, n.Binary) and e.body.op == "⇒"
    assert isinstance(e.body.right, n.Quant)


def test_arithmetic_precedence():
    assert parse_expr("1 + 2 ⋅ 3 < 4") == parse_expr("(1 + (2 ⋅ 3)) < 4")


def test_printer_examples():
    e = n.Quant("∃", (n.Binder("y", n.NamedType("T")),), n.Call("q", (n.Var("x"), n.Var("y"))))
    assert pretty_print(e) == "(∃y:T. (q(x, y)))"
    assert pretty_print(n.IntLit(0)) == "0"


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.spec")), ids=lambda p: p.name)
def test_corpus_round_trip(path):
    spec = parse_source(path.read_text(encoding="utf-8"))
    printed = pretty_print(spec)
    assert parse_source(printed) == spec
    assert parse_source(to_ascii(printed)) == spec


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_generated_round_trip(seed):
    spec = SyntaxGen(seed).spec()
    assert parse_source(pretty_print(spec)) == spec


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_ascii_alias_equivalence(seed):
    spec = SyntaxGen(seed).spec()
    assert parse_source(to_ascii(pretty_print(spec))) == spec


def _check_nesting(node):
    for child in n.children(node):
        assert node.span.contains(child.span), (node, child)
        _check_nesting(child)


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.spec")), ids=lambda p: p.name)
def test_spans_nest(path):
    src = path.read_text(encoding="utf-8")
    spec = parse_source(src)
    _check_nesting(spec)
    for node in n.walk(spec):
        assert 0 <= node.span.start <= node.span.end <= len(src)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_generated_spans_nest(seed):
    _check_nesting(parse_source(pretty_print(SyntaxGen(seed).spec())))
