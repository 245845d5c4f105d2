import pytest

from conftest import corpus_text, load, typed_source
from finicheck import errors as E
from finicheck.check import CheckConfig, run_operation
from finicheck.sema import resolve
from finicheck.syntax import nodes as n
from finicheck.syntax import parse_command, parse_expr, parse_source
from finicheck.vcg import (VcCategory, check_vcs, generate_all, generate_vcs, vc_to_json, wp)

GCD = corpus_text("gcd.spec")

# the printed correctness condition of gcdp, as a reference shape
REFERENCE_CORR = """
theorem _gcdp_5_CorrOp0(m:nat, n:nat)
requires (m ≠ 0) ∨ (n ≠ 0);
 ⇔ let a = m in (let b = n in
   (letpar old_a = a, old_b = b in
   (∀a:nat, b:nat. (((((a ≠ 0) ∨ (b ≠ 0)) ∧
                   (gcd(a, b) = gcd(old_a, old_b))) ∧
                   (¬((a > 0) ∧ (b > 0)))) ⇒
     (let result = if a = 0 then b else a in
       (result = gcd(m, n)))))));
"""


def normalize(e, names=None):
    """Rename bound variables to b0, b1, ... in binding order."""
    names = dict(names or {})

    def fresh(old):
        new = f"b{len(names)}_{old}"
        names[old] = new
        return new

    if isinstance(e, n.Var):
        return n.Var(names.get(e.name, e.name))
    if isinstance(e, n.Quant):
        inner = dict(names)
        binders = []
        for b in e.binders:
            new = f"b{len(inner)}"
            inner[b.name] = new
            binders.append(n.Binder(new, b.type))
        return n.Quant(e.op, tuple(binders), normalize(e.body, inner))
    if isinstance(e, n.Let):
        inner = dict(names)
        out = []
        for b in e.bindings:
            value = normalize(b.value, inner)
            new = f"b{len(inner)}"
            inner[b.name] = new
            out.append(n.Binding(new, value))
        return n.Let(tuple(out), normalize(e.body, inner))
    if isinstance(e, n.LetPar):
        inner = dict(names)
        out = []
        for b in e.bindings:
            new = f"b{len(inner)}"
            inner[b.name] = new
            out.append(n.Binding(new, normalize(b.value, names)))
        return n.LetPar(tuple(out), normalize(e.body, inner))
    if not isinstance(e, n.Expr):
        return e
    fields = {}
    for k in e.__dataclass_fields__:
        if k == "span":
            continue
        v = getattr(e, k)
        if isinstance(v, n.Expr):
            v = normalize(v, names)
        elif isinstance(v, tuple):
            v = tuple(normalize(x, names) if isinstance(x, n.Expr) else x for x in v)
        fields[k] = v
    return type(e)(**fields)


@pytest.fixture(scope="module")
def gcd_vcs():
    return generate_vcs(parse_source(GCD), "gcdp")


def test_gcdp_ids(gcd_vcs):
    assert [v.id for v in gcd_vcs] == [
        "_gcdp_5_CorrOp0", "_gcdp_5_InvInit0", "_gcdp_5_InvInit1", "_gcdp_5_PreOp0",
        "_gcdp_5_PreOp1", "_gcdp_5_MeasNN0", "_gcdp_5_InvPres0", "_gcdp_5_InvPres1",
        "_gcdp_5_MeasDec0", "_gcdp_5_PreOp2"]


def test_gcdp_covers_all_categories(gcd_vcs):
    assert {v.category for v in gcd_vcs} == set(VcCategory)
    loop = [v for v in gcd_vcs if v.category not in
            (VcCategory.RESULT_CORRECT, VcCategory.OP_PRECONDITION)]
    assert len(loop) >= 5


def test_questions():
    assert VcCategory.RESULT_CORRECT.question == "Is the result correct?"
    assert VcCategory.MEASURE_DECREASED.question == "Is the loop measure decreased?"


def test_correctness_condition_matches_reference(gcd_vcs):
    corr = gcd_vcs[0]
    (ref,) = parse_source(REFERENCE_CORR).decls
    assert corr.theorem.name == ref.name
    assert corr.theorem.params == ref.params
    assert corr.theorem.requires == ref.requires
    assert normalize(corr.theorem.body) == normalize(ref.body)
    assert corr.theorem.body == ref.body


def test_correctness_condition_text(gcd_vcs):
    assert gcd_vcs[0].text.splitlines()[2] == (
        "  ⇔ (let a = m in (let b = n in (letpar old_a = a, old_b = b in "
        "(∀a:nat, b:nat. (((((a ≠ 0) ∨ (b ≠ 0)) ∧ (gcd(a, b) = gcd(old_a, old_b))) ∧ "
        "(¬((a > 0) ∧ (b > 0)))) ⇒ (let result = (if (a = 0) then b else a) in "
        "(result = gcd(m, n))))))));")


@pytest.mark.parametrize("N", [5, 10])
def test_gcdp_vcs_valid(N):
    typed = load("gcd.spec", N=N)
    vcs = generate_vcs(typed.spec, "gcdp")
    reports = check_vcs(vcs, typed)
    assert all(r.ok for r in reports)
    assert {v.status for v in vcs} == {"valid"}


def _mutant(old, new, N=6):
    source = GCD.replace(old, new)
    assert source != GCD
    typed = resolve(parse_source(source), {"N": N})
    vcs = generate_vcs(typed.spec, "gcdp")
    return vcs, check_vcs(vcs, typed)


def test_deleting_gcd_invariant_breaks_correctness():
    vcs, reports = _mutant("    invariant gcd(a,b) = gcd(old_a,old_b);\n", "")
    status = {v.id: v.status for v in vcs}
    assert status["_gcdp_5_CorrOp0"] == "invalid"
    assert status["_gcdp_5_InvPres0"] == "valid"
    assert reports[0].failures and reports[0].failures[0].error.kind == "theorem is false"


def test_weakened_measure_not_decreased():
    vcs, reports = _mutant("decreases a+b;", "decreases a;")
    bad = [v for v in vcs if v.status == "invalid"]
    assert [v.category for v in bad] == [VcCategory.MEASURE_DECREASED]
    report = reports[vcs.index(bad[0])]
    assert report.failures


def test_identity_procedure():
    spec = parse_source("type nat = ℕ[3]; proc id(x:nat): nat ensures result = x; { return x; }")
    (vc,) = generate_vcs(spec, "id")
    assert vc.category is VcCategory.RESULT_CORRECT
    assert vc.theorem.body == parse_expr("let result = x in result = x")
    check_vcs([vc], resolve(spec))
    assert vc.status == "valid"


def test_wp_assignment():
    res = wp(parse_command("a ≔ m;"), parse_expr("a = m"))
    assert res.formula == parse_expr("let a = m in a = m")


def test_wp_empty_sequence():
    post = parse_expr("a = m")
    assert wp(n.Seq(()), post).formula is post


def test_wp_if():
    res = wp(parse_command("if a > b then a ≔ a - b; else b ≔ b - a;"), parse_expr("a ≥ 0"))
    assert res.formula == parse_expr(
        "(a > b ⇒ let a = a - b in a ≥ 0) ∧ (¬(a > b) ⇒ let b = b - a in a ≥ 0)")


def test_wp_loop_side_conditions():
    spec = parse_source(GCD)
    proc = spec.lookup("gcdp")
    loop = proc.body.commands[2]
    types = {"a": proc.params[0].type, "b": proc.params[1].type}
    res = wp(loop, parse_expr("a = 0 ∨ b = 0"), spec, types)
    assert isinstance(res.formula, n.LetPar)
    tags = [v.category.tag for v in res.side_conditions]
    assert "MeasNN" in tags and "InvPres" in tags and "MeasDec" in tags


def test_range_guard_on_assignment():
    source = "type nat = ℕ[3]; proc inc(x:nat): nat { var y:nat ≔ x + 1; return y; }"
    typed = typed_source(source)
    (vc,) = generate_vcs(typed.spec, "inc")
    (report,) = check_vcs([vc], typed)
    assert vc.status == "invalid" and report.failures[0].inputs == (3,)
    assert not run_operation(typed, CheckConfig("inc")).ok


def test_category_completeness():
    typed = load("sorting.spec", N=2, M=1)
    vcs = generate_vcs(typed.spec, "bubbleSort")
    loops, calls = 2, 1
    assert len(vcs) >= 1 + 4 * loops + calls
    assert sum(v.category is VcCategory.OP_PRECONDITION for v in vcs) >= calls


def test_span_containment(gcd_vcs):
    proc = parse_source(GCD).lookup("gcdp")
    body = proc.body.commands[2].body.span
    for vc in gcd_vcs:
        assert proc.span.contains(vc.goal_span)
        for s in vc.contributing_spans:
            assert proc.span.contains(s)
    corr = gcd_vcs[0]
    assert not any(body.contains(s) for s in corr.contributing_spans)
    assert GCD[corr.goal_span.start:corr.goal_span.end] == "result = gcd(m,n)"


def test_self_checkability():
    typed = load("gcd.spec", N=5)
    vcs = generate_vcs(typed.spec, "gcdp")
    check_vcs(vcs, typed)
    text = GCD + "\n" + "\n\n".join(v.text for v in vcs)
    reparsed = resolve(parse_source(text), {"N": 5})
    for v in vcs:
        assert run_operation(reparsed, CheckConfig(v.id)).ok == (v.status == "valid")


def test_generate_all_and_json():
    spec = parse_source(corpus_text("algorithms.spec"))
    vcs = generate_all(spec)
    procs = {v.procedure for v in vcs}
    assert len(procs) == 10
    data = vc_to_json(vcs[0])
    assert set(data) >= {"id", "category", "question", "theorem", "goal_span",
                         "contributing_spans", "status"}


def test_procedure_call_in_loop_condition_unsupported():
    spec = parse_source("type nat = ℕ[3];"
                        "proc f(x:nat): 𝔹 { return x > 0; }"
                        "proc g(x:nat): nat { var y:nat ≔ x;"
                        "  while f(y) do decreases y; { y ≔ y - 1; } return y; }")
    with pytest.raises(E.UnsupportedConstruct):
        generate_vcs(spec, "g")


def test_functions_get_no_vcs():
    with pytest.raises(E.SemaError):
        generate_vcs(parse_source(GCD), "gcd")


SWAP = {"PLUS": "-", "MINUS": "+", "LT": "≤", "LE": "<", "GT": "≥", "GE": ">",
        "EQ": "≠", "NE": "=", "AND": "∨", "OR": "∧"}


def _operator_mutants(source, span):
    from finicheck.syntax import tokenize
    for t in tokenize(source):
        if span.start <= t.span.start < span.end:
            if t.kind in SWAP:
                yield source[:t.span.start] + SWAP[t.kind] + source[t.span.end:]
            elif t.kind == "NUMBER":
                yield source[:t.span.start] + str(int(t.lexeme) + 1) + source[t.span.end:]


@pytest.mark.parametrize("name,proc,consts", [
    ("gcd.spec", "gcdp", {"N": 3}),
    ("algorithms.spec", "isqrt", {"N": 2, "M": 1}),
    ("algorithms.spec", "search", {"N": 2, "M": 1}),
])
def test_mutants_with_valid_vcs_pass_direct_checks(name, proc, consts):
    source = corpus_text(name)
    span = parse_source(source).lookup(proc).span
    tried = 0
    for text in _operator_mutants(source, span):
        try:
            typed = resolve(parse_source(text), consts)
            vcs = generate_vcs(typed.spec, proc)
        except E.FinicheckError:
            continue
        tried += 1
        check_vcs(vcs, typed)
        if all(v.status == "valid" for v in vcs):
            assert run_operation(typed, CheckConfig(proc)).ok, text[span.start:span.end]
    assert tried >= 5
