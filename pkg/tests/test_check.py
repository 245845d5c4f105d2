import json
import math
import re

import pytest
from hypothesis import given, settings, strategies as st

from conftest import corpus_text, load, typed_source
from finicheck import errors as E
from finicheck.check import (CheckConfig, dump_reports, format_report, parameter_tuples,
                             run_operation)
from finicheck.eval import Mode
from finicheck.types import carrier_size

BAD = "val N: ℕ; type nat = ℕ[N];\ntheorem bad(m:nat) ⇔ m < N;\n"


def test_gcd2_counts(gcd20):
    r = run_operation(gcd20, CheckConfig("gcd2"))
    assert (r.total_inputs, r.checked, r.inadmissible, len(r.failures)) == (441, 441, 0, 0)


def test_gcdp_counts(gcd20):
    r = run_operation(gcd20, CheckConfig("gcdp"))
    assert (r.total_inputs, r.checked, r.inadmissible, len(r.failures)) == (441, 440, 1, 0)
    assert r.inadmissible_inputs == [(0, 0)]


def test_report_header(gcd20):
    text = format_report(run_operation(gcd20, CheckConfig("gcd2")))
    first, second = text.splitlines()
    assert first == "Executing gcd2(ℤ,ℤ) with all 441 inputs."
    assert re.fullmatch(r"Execution completed for ALL inputs "
                        r"\(\d+ ms, 441 checked, 0 inadmissible\)\.", second)


def test_bad_theorem_counterexample():
    typed = typed_source(BAD, N=20)
    r = run_operation(typed, CheckConfig("bad"))
    assert r.checked == 20 and len(r.failures) == 1
    failure = r.failures[0]
    assert failure.inputs == (20,)
    assert isinstance(failure.error, E.TheoremViolation)
    text = format_report(r, BAD)
    assert "FAILURE: 1 failing input(s)" in text
    assert "bad(20): theorem is false at 2:" in text
    assert "inputs: m = 20" in text


def test_zero_parameter_operation():
    typed = typed_source("theorem t() ⇔ true;")
    r = run_operation(typed, CheckConfig("t"))
    assert format_report(r).startswith("Executing t() with all 1 inputs.")
    assert r.checked == 1


def test_fail_fast_stops_early():
    typed = typed_source("type t = ℤ[0,9]; theorem odd(x:t) ⇔ x % 2 = 0;")
    r = run_operation(typed, CheckConfig("odd", fail_fast=True))
    assert len(r.failures) == 1 and r.processed == 2 and not r.completed
    assert "among 2 of 10 inputs" in format_report(r)


def test_non_silent_lines(gcd20):
    lines = []
    run_operation(gcd20, CheckConfig("gcdp", silent=False), lines.append)
    assert len(lines) == 441
    assert lines[0] == "gcdp(0,0): inadmissible"
    assert lines[1] == "gcdp(0,1) = 1"


def test_nondet_counts_each_input_once():
    typed = typed_source("fun f(x:ℤ[0,2]): ℤ[0,2] = choose y:ℤ[0,2] with y ≥ x;")
    lines = []
    r = run_operation(typed, CheckConfig("f", Mode.NONDET, silent=False), lines.append)
    assert r.checked == 3
    assert lines[0] == "f(0) = 0 | 1 | 2"


def test_exhaustiveness_and_order():
    typed = load("bubblesort.spec", N=2, M=1)
    op = typed.ops["cswap"]
    tuples = list(parameter_tuples(typed, op))
    assert len(tuples) == math.prod(carrier_size(d) for d in typed.param_dens(op))
    # first parameter varies slowest
    assert tuples[0] == ((-1, -1), -2, -2) and tuples[1] == ((-1, -1), -2, -1)


def test_workers_preserve_order(gcd20):
    serial = run_operation(gcd20, CheckConfig("gcdp"))
    parallel = run_operation(gcd20, CheckConfig("gcdp", workers=3))
    assert parallel.inadmissible_inputs == serial.inadmissible_inputs
    assert (parallel.checked, parallel.inadmissible) == (serial.checked, serial.inadmissible)


def test_workers_failure_order():
    typed = typed_source("type t = ℤ[0,30]; theorem odd(x:t) ⇔ x % 3 ≠ 0;")
    serial = run_operation(typed, CheckConfig("odd"))
    parallel = run_operation(typed, CheckConfig("odd", workers=2))
    assert [f.inputs for f in parallel.failures] == [f.inputs for f in serial.failures]
    assert [f.error.kind for f in parallel.failures] == ["theorem is false"] * 11


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_inadmissible_iff_requires_false(a, b):
    typed = typed_source(f"type t = ℤ[0,6]; theorem r(x:t, y:t) requires x + y ≠ {a + b}; ⇔ x ≠ {a} ∨ y ≠ {b} ∨ false;")
    r = run_operation(typed, CheckConfig("r"))
    expected = [(x, y) for x in range(7) for y in range(7) if x + y == a + b]
    assert r.inadmissible_inputs == expected
    assert r.checked + r.inadmissible + len(r.failures) == r.total_inputs == 49


def test_timeout_is_a_failure():
    typed = typed_source("theorem t() ⇔ ∀x:ℤ[0,300], y:ℤ[0,300], z:ℤ[0,300]. x+y+z ≥ 0;")
    r = run_operation(typed, CheckConfig("t", timeout_ms=10))
    assert len(r.failures) == 1 and r.failures[0].error.kind == "timeout"


def test_report_json(tmp_path):
    typed = typed_source(BAD, N=3)
    r = run_operation(typed, CheckConfig("bad"))
    path = tmp_path / "r.json"
    dump_reports([r], str(path))
    (data,) = json.loads(path.read_text())
    assert data["checked"] == 3 and data["failures"][0]["inputs"] == [3]
    assert data["failures"][0]["error"]["env"] == {"m": 3}


def test_unknown_operation(gcd20):
    with pytest.raises(E.SemaError):
        run_operation(gcd20, CheckConfig("nope"))


def test_gcd_corpus_all_operations_pass(gcd20):
    for op in gcd20.spec.operations():
        assert run_operation(gcd20, CheckConfig(op.name)).ok, op.name


def test_unannotated_cswap_fails_outside_bounds():
    typed = load("bubblesort.spec", N=3, M=1)
    assert run_operation(typed, CheckConfig("bubbleSort")).ok
    r = run_operation(typed, CheckConfig("cswap"))
    assert r.failures and all(isinstance(f.error, E.RangeViolation) for f in r.failures)


@pytest.mark.parametrize("name,consts", [
    ("forall_exists.spec", {}),
    ("algorithms.spec", {"N": 3, "M": 1}),
    ("sorting.spec", {"N": 3, "M": 1}),
])
def test_other_corpus_files_pass(name, consts):
    typed = load(name, **consts)
    for op in typed.spec.operations():
        assert run_operation(typed, CheckConfig(op.name)).ok, op.name
