import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import load, typed_source
from finicheck.errors import CarrierOverflow, EmptyInterval, TypeCheckError, UnboundConstant
from finicheck.types import (ArrayDen, BoolDen, IntDen, SetDen, TupleDen, carrier_size,
                             enumerate_values)


def dens(depth=2):
    ints = st.builds(lambda lo, w: IntDen(lo, lo + w), st.integers(-5, 5), st.integers(0, 6))
    base = st.one_of(st.just(BoolDen()), ints)
    if depth == 0:
        return base
    sub = dens(depth - 1)
    return st.one_of(
        base,
        st.builds(ArrayDen, st.integers(0, 3), sub),
        st.builds(SetDen, sub),
        st.builds(lambda cs: TupleDen(tuple(cs)), st.lists(sub, min_size=1, max_size=3)),
    )


def small(den, limit=10**5):
    try:
        return carrier_size(den) <= limit
    except CarrierOverflow:
        return False


@settings(max_examples=200, deadline=None)
@given(dens())
def test_enumeration_count_distinct_deterministic(den):
    assume(small(den, 20000))
    values = list(enumerate_values(den))
    assert len(values) == carrier_size(den)
    assert len(set(values)) == len(values)
    assert values == list(enumerate_values(den))


@pytest.mark.parametrize("den,size", [
    (IntDen(0, 20), 21),
    (ArrayDen(4, IntDen(-3, 3)), 2401),
    (SetDen(BoolDen()), 4),
    (BoolDen(), 2),
    (TupleDen((BoolDen(), IntDen(1, 3))), 6),
    (ArrayDen(0, IntDen(0, 9)), 1),
])
def test_carrier_sizes(den, size):
    assert carrier_size(den) == size


def test_array_size_matches_enumeration():
    assert sum(1 for _ in enumerate_values(ArrayDen(4, IntDen(-3, 3)))) == 2401


def test_int_order():
    assert list(enumerate_values(IntDen(-1, 1))) == [-1, 0, 1]


def test_array_index_zero_fastest():
    it = enumerate_values(ArrayDen(4, IntDen(-3, 3)))
    assert next(it) == (-3, -3, -3, -3)
    assert next(it) == (-2, -3, -3, -3)


def test_set_bitmask_order():
    assert list(enumerate_values(SetDen(IntDen(0, 1)))) == [
        frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]


def test_tuple_component_zero_fastest():
    assert list(enumerate_values(TupleDen((IntDen(0, 1), BoolDen())))) == [
        (0, False), (1, False), (0, True), (1, True)]


def test_enumeration_is_lazy():
    it = enumerate_values(SetDen(IntDen(0, 40)))
    assert next(it) == frozenset()


@pytest.mark.parametrize("den", [
    SetDen(IntDen(0, 100)),
    ArrayDen(100, IntDen(0, 9)),
    TupleDen((SetDen(IntDen(0, 40)), SetDen(IntDen(0, 40)))),
])
def test_overflow_is_reported(den):
    with pytest.raises(CarrierOverflow):
        carrier_size(den)


def test_gcd_nat_resolves(gcd20):
    assert gcd20.types["nat"] == IntDen(0, 20)


def test_bubblesort_types():
    typed = load("bubblesort.spec", N=4, M=3)
    assert typed.types["elem"] == IntDen(-3, 3)
    assert typed.types["array"] == ArrayDen(4, IntDen(-3, 3))


def test_unbound_constant():
    with pytest.raises(UnboundConstant) as info:
        typed_source("val K:ℕ; type t = ℕ[K];")
    assert "K" in str(info.value)


def test_in_file_constant_value():
    typed = typed_source("val K:ℕ = 3; type t = ℤ[-K, K⋅2];")
    assert typed.types["t"] == IntDen(-3, 6)


def test_empty_interval():
    with pytest.raises(EmptyInterval):
        typed_source("type t = ℤ[3,1];")


@pytest.mark.parametrize("source", [
    "theorem t(x:ℤ[0,3]) ⇔ x;",
    "theorem t(x:ℤ[0,3]) ⇔ x + true = 1;",
    "theorem t(x:ℤ[0,3]) ⇔ y = 1;",
    "theorem t(x:ℤ[0,3]) ⇔ f(x) = 1;",
    "pred p(x:ℤ[0,3]) ⇔ true; theorem t(x:ℤ[0,3]) ⇔ p(x, x);",
    "type t = ℕ;",
])
def test_type_errors(source):
    with pytest.raises(TypeCheckError):
        typed_source(source)


def test_expression_types_recorded(gcd20):
    proc = gcd20.ops["gcdp"]
    assert gcd20.type_of(proc.ret) == IntDen(0, 20)
    assert gcd20.type_of(proc.body.commands[2].cond) == BoolDen()
    diff = gcd20.ops["gcd2"].body.right.right.args[0]
    assert gcd20.type_of(diff) == IntDen(-20, 20)
