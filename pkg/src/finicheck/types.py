"""Finite type denotations, their carriers, and the canonical enumeration order.

Runtime values are plain Python objects: ``int``, ``bool``, ``tuple`` (arrays
and tuples alike) and ``frozenset``. The denotation tells arrays and tuples
apart when a value is printed.

Enumeration order: integers ascend; arrays count like a mixed-radix number
with index 0 varying fastest; tuples likewise with component 0 fastest; sets
follow the ascending subset bitmask, where bit ``i`` stands for the ``i``-th
element of the element carrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import CarrierOverflow

Value = Union[int, bool, tuple, frozenset]

# Largest carrier the checker will count or enumerate.
CARRIER_CAPACITY = 2**63 - 1


class TypeDen:
    pass


@dataclass(frozen=True)
class BoolDen(TypeDen):
    def __str__(self):
        return "𝔹"


@dataclass(frozen=True)
class IntDen(TypeDen):
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo},{self.hi}]")

    def __str__(self):
        return f"ℤ[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class ArrayDen(TypeDen):
    length: int
    elem: TypeDen

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative array length")

    def __str__(self):
        return f"Array[{self.length},{self.elem}]"


@dataclass(frozen=True)
class SetDen(TypeDen):
    elem: TypeDen

    def __str__(self):
        return f"Set[{self.elem}]"


@dataclass(frozen=True)
class TupleDen(TypeDen):
    components: tuple[TypeDen, ...]

    def __str__(self):
        return "Tuple[" + ",".join(map(str, self.components)) + "]"


def carrier_size(den: TypeDen) -> int:
    """Number of values of ``den``; raises CarrierOverflow past the capacity."""
    if isinstance(den, BoolDen):
        size = 2
    elif isinstance(den, IntDen):
        size = den.hi - den.lo + 1
    elif isinstance(den, ArrayDen):
        base = carrier_size(den.elem)
        if den.length and base > 1 and (base.bit_length() - 1) * den.length > 63:
            raise CarrierOverflow(f"carrier of {den} is too large to enumerate")
        size = base ** den.length
    elif isinstance(den, SetDen):
        n = carrier_size(den.elem)
        if n >= 63:
            raise CarrierOverflow(f"carrier of {den} is too large to enumerate")
        size = 2 ** n
    elif isinstance(den, TupleDen):
        size = 1
        for c in den.components:
            size *= carrier_size(c)
            if size > CARRIER_CAPACITY:
                break
    else:
        raise TypeError(f"not a type denotation: {den!r}")
    if size > CARRIER_CAPACITY:
        raise CarrierOverflow(f"carrier of {den} is too large to enumerate")
    return size


def enumerate_values(den: TypeDen) -> Iterator[Value]:
    """Lazily yield every value of ``den`` once, in canonical order."""
    if isinstance(den, BoolDen):
        yield False
        yield True
    elif isinstance(den, IntDen):
        yield from range(den.lo, den.hi + 1)
    elif isinstance(den, ArrayDen):
        elems = list(enumerate_values(den.elem))
        for combo in itertools.product(elems, repeat=den.length):
            yield combo[::-1]
    elif isinstance(den, TupleDen):
        pools = [list(enumerate_values(c)) for c in reversed(den.components)]
        for combo in itertools.product(*pools):
            yield combo[::-1]
    elif isinstance(den, SetDen):
        elems = list(enumerate_values(den.elem))
        for mask in range(1 << len(elems)):
            yield frozenset(e for i, e in enumerate(elems) if mask >> i & 1)
    else:
        raise TypeError(f"not a type denotation: {den!r}")


@dataclass(frozen=True)
class Carrier:
    den: TypeDen

    @property
    def size(self) -> int:
        return carrier_size(self.den)

    def __iter__(self):
        return enumerate_values(self.den)

    def __len__(self):
        return self.size


def contains(den: TypeDen, value) -> bool:
    """Whether ``value`` inhabits ``den``."""
    if isinstance(den, BoolDen):
        return isinstance(value, bool)
    if isinstance(den, IntDen):
        return not isinstance(value, bool) and isinstance(value, int) and den.lo <= value <= den.hi
    if isinstance(den, ArrayDen):
        return (isinstance(value, tuple) and len(value) == den.length
                and all(contains(den.elem, v) for v in value))
    if isinstance(den, TupleDen):
        return (isinstance(value, tuple) and len(value) == len(den.components)
                and all(contains(d, v) for d, v in zip(den.components, value)))
    if isinstance(den, SetDen):
        return isinstance(value, frozenset) and all(contains(den.elem, v) for v in value)
    return False


def compatible(a: TypeDen, b: TypeDen) -> bool:
    """Same shape, ignoring integer bounds."""
    if isinstance(a, IntDen) and isinstance(b, IntDen):
        return True
    if isinstance(a, BoolDen) and isinstance(b, BoolDen):
        return True
    if isinstance(a, ArrayDen) and isinstance(b, ArrayDen):
        return a.length == b.length and compatible(a.elem, b.elem)
    if isinstance(a, SetDen) and isinstance(b, SetDen):
        return compatible(a.elem, b.elem)
    if isinstance(a, TupleDen) and isinstance(b, TupleDen):
        return (len(a.components) == len(b.components)
                and all(compatible(x, y) for x, y in zip(a.components, b.components)))
    return False


def join(a: TypeDen, b: TypeDen) -> TypeDen:
    """Smallest denotation covering two compatible ones."""
    if isinstance(a, IntDen):
        return IntDen(min(a.lo, b.lo), max(a.hi, b.hi))
    if isinstance(a, ArrayDen):
        return ArrayDen(a.length, join(a.elem, b.elem))
    if isinstance(a, SetDen):
        return SetDen(join(a.elem, b.elem))
    if isinstance(a, TupleDen):
        return TupleDen(tuple(join(x, y) for x, y in zip(a.components, b.components)))
    return a


def kind_name(den: TypeDen) -> str:
    """Bound-free name of a denotation, as shown in run reports."""
    if isinstance(den, IntDen):
        return "ℤ"
    if isinstance(den, BoolDen):
        return "𝔹"
    if isinstance(den, ArrayDen):
        return f"Array[{kind_name(den.elem)}]"
    if isinstance(den, SetDen):
        return f"Set[{kind_name(den.elem)}]"
    return "Tuple[" + ",".join(kind_name(c) for c in den.components) + "]"


def _sort_key(v):
    if isinstance(v, frozenset):
        return (2, sorted(map(_sort_key, v)))
    if isinstance(v, tuple):
        return (1, [_sort_key(x) for x in v])
    return (0, v)


def format_value(value, den: TypeDen | None = None) -> str:
    """Render a value; ``den`` distinguishes arrays ``[..]`` from tuples ``⟨..⟩``."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, frozenset):
        elem = den.elem if isinstance(den, SetDen) else None
        items = sorted(value, key=_sort_key)
        return "{" + ",".join(format_value(v, elem) for v in items) + "}"
    if isinstance(den, TupleDen):
        return "⟨" + ",".join(format_value(v, d) for v, d in zip(value, den.components)) + "⟩"
    elem = den.elem if isinstance(den, ArrayDen) else None
    return "[" + ",".join(format_value(v, elem) for v in value) + "]"


def to_json_value(value):
    """JSON-compatible form: arrays/tuples become lists, sets sorted lists."""
    if isinstance(value, frozenset):
        return [to_json_value(v) for v in sorted(value, key=_sort_key)]
    if isinstance(value, tuple):
        return [to_json_value(v) for v in value]
    return value
