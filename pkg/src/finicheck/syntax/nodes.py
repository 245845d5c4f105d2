"""Abstract syntax. Nodes are frozen dataclasses; spans never take part in equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import NO_SPAN, Span


@dataclass(frozen=True)
class Node:
    span: Span = field(default=NO_SPAN, compare=False, repr=False, kw_only=True)


# --- type expressions ------------------------------------------------------

class TypeExpr(Node):
    pass


@dataclass(frozen=True)
class BoolType(TypeExpr):
    pass


@dataclass(frozen=True)
class NatType(TypeExpr):
    """``ℕ`` (bound is None) or ``ℕ[bound]``."""
    bound: Optional["Expr"] = None


@dataclass(frozen=True)
class IntType(TypeExpr):
    """``ℤ`` (both bounds None) or ``ℤ[lo,hi]``."""
    lo: Optional["Expr"] = None
    hi: Optional["Expr"] = None


@dataclass(frozen=True)
class ArrayType(TypeExpr):
    length: "Expr"
    elem: TypeExpr


@dataclass(frozen=True)
class SetType(TypeExpr):
    elem: TypeExpr


@dataclass(frozen=True)
class TupleType(TypeExpr):
    components: tuple[TypeExpr, ...]


@dataclass(frozen=True)
class NamedType(TypeExpr):
    name: str


# --- expressions -----------------------------------------------------------

class Expr(Node):
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "¬" or "-"
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Binder(Node):
    name: str
    type: TypeExpr


@dataclass(frozen=True)
class Quant(Expr):
    op: str  # "∀" or "∃"
    binders: tuple[Binder, ...]
    body: Expr


@dataclass(frozen=True)
class Choose(Expr):
    binder: Binder
    cond: Expr


@dataclass(frozen=True)
class Binding(Node):
    name: str
    value: Expr


@dataclass(frozen=True)
class Let(Expr):
    """Sequential bindings: each value sees the names bound before it."""
    bindings: tuple[Binding, ...]
    body: Expr


@dataclass(frozen=True)
class LetPar(Expr):
    """Simultaneous bindings: every value is evaluated in the outer scope."""
    bindings: tuple[Binding, ...]
    body: Expr


@dataclass(frozen=True)
class IfExpr(Expr):
    cond: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Index(Expr):
    array: Expr
    index: Expr


@dataclass(frozen=True)
class Update(Expr):
    """``a with [i] = v``: copy of ``a`` with one element replaced."""
    array: Expr
    index: Expr
    value: Expr


@dataclass(frozen=True)
class TupleExpr(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Proj(Expr):
    """1-based tuple component ``t.k``."""
    tuple: Expr
    index: int


@dataclass(frozen=True)
class SetLit(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class EmptySet(Expr):
    elem: TypeExpr


# --- commands --------------------------------------------------------------

class Command(Node):
    pass


@dataclass(frozen=True)
class VarDecl(Command):
    name: str
    type: TypeExpr
    init: Expr


@dataclass(frozen=True)
class Assign(Command):
    """``name[i1][i2]... ≔ value``; ``indices`` is empty for plain variables."""
    name: str
    indices: tuple[Expr, ...]
    value: Expr


@dataclass(frozen=True)
class Seq(Command):
    commands: tuple[Command, ...]


@dataclass(frozen=True)
class If(Command):
    cond: Expr
    then: Seq
    orelse: Optional[Seq] = None


@dataclass(frozen=True)
class While(Command):
    cond: Expr
    invariants: tuple[Expr, ...]
    decreases: Optional[Expr]
    body: Seq


@dataclass(frozen=True)
class For(Command):
    init: VarDecl
    cond: Expr
    update: Assign
    invariants: tuple[Expr, ...]
    decreases: Optional[Expr]
    body: Seq


@dataclass(frozen=True)
class Assert(Command):
    formula: Expr


@dataclass(frozen=True)
class CallCmd(Command):
    call: Call


# --- declarations ----------------------------------------------------------

@dataclass(frozen=True)
class Param(Node):
    name: str
    type: TypeExpr


class Decl(Node):
    name: str


@dataclass(frozen=True)
class ValDecl(Decl):
    name: str
    type: Optional[TypeExpr] = None
    value: Optional[Expr] = None


@dataclass(frozen=True)
class TypeDecl(Decl):
    name: str
    type: TypeExpr


@dataclass(frozen=True)
class PredDecl(Decl):
    name: str
    params: tuple[Param, ...]
    requires: tuple[Expr, ...]
    body: Expr


@dataclass(frozen=True)
class FunDecl(Decl):
    name: str
    params: tuple[Param, ...]
    result: TypeExpr
    requires: tuple[Expr, ...]
    body: Expr


@dataclass(frozen=True)
class TheoremDecl(Decl):
    name: str
    params: tuple[Param, ...]
    requires: tuple[Expr, ...]
    body: Expr


@dataclass(frozen=True)
class ProcDecl(Decl):
    name: str
    params: tuple[Param, ...]
    result: TypeExpr
    requires: tuple[Expr, ...]
    ensures: tuple[Expr, ...]
    body: Seq
    ret: Expr


OPERATIONS = (PredDecl, FunDecl, TheoremDecl, ProcDecl)


@dataclass(frozen=True)
class Spec(Node):
    decls: tuple[Decl, ...]

    def lookup(self, name: str) -> Decl | None:
        for d in self.decls:
            if d.name == name:
                return d
        return None

    def operations(self) -> list[Decl]:
        return [d for d in self.decls if isinstance(d, OPERATIONS)]


def children(node: Node):
    """Direct child nodes of ``node`` in source order."""
    for name in node.__dataclass_fields__:
        if name == "span":
            continue
        value = getattr(node, name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node: Node):
    """Pre-order traversal over ``node`` and all its descendants."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(list(children(n))))


def conj(formulas, span: Span = NO_SPAN) -> Expr:
    """Left-nested conjunction; ``true`` for an empty sequence."""
    formulas = list(formulas)
    if not formulas:
        return BoolLit(True, span=span)
    out = formulas[0]
    for f in formulas[1:]:
        out = Binary("∧", out, f, span=out.span.join(f.span))
    return out
