"""Resolve constants and type expressions, and type-check every declaration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import EmptyInterval, SemaError, TypeCheckError, UnboundConstant
from .syntax import nodes as n
from .types import (ArrayDen, BoolDen, IntDen, SetDen, TupleDen, TypeDen,
                    compatible, join)

RESERVED_PREFIX = "old_"
BOOL = BoolDen()


@dataclass(frozen=True)
class ConstBinding:
    name: str
    value: int


@dataclass
class TypedSpec:
    """A specification instantiated with constant values and type-checked.

    ``expr_types`` maps ``id(expr)`` to the denotation of each expression
    node of ``spec``; the tree must stay alive alongside this object.
    """

    spec: n.Spec
    consts: dict[str, int]
    types: dict[str, TypeDen]
    ops: dict[str, n.Decl]
    expr_types: dict[int, TypeDen] = field(default_factory=dict, repr=False)
    _den_cache: dict = field(default_factory=dict, repr=False)

    def den_of(self, t: n.TypeExpr) -> TypeDen:
        try:
            return self._den_cache[t]
        except KeyError:
            den = _resolve_type(t, self.consts, self.types)
            self._den_cache[t] = den
            return den

    def param_dens(self, op: n.Decl) -> list[TypeDen]:
        return [self.den_of(p.type) for p in op.params]

    def result_den(self, op: n.Decl) -> TypeDen:
        if isinstance(op, (n.FunDecl, n.ProcDecl)):
            return self.den_of(op.result)
        return BOOL

    def type_of(self, e: n.Expr) -> TypeDen:
        return self.expr_types[id(e)]


def _const_int(e: n.Expr, consts: Mapping[str, int]) -> int:
    if isinstance(e, n.IntLit):
        return e.value
    if isinstance(e, n.Var):
        if e.name not in consts:
            raise TypeCheckError(f"{e.name} is not a constant", e.span)
        return consts[e.name]
    if isinstance(e, n.Unary) and e.op == "-":
        return -_const_int(e.operand, consts)
    if isinstance(e, n.Binary) and e.op in ("+", "-", "⋅", "/", "%"):
        a, b = _const_int(e.left, consts), _const_int(e.right, consts)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "⋅":
            return a * b
        if b == 0:
            raise TypeCheckError("division by zero in constant expression", e.span)
        q = int_quotient(a, b)
        return q if e.op == "/" else a - b * q
    raise TypeCheckError("type bounds must be constant integer expressions", e.span)


def int_quotient(a: int, b: int) -> int:
    """Quotient truncated toward zero."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _resolve_type(t: n.TypeExpr, consts, types) -> TypeDen:
    if isinstance(t, n.BoolType):
        return BOOL
    if isinstance(t, n.NatType):
        if t.bound is None:
            raise TypeCheckError("unbounded ℕ may only type a val declaration", t.span)
        hi = _const_int(t.bound, consts)
        if hi < 0:
            raise EmptyInterval(f"ℕ[{hi}] is empty", t.span)
        return IntDen(0, hi)
    if isinstance(t, n.IntType):
        if t.lo is None:
            raise TypeCheckError("unbounded ℤ may only type a val declaration", t.span)
        lo, hi = _const_int(t.lo, consts), _const_int(t.hi, consts)
        if lo > hi:
            raise EmptyInterval(f"ℤ[{lo},{hi}] is empty", t.span)
        return IntDen(lo, hi)
    if isinstance(t, n.ArrayType):
        length = _const_int(t.length, consts)
        if length < 0:
            raise EmptyInterval(f"array length {length} is negative", t.span)
        return ArrayDen(length, _resolve_type(t.elem, consts, types))
    if isinstance(t, n.SetType):
        return SetDen(_resolve_type(t.elem, consts, types))
    if isinstance(t, n.TupleType):
        return TupleDen(tuple(_resolve_type(c, consts, types) for c in t.components))
    if isinstance(t, n.NamedType):
        if t.name not in types:
            raise TypeCheckError(f"unknown type {t.name}", t.span)
        return types[t.name]
    raise TypeCheckError(f"unsupported type {type(t).__name__}", t.span)


def modified_variables(body: n.Command) -> list[str]:
    """Variables assigned in ``body`` that were declared outside it, in first-assignment order."""
    assigned, local = [], set()
    for node in n.walk(body):
        if isinstance(node, n.VarDecl):
            local.add(node.name)
        elif isinstance(node, n.For):
            local.add(node.init.name)
        elif isinstance(node, n.Assign) and node.name not in assigned:
            assigned.append(node.name)
    return [v for v in assigned if v not in local]


class _Checker:
    def __init__(self, typed: TypedSpec):
        self.typed = typed

    def fail(self, msg, node):
        raise TypeCheckError(msg, node.span)

    def den(self, t: n.TypeExpr) -> TypeDen:
        return self.typed.den_of(t)

    def record(self, e: n.Expr, den: TypeDen) -> TypeDen:
        self.typed.expr_types[id(e)] = den
        return den

    def expect_bool(self, e, scope):
        if not isinstance(self.expr(e, scope), BoolDen):
            self.fail("expected a boolean formula", e)

    def expect_int(self, e, scope) -> IntDen:
        d = self.expr(e, scope)
        if not isinstance(d, IntDen):
            self.fail("expected an integer expression", e)
        return d

    def check_name(self, name, node, allow_reserved=False):
        if not allow_reserved and name.startswith(RESERVED_PREFIX):
            self.fail(f"names starting with {RESERVED_PREFIX!r} are reserved", node)

    # -- expressions --------------------------------------------------------

    def expr(self, e: n.Expr, scope: dict) -> TypeDen:
        method = getattr(self, "e_" + type(e).__name__)
        return self.record(e, method(e, scope))

    def e_IntLit(self, e, scope):
        return IntDen(e.value, e.value)

    def e_BoolLit(self, e, scope):
        return BOOL

    def e_Var(self, e, scope):
        if e.name in scope:
            return scope[e.name]
        if e.name in self.typed.consts:
            c = self.typed.consts[e.name]
            return IntDen(c, c)
        self.fail(f"unknown variable {e.name}", e)

    def e_Unary(self, e, scope):
        if e.op == "¬":
            self.expect_bool(e.operand, scope)
            return BOOL
        d = self.expect_int(e.operand, scope)
        return IntDen(-d.hi, -d.lo)

    def e_Binary(self, e, scope):
        op = e.op
        if op in ("∧", "∨", "⇒", "⇔"):
            self.expect_bool(e.left, scope)
            self.expect_bool(e.right, scope)
            return BOOL
        if op in ("=", "≠"):
            a, b = self.expr(e.left, scope), self.expr(e.right, scope)
            if not compatible(a, b):
                self.fail(f"cannot compare {a} with {b}", e)
            return BOOL
        if op in ("<", "≤", ">", "≥"):
            self.expect_int(e.left, scope)
            self.expect_int(e.right, scope)
            return BOOL
        if op == "∈":
            a, s = self.expr(e.left, scope), self.expr(e.right, scope)
            if not isinstance(s, SetDen) or not compatible(a, s.elem):
                self.fail("∈ needs an element and a set of matching type", e)
            return BOOL
        if op in ("⊆", "∪", "∩", "\\"):
            a, b = self.expr(e.left, scope), self.expr(e.right, scope)
            if not (isinstance(a, SetDen) and isinstance(b, SetDen) and compatible(a, b)):
                self.fail(f"{op} needs two sets of matching type", e)
            return BOOL if op == "⊆" else join(a, b)
        a, b = self.expect_int(e.left, scope), self.expect_int(e.right, scope)
        if op == "+":
            return IntDen(a.lo + b.lo, a.hi + b.hi)
        if op == "-":
            return IntDen(a.lo - b.hi, a.hi - b.lo)
        if op == "⋅":
            corners = [x * y for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
            return IntDen(min(corners), max(corners))
        bound = max(abs(a.lo), abs(a.hi))
        if op == "%":
            bound = min(bound, max(abs(b.lo), abs(b.hi), 1) - 1)
        return IntDen(-bound, bound)

    def binders(self, binders, scope):
        inner = dict(scope)
        for b in binders:
            self.check_name(b.name, b)
            inner[b.name] = self.den(b.type)
        return inner

    def e_Quant(self, e, scope):
        self.expect_bool(e.body, self.binders(e.binders, scope))
        return BOOL

    def e_Choose(self, e, scope):
        inner = self.binders([e.binder], scope)
        self.expect_bool(e.cond, inner)
        return inner[e.binder.name]

    def e_Let(self, e, scope):
        inner = dict(scope)
        for b in e.bindings:
            inner[b.name] = self.expr(b.value, inner)
        return self.expr(e.body, inner)

    def e_LetPar(self, e, scope):
        inner = dict(scope)
        names = set()
        for b in e.bindings:
            if b.name in names:
                self.fail(f"{b.name} bound twice in letpar", b)
            names.add(b.name)
            inner[b.name] = self.expr(b.value, scope)
        return self.expr(e.body, inner)

    def e_IfExpr(self, e, scope):
        self.expect_bool(e.cond, scope)
        a, b = self.expr(e.then, scope), self.expr(e.orelse, scope)
        if not compatible(a, b):
            self.fail("branches of a conditional have different types", e)
        return join(a, b)

    def e_Call(self, e, scope):
        op = self.typed.ops.get(e.name)
        if op is None:
            self.fail(f"unknown operation {e.name} (operations must be declared before use)", e)
        if len(e.args) != len(op.params):
            self.fail(f"{e.name} takes {len(op.params)} argument(s), got {len(e.args)}", e)
        for arg, p in zip(e.args, op.params):
            a = self.expr(arg, scope)
            if not compatible(a, self.den(p.type)):
                self.fail(f"argument {p.name} of {e.name} expects {self.den(p.type)}, got {a}", arg)
        return self.typed.result_den(op)

    def e_Index(self, e, scope):
        a = self.expr(e.array, scope)
        if not isinstance(a, ArrayDen):
            self.fail("indexing a non-array", e)
        self.expect_int(e.index, scope)
        return a.elem

    def e_Update(self, e, scope):
        a = self.expr(e.array, scope)
        if not isinstance(a, ArrayDen):
            self.fail("updating a non-array", e)
        self.expect_int(e.index, scope)
        v = self.expr(e.value, scope)
        if not compatible(v, a.elem):
            self.fail("array update with a value of the wrong type", e)
        return a

    def e_TupleExpr(self, e, scope):
        return TupleDen(tuple(self.expr(i, scope) for i in e.items))

    def e_Proj(self, e, scope):
        t = self.expr(e.tuple, scope)
        if not isinstance(t, TupleDen) or not 1 <= e.index <= len(t.components):
            self.fail(f"no component {e.index} in {t}", e)
        return t.components[e.index - 1]

    def e_SetLit(self, e, scope):
        den = self.expr(e.items[0], scope)
        for item in e.items[1:]:
            d = self.expr(item, scope)
            if not compatible(den, d):
                self.fail("set elements of different types", item)
            den = join(den, d)
        return SetDen(den)

    def e_EmptySet(self, e, scope):
        return SetDen(self.den(e.elem))

    # -- commands -----------------------------------------------------------

    def command(self, c: n.Command, scope: dict, mutable: set):
        """Check ``c``; VarDecls extend ``scope``/``mutable`` in place."""
        if isinstance(c, n.VarDecl):
            self.declare(c.name, c.type, c.init, c, scope, mutable)
        elif isinstance(c, n.Assign):
            if c.name not in mutable:
                self.fail(f"{c.name} is not an assignable variable", c)
            den = scope[c.name]
            for idx in c.indices:
                if not isinstance(den, ArrayDen):
                    self.fail("indexing a non-array", c)
                self.expect_int(idx, scope)
                den = den.elem
            v = self.expr(c.value, scope)
            if not compatible(v, den):
                self.fail(f"cannot assign {v} to {c.name} of type {den}", c)
        elif isinstance(c, n.Seq):
            inner, inner_mut = dict(scope), set(mutable)
            for cmd in c.commands:
                self.command(cmd, inner, inner_mut)
        elif isinstance(c, n.If):
            self.expect_bool(c.cond, scope)
            self.command(c.then, scope, mutable)
            if c.orelse is not None:
                self.command(c.orelse, scope, mutable)
        elif isinstance(c, n.While):
            self.loop(c.cond, c.invariants, c.decreases, c.body, None, scope, mutable)
        elif isinstance(c, n.For):
            inner, inner_mut = dict(scope), set(mutable)
            init = c.init
            self.declare(init.name, init.type, init.init, init, inner, inner_mut)
            self.loop(c.cond, c.invariants, c.decreases, c.body, c.update, inner, inner_mut)
        elif isinstance(c, n.Assert):
            self.expect_bool(c.formula, scope)
        elif isinstance(c, n.CallCmd):
            self.expr(c.call, scope)
        else:
            self.fail(f"unsupported command {type(c).__name__}", c)

    def declare(self, name, typ, init, node, scope, mutable):
        self.check_name(name, node)
        if name in scope or name == "result":
            self.fail(f"variable {name} is already declared", node)
        den = self.den(typ)
        v = self.expr(init, scope)
        if not compatible(v, den):
            self.fail(f"cannot initialize {name} of type {den} with {v}", node)
        scope[name] = den
        mutable.add(name)

    def loop(self, cond, invariants, decreases, body, update, scope, mutable):
        self.expect_bool(cond, scope)
        modified = modified_variables(n.Seq((body,) + ((update,) if update else ())))
        inv_scope = dict(scope)
        for v in modified:
            if v in scope:
                inv_scope[RESERVED_PREFIX + v] = scope[v]
        for inv in invariants:
            self.expect_bool(inv, inv_scope)
        if decreases is not None:
            self.expect_int(decreases, scope)
        self.command(body, scope, mutable)
        if update is not None:
            self.command(update, scope, mutable)

    # -- declarations -------------------------------------------------------

    def params(self, op) -> dict:
        scope = {}
        for p in op.params:
            self.check_name(p.name, p)
            if p.name in scope:
                self.fail(f"duplicate parameter {p.name}", p)
            scope[p.name] = self.den(p.type)
        return scope

    def operation(self, op: n.Decl):
        scope = self.params(op)
        for r in op.requires:
            self.expect_bool(r, scope)
        if isinstance(op, (n.PredDecl, n.TheoremDecl)):
            self.expect_bool(op.body, scope)
        elif isinstance(op, n.FunDecl):
            res = self.den(op.result)
            if not compatible(self.expr(op.body, scope), res):
                self.fail(f"body of {op.name} does not have type {res}", op.body)
        elif isinstance(op, n.ProcDecl):
            res = self.den(op.result)
            ens_scope = dict(scope, result=res)
            for e in op.ensures:
                self.expect_bool(e, ens_scope)
            # the return expression sees the body's top-level variables
            top, mut = dict(scope), set()
            for c in op.body.commands:
                self.command(c, top, mut)
            if not compatible(self.expr(op.ret, top), res):
                self.fail(f"{op.name} returns a value not of type {res}", op.ret)


def resolve(spec: n.Spec, consts: Mapping[str, int] | None = None) -> TypedSpec:
    """Bind constants, evaluate type expressions and type-check ``spec``.

    Bindings in ``consts`` override in-file values of ``val`` declarations.
    """
    given = dict(consts or {})
    declared_vals = {d.name for d in spec.decls if isinstance(d, n.ValDecl)}
    unknown = sorted(set(given) - declared_vals)
    if unknown:
        raise SemaError(f"no val declaration for constant(s) {', '.join(unknown)}")
    typed = TypedSpec(spec, {}, {}, {})
    checker = _Checker(typed)
    seen = {"const": set(), "type": set(), "op": set()}
    for d in spec.decls:
        space = ("const" if isinstance(d, n.ValDecl) else
                 "type" if isinstance(d, n.TypeDecl) else "op")
        if d.name in seen[space]:
            raise TypeCheckError(f"{d.name} is declared twice", d.span)
        seen[space].add(d.name)
        if isinstance(d, n.ValDecl):
            if d.name in given:
                value = given[d.name]
            elif d.value is not None:
                value = _const_int(d.value, typed.consts)
            else:
                raise UnboundConstant(d.name, d.span)
            if isinstance(d.type, n.NatType) and value < 0:
                raise TypeCheckError(f"constant {d.name} must be a natural number", d.span)
            if d.type is not None and not isinstance(d.type, (n.NatType, n.IntType)):
                raise TypeCheckError(f"constant {d.name} must be an integer", d.span)
            typed.consts[d.name] = value
        elif isinstance(d, n.TypeDecl):
            typed.types[d.name] = _resolve_type(d.type, typed.consts, typed.types)
        else:
            checker.operation(d)
            typed.ops[d.name] = d
    return typed
