"""Verification conditions for procedures via weakest preconditions.

Each condition is an ordinary theorem over the procedure's parameters, so it
can be checked like any other operation. Loops are abstracted by their
invariants: ``wp(while b inv I, Q)`` is

    letpar old_v = v, ... in (∀v:T, .... ((I ∧ ¬b) ⇒ Q))

where ``v`` ranges over the variables the loop modifies. Separate conditions
cover invariant initialization and preservation, termination, and the
preconditions of every called operation.

Conditions about a program point are phrased with a *context*: the wrapper
``ctx(F)`` that makes ``F`` a statement about every state reaching that
point (the wp of the code before it, branch guards, and loop abstraction).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import errors as E
from .check import CheckConfig, RunReport, run_operation
from .eval import Evaluator
from .errors import Span
from .sema import RESERVED_PREFIX, TypedSpec, modified_variables, resolve
from .syntax import nodes as n
from .syntax.printer import pretty_print


class VcCategory(enum.Enum):
    RESULT_CORRECT = ("CorrOp", "Is the result correct?")
    INVARIANT_INIT = ("InvInit", "Does the loop invariant initially hold?")
    MEASURE_NONNEG = ("MeasNN", "Is the loop measure non-negative?")
    INVARIANT_PRESERVED = ("InvPres", "Is the loop invariant preserved?")
    MEASURE_DECREASED = ("MeasDec", "Is the loop measure decreased?")
    OP_PRECONDITION = ("PreOp", "Is the precondition of the operation satisfied?")

    @property
    def tag(self) -> str:
        return self.value[0]

    @property
    def question(self) -> str:
        return self.value[1]


@dataclass
class VerificationCondition:
    id: str
    category: VcCategory
    theorem: n.TheoremDecl
    procedure: str
    goal_span: Span
    contributing_spans: list[Span] = field(default_factory=list)
    status: str = "unchecked"

    @property
    def question(self) -> str:
        return self.category.question

    @property
    def text(self) -> str:
        return pretty_print(self.theorem)


@dataclass
class WpResult:
    formula: n.Expr
    side_conditions: list[VerificationCondition] = field(default_factory=list)
    contributing_spans: list[Span] = field(default_factory=list)


Wrap = Callable[[n.Expr], n.Expr]


@dataclass(frozen=True)
class _Ctx:
    wrap: Wrap
    spans: tuple[Span, ...] = ()

    def then(self, inner: Wrap, spans=()) -> "_Ctx":
        outer = self.wrap
        return _Ctx(lambda f: outer(inner(f)), self.spans + tuple(spans))


_TOP = _Ctx(lambda f: f)


# --- formula builders -----------------------------------------------------

def _span(*nodes) -> Span:
    spans = [x.span for x in nodes if x is not None]
    out = spans[0]
    for s in spans[1:]:
        out = out.join(s)
    return out


def _implies(a, b):
    return n.Binary("⇒", a, b, span=_span(a, b))


def _and(a, b):
    return n.Binary("∧", a, b, span=_span(a, b))


def _not(a):
    return n.Unary("¬", a, span=a.span)


def _let(bindings, body):
    return n.Let(tuple(bindings), body, span=body.span) if bindings else body


def _letpar(bindings, body):
    return n.LetPar(tuple(bindings), body, span=body.span) if bindings else body


def _forall(binders, body):
    return n.Quant("∀", tuple(binders), body, span=body.span) if binders else body


def _bind(name, value):
    return n.Binding(name, value, span=value.span)


def _var(name, span=E.NO_SPAN):
    return n.Var(name, span=span)


class VcGenerator:
    """Generates the conditions of the procedures of one specification."""

    def __init__(self, spec: n.Spec):
        self.spec = spec
        self.ops = {d.name: d for d in spec.operations()}
        self._taken = {x.name for x in n.walk(spec) if isinstance(x, (n.Var, n.Binder))}
        self._taken |= {d.name for d in spec.decls}
        self._fresh = 0
        self.type_decls = {d.name: d.type for d in spec.decls if isinstance(d, n.TypeDecl)}

    def fresh(self, base: str) -> str:
        while True:
            name = f"_{base}{self._fresh}"
            self._fresh += 1
            if name not in self._taken:
                self._taken.add(name)
                return name

    # -- weakest preconditions ---------------------------------------------

    def wp(self, c: n.Command, post: n.Expr, scope: dict) -> tuple[n.Expr, list[Span]]:
        """Formula and contributing spans; ``scope`` maps variables to type expressions."""
        if isinstance(c, n.Seq):
            inner = dict(scope)
            for cmd in c.commands:
                if isinstance(cmd, n.VarDecl):
                    inner[cmd.name] = cmd.type
            spans = []
            for cmd in reversed(c.commands):
                post, s = self.wp(cmd, post, inner)
                spans = s + spans
            return post, spans
        if isinstance(c, n.VarDecl):
            value, wraps = self._abstract(c.init)
            return wraps(self.bind(c.name, c.type, c.init, value, post, scope)), [c.span]
        if isinstance(c, n.Assign):
            value, wraps = self._abstract(c.value)
            idxs = []
            for i in c.indices:
                e, w = self._abstract(i)
                idxs.append(e)
                wraps = _compose(wraps, w)
            new = self._stored(_var(c.name, c.span), idxs, value)
            body = _let([_bind(c.name, new)], post)
            target = self.element_type(scope.get(c.name), len(idxs))
            guard = self.range_guard(target, c.value, value, scope)
            return wraps(_and(guard, body) if guard is not None else body), [c.span]
        if isinstance(c, n.If):
            cond, wraps = self._abstract(c.cond)
            f1, s1 = self.wp(c.then, post, scope)
            if c.orelse is not None:
                f2, s2 = self.wp(c.orelse, post, scope)
            else:
                f2, s2 = post, []
            body = _and(_implies(cond, f1), _implies(_not(cond), f2))
            return wraps(body), [c.cond.span] + s1 + s2
        if isinstance(c, n.Assert):
            self._no_proc_calls(c.formula)
            return _and(c.formula, post), [c.span]
        if isinstance(c, n.CallCmd):
            _, wraps = self._abstract(c.call)
            return wraps(post), [c.span]
        if isinstance(c, (n.While, n.For)):
            loop = _Loop(self, c, scope)
            formula = loop.enter(_forall(loop.binders, _implies(
                _and(loop.invariant, _not(loop.cond)), post)))
            if isinstance(c, n.For):
                value, wraps = self._abstract(c.init.init)
                formula = wraps(self.bind(c.init.name, c.init.type, c.init.init, value,
                                          formula, scope))
                return formula, [c.init.span] + loop.spans
            return formula, loop.spans
        raise E.UnsupportedConstruct(f"no wp rule for {type(c).__name__}", c.span)

    # -- value ranges ------------------------------------------------------

    def bind(self, name, typ, orig, value, body, scope):
        """``let name = value in body``, guarded by the range of ``typ``."""
        guard = self.range_guard(typ, orig, value, scope)
        body = _let([_bind(name, value)], body)
        return body if guard is None else _and(guard, body)

    def expand(self, t):
        while isinstance(t, n.NamedType) and t.name in self.type_decls:
            t = self.type_decls[t.name]
        return t

    def element_type(self, t, depth: int):
        for _ in range(depth):
            t = self.expand(t)
            if not isinstance(t, n.ArrayType):
                return None
            t = t.elem
        return t

    def _type_key(self, t) -> str | None:
        t = self.expand(t)
        if isinstance(t, n.ArrayType):
            return f"Array[{pretty_print(t.length)},{self._type_key(t.elem)}]"
        if isinstance(t, n.SetType):
            return f"Set[{self._type_key(t.elem)}]"
        if isinstance(t, n.TupleType):
            return "Tuple[" + ",".join(self._type_key(x) for x in t.components) + "]"
        return pretty_print(t) if t is not None else None

    def static_type(self, e: n.Expr, scope: dict):
        """Declared type that ``e``'s value is known to have, if any."""
        if isinstance(e, n.Var):
            return scope.get(e.name)
        if isinstance(e, n.Call):
            return getattr(self.ops.get(e.name), "result", None)
        if isinstance(e, n.Index):
            return self.element_type(self.static_type(e.array, scope), 1)
        if isinstance(e, n.IfExpr):
            a, b = self.static_type(e.then, scope), self.static_type(e.orelse, scope)
            if a is not None and self._type_key(a) == self._type_key(b):
                return a
        return None

    def range_guard(self, typ, orig: n.Expr, value: n.Expr, scope: dict):
        """Formula stating that ``value`` lies in ``typ``; None when trivially true.

        Values whose static type is ``typ`` itself need no guard.
        """
        if typ is None:
            return None
        known = self.static_type(orig, scope)
        if known is not None and self._type_key(known) == self._type_key(typ):
            return None
        return self._in_type(self.expand(typ), value)

    def _in_type(self, t, e):
        sp = e.span
        if isinstance(t, (n.NatType, n.IntType)):
            lo = n.IntLit(0, span=sp) if isinstance(t, n.NatType) else t.lo
            hi = t.bound if isinstance(t, n.NatType) else t.hi
            if hi is None:
                return None
            return _and(n.Binary("≤", lo, e, span=sp), n.Binary("≤", e, hi, span=sp))
        if isinstance(t, n.ArrayType):
            k = self.fresh("k")
            inner = self._in_type(self.expand(t.elem), n.Index(e, _var(k, sp), span=sp))
            if inner is None:
                return None
            binder = n.Binder(k, n.NatType(t.length, span=sp), span=sp)
            bounded = n.Binary("<", _var(k, sp), t.length, span=sp)
            return _forall([binder], _implies(bounded, inner))
        if isinstance(t, n.TupleType):
            parts = [self._in_type(self.expand(c), n.Proj(e, i + 1, span=sp))
                     for i, c in enumerate(t.components)]
            parts = [x for x in parts if x is not None]
            return n.conj(parts, sp) if parts else None
        return None  # booleans and sets

    def _stored(self, target, idxs, value):
        if not idxs:
            return value
        head = n.Index(target, idxs[0], span=target.span)
        inner = self._stored(head, idxs[1:], value)
        return n.Update(target, idxs[0], inner, span=target.span)

    def _no_proc_calls(self, e):
        for x in n.walk(e):
            if isinstance(x, n.Call) and isinstance(self.ops.get(x.name), n.ProcDecl):
                raise E.UnsupportedConstruct(
                    "procedure calls are supported only in plain command expressions", x.span)

    def _abstract(self, e: n.Expr) -> tuple[n.Expr, Wrap]:
        """Replace procedure calls in ``e`` by fresh result variables.

        The wrapper quantifies each variable over the callee's result type,
        constrained by the callee's postcondition.
        """
        if isinstance(e, n.Call):
            args, wraps = [], (lambda f: f)
            for a in e.args:
                x, w = self._abstract(a)
                args.append(x)
                wraps = _compose(wraps, w)
            op = self.ops[e.name]
            call = n.Call(e.name, tuple(args), span=e.span)
            if not isinstance(op, n.ProcDecl):
                return call, wraps
            r = self.fresh("r")
            binder = n.Binder(r, op.result, span=e.span)
            bindings = [_bind(p.name, a) for p, a in zip(op.params, args)]
            bindings.append(_bind("result", _var(r, e.span)))
            ens = _letpar(bindings, n.conj(op.ensures, e.span)) if op.ensures else None

            def wrap(f, binder=binder, ens=ens):
                return _forall([binder], f if ens is None else _implies(ens, f))
            return _var(r, e.span), _compose(wraps, wrap)
        if isinstance(e, n.Unary) and e.op != "¬":
            x, w = self._abstract(e.operand)
            return n.Unary(e.op, x, span=e.span), w
        if isinstance(e, n.Binary) and e.op not in ("∧", "∨", "⇒", "⇔"):
            a, wa = self._abstract(e.left)
            b, wb = self._abstract(e.right)
            return n.Binary(e.op, a, b, span=e.span), _compose(wa, wb)
        if isinstance(e, (n.Index, n.Update, n.TupleExpr, n.Proj, n.SetLit)):
            parts = {}
            wraps = lambda f: f
            for name in ("array", "index", "value", "tuple"):
                if isinstance(getattr(e, name, None), n.Expr):
                    parts[name], w = self._abstract(getattr(e, name))
                    wraps = _compose(wraps, w)
            if hasattr(e, "items"):
                items = []
                for i in e.items:
                    x, w = self._abstract(i)
                    items.append(x)
                    wraps = _compose(wraps, w)
                parts["items"] = tuple(items)
            return type(e)(**{**_fields(e), **parts}, span=e.span), wraps
        self._no_proc_calls(e)
        return e, lambda f: f

    # -- precondition obligations ------------------------------------------

    def call_obligations(self, e: n.Expr, guard: Wrap = lambda f: f):
        """``(call, formula)`` for every call in ``e`` whose callee has a precondition."""
        out = []
        self._obligations(e, guard, out)
        return out

    def _obligations(self, e, g, out):
        if isinstance(e, n.Binary) and e.op in ("∧", "∨", "⇒"):
            self._obligations(e.left, g, out)
            left = e.left if e.op != "∨" else _not(e.left)
            self._obligations(e.right, _compose(g, lambda f, a=left: _implies(a, f)), out)
        elif isinstance(e, n.IfExpr):
            self._obligations(e.cond, g, out)
            self._obligations(e.then, _compose(g, lambda f: _implies(e.cond, f)), out)
            self._obligations(e.orelse, _compose(g, lambda f: _implies(_not(e.cond), f)), out)
        elif isinstance(e, n.Quant):
            self._obligations(e.body, _compose(g, lambda f: _forall(e.binders, f)), out)
        elif isinstance(e, n.Choose):
            self._obligations(e.cond, _compose(g, lambda f: _forall([e.binder], f)), out)
        elif isinstance(e, n.Let):
            for i, b in enumerate(e.bindings):
                done = e.bindings[:i]
                self._obligations(b.value, _compose(g, lambda f, d=done: _let(d, f)), out)
            self._obligations(e.body, _compose(g, lambda f: _let(e.bindings, f)), out)
        elif isinstance(e, n.LetPar):
            for b in e.bindings:
                self._obligations(b.value, g, out)
            self._obligations(e.body, _compose(g, lambda f: _letpar(e.bindings, f)), out)
        else:
            if isinstance(e, n.Call):
                op = self.ops[e.name]
                if op.requires:
                    bindings = [_bind(p.name, a) for p, a in zip(op.params, e.args)]
                    out.append((e, g(_letpar(bindings, n.conj(op.requires, e.span)))))
            for child in n.children(e):
                if isinstance(child, n.Expr):
                    self._obligations(child, g, out)

    # -- generation --------------------------------------------------------

    def generate(self, proc: n.ProcDecl) -> list[VerificationCondition]:
        seq = [d.name for d in self.spec.operations()].index(proc.name)
        return _ProcVcs(self, proc, seq).run()


def _compose(outer: Wrap, inner: Wrap) -> Wrap:
    return lambda f: outer(inner(f))


def _fields(node):
    return {k: getattr(node, k) for k in node.__dataclass_fields__ if k != "span"}


class _Loop:
    """Shared pieces of one while/for loop."""

    def __init__(self, gen: VcGenerator, c, scope: dict):
        self.c = c
        inner = dict(scope)
        if isinstance(c, n.For):
            inner[c.init.name] = c.init.type
            self.body = n.Seq(c.body.commands + (c.update,), span=c.body.span)
        else:
            self.body = c.body
        self.scope = inner
        gen._no_proc_calls(c.cond)
        for x in c.invariants + ((c.decreases,) if c.decreases is not None else ()):
            gen._no_proc_calls(x)
        self.modified = [v for v in modified_variables(self.body) if v in inner]
        self.binders = [n.Binder(v, inner[v], span=c.span) for v in self.modified]
        self.snapshot = [_bind(RESERVED_PREFIX + v, _var(v, c.span)) for v in self.modified]
        self.cond = c.cond
        self.invariant = n.conj(c.invariants, c.cond.span)
        self.spans = [c.cond.span] + [i.span for i in c.invariants]

    def enter(self, f):
        return _letpar(self.snapshot, f)

    def each_state(self, f):
        """``f`` for every state satisfying the invariant's variable quantification."""
        return self.enter(_forall(self.binders, f))


class _ProcVcs:
    def __init__(self, gen: VcGenerator, proc: n.ProcDecl, seq: int):
        self.gen, self.proc, self.seq = gen, proc, seq
        self.vcs: list[VerificationCondition] = []
        self.counts: dict[VcCategory, int] = {}

    def emit(self, cat, formula, goal, spans, requires=None):
        idx = self.counts.get(cat, 0)
        self.counts[cat] = idx + 1
        name = f"_{self.proc.name}_{self.seq}_{cat.tag}{idx}"
        thm = n.TheoremDecl(name, self.proc.params,
                            self.proc.requires if requires is None else requires,
                            formula, span=self.proc.span)
        vc = VerificationCondition(name, cat, thm, self.proc.name, goal, _dedup(spans))
        self.vcs.append(vc)
        return vc

    def preops(self, e, ctx: _Ctx, guard: Wrap = lambda f: f, requires=None):
        for call, formula in self.gen.call_obligations(e, guard):
            self.emit(VcCategory.OP_PRECONDITION, ctx.wrap(formula), call.span,
                      list(ctx.spans), requires)

    def run(self):
        p = self.proc
        for k, r in enumerate(p.requires):
            done = p.requires[:k]
            self.preops(r, _TOP, lambda f, d=done: _implies(n.conj(d), f) if d else f, requires=())
        scope = {q.name: q.type for q in p.params}
        ctx = self.visit(p.body, _TOP, scope)
        self.preops(p.ret, ctx)
        if isinstance(p.body, n.Seq):
            scope.update((c.name, c.type) for c in p.body.commands if isinstance(c, n.VarDecl))
        result = [_bind("result", p.ret)]
        in_range = self.gen.range_guard(p.result, p.ret, p.ret, scope)
        for k, q in enumerate(p.ensures):
            done = p.ensures[:k]
            guard = lambda f, d=done: _let(result, _implies(n.conj(d), f) if d else f)
            self.preops(q, ctx, guard)
        goal = _let(result, n.conj(p.ensures, p.ret.span))
        if in_range is not None:
            goal = _and(in_range, goal)
        goal_span = _span(*p.ensures) if p.ensures else p.ret.span
        corr = self.emit(VcCategory.RESULT_CORRECT, ctx.wrap(goal), goal_span,
                         list(ctx.spans) + [p.ret.span])
        self.vcs.remove(corr)
        return [corr] + self.vcs

    def visit(self, c: n.Command, ctx: _Ctx, scope: dict) -> _Ctx:
        """Emit the conditions inside ``c`` and return the context after it."""
        if isinstance(c, n.Seq):
            inner = dict(scope)
            for cmd in c.commands:
                if isinstance(cmd, n.VarDecl):
                    inner[cmd.name] = cmd.type
                ctx = self.visit(cmd, ctx, inner)
            return ctx
        if isinstance(c, n.VarDecl):
            self.preops(c.init, ctx)
        elif isinstance(c, n.Assign):
            for i in c.indices:
                self.preops(i, ctx)
            self.preops(c.value, ctx)
        elif isinstance(c, (n.Assert, n.CallCmd)):
            self.preops(c.formula if isinstance(c, n.Assert) else c.call, ctx)
        elif isinstance(c, n.If):
            self.preops(c.cond, ctx)
            cond, wraps = self.gen._abstract(c.cond)
            span = (c.cond.span,)
            self.visit(c.then, ctx.then(_compose(wraps, lambda f: _implies(cond, f)), span), scope)
            if c.orelse is not None:
                self.visit(c.orelse,
                           ctx.then(_compose(wraps, lambda f: _implies(_not(cond), f)), span),
                           scope)
        elif isinstance(c, (n.While, n.For)):
            self.loop(c, ctx, scope)
        formula_spans = []

        def after(f):
            formula, spans = self.gen.wp(c, f, scope)
            formula_spans[:] = spans
            return formula
        # spans of the wp derivation are independent of the postcondition
        after(n.BoolLit(True))
        return ctx.then(after, formula_spans)

    def loop(self, c, ctx: _Ctx, scope: dict):
        if isinstance(c, n.For):
            self.visit(c.init, ctx, scope)
            value, wraps = self.gen._abstract(c.init.init)
            bind = lambda f: self.gen.bind(c.init.name, c.init.type, c.init.init, value, f, scope)
            ctx = ctx.then(_compose(wraps, bind), [c.init.span])
        loop = _Loop(self.gen, c, scope)
        entry = ctx.then(loop.enter)
        for k, inv in enumerate(c.invariants):
            self.emit(VcCategory.INVARIANT_INIT, entry.wrap(inv), inv.span, list(ctx.spans))
        states = ctx.then(loop.each_state, [c.cond.span])
        for k, inv in enumerate(c.invariants):
            done = c.invariants[:k]
            self.preops(inv, states, lambda f, d=done: _implies(n.conj(d), f) if d else f)
        holds = lambda f: _implies(loop.invariant, f) if c.invariants else f
        inv_spans = [i.span for i in c.invariants]
        if c.decreases is not None:
            d = c.decreases
            self.preops(d, states, holds)
            nonneg = n.Binary("≥", d, n.IntLit(0, span=d.span), span=d.span)
            self.emit(VcCategory.MEASURE_NONNEG, states.wrap(holds(nonneg)), d.span,
                      list(states.spans) + inv_spans)
        self.preops(c.cond, states, holds)
        entered = states.then(lambda f: _implies(_and(loop.invariant, c.cond), f),
                              inv_spans)
        for k, inv in enumerate(c.invariants):
            f, spans = self.gen.wp(loop.body, inv, loop.scope)
            self.emit(VcCategory.INVARIANT_PRESERVED, entered.wrap(f), inv.span,
                      list(entered.spans) + spans)
        if c.decreases is not None:
            d = c.decreases
            d0 = self.gen.fresh("d")
            smaller = n.Binary("<", d, _var(d0, d.span), span=d.span)
            f, spans = self.gen.wp(loop.body, smaller, loop.scope)
            self.emit(VcCategory.MEASURE_DECREASED, entered.wrap(_let([_bind(d0, d)], f)),
                      d.span, list(entered.spans) + spans)
        self.visit(loop.body, entered, loop.scope)


def _dedup(spans):
    seen, out = set(), []
    for s in spans:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


# --- public API ------------------------------------------------------------

def wp(c: n.Command, post: n.Expr, spec: n.Spec | None = None,
       var_types: Mapping[str, n.TypeExpr] | None = None) -> WpResult:
    """Weakest precondition of ``c`` for ``post``.

    ``var_types`` gives the declared types of variables in scope before
    ``c`` (needed to quantify over loop-modified variables). Side conditions
    are the loop and precondition obligations inside ``c``, stated without
    any surrounding context.
    """
    gen = VcGenerator(spec or n.Spec(()))
    scope = dict(var_types or {})
    formula, spans = gen.wp(c, post, scope)
    stub = n.ProcDecl("_wp", (), n.BoolType(), (), (), n.Seq(()), n.BoolLit(True))
    collector = _ProcVcs(gen, stub, 0)
    collector.visit(c, _TOP, scope)
    return WpResult(formula, collector.vcs, _dedup(spans))


def generate_vcs(spec: n.Spec, proc: str | n.ProcDecl) -> list[VerificationCondition]:
    """All conditions of one procedure, the correctness condition first."""
    if isinstance(proc, str):
        decl = spec.lookup(proc)
        if not isinstance(decl, n.ProcDecl):
            raise E.SemaError(f"no procedure named {proc}")
        proc = decl
    return VcGenerator(spec).generate(proc)


def generate_all(spec: n.Spec) -> list[VerificationCondition]:
    gen = VcGenerator(spec)
    return [vc for d in spec.operations() if isinstance(d, n.ProcDecl)
            for vc in gen.generate(d)]


def vc_spec(spec: n.Spec, vcs) -> n.Spec:
    """``spec`` extended with the conditions as theorem declarations."""
    return n.Spec(spec.decls + tuple(vc.theorem for vc in vcs), span=spec.span)


def check_vcs(vcs: list[VerificationCondition], typed: TypedSpec,
              cfg: CheckConfig | None = None, emit=None) -> list[RunReport]:
    """Check every condition in the model of ``typed``; updates ``status``."""
    extended = resolve(vc_spec(typed.spec, vcs), typed.consts)
    base = cfg or CheckConfig("")
    # one evaluator for all conditions: they share one function memo
    ev = Evaluator(extended, base.mode, timeout_ms=base.timeout_ms)
    reports = []
    for vc in vcs:
        run = CheckConfig(vc.id, base.mode, base.silent, base.timeout_ms, base.workers,
                          base.fail_fast)
        report = run_operation(extended, run, emit, ev)
        vc.status = "valid" if report.ok else "invalid"
        reports.append(report)
    return reports


def vc_to_json(vc: VerificationCondition) -> dict:
    return {
        "id": vc.id,
        "procedure": vc.procedure,
        "category": vc.category.name,
        "tag": vc.category.tag,
        "question": vc.question,
        "theorem": vc.text,
        "goal_span": [vc.goal_span.start, vc.goal_span.end],
        "contributing_spans": [[s.start, s.end] for s in vc.contributing_spans],
        "status": vc.status,
    }
