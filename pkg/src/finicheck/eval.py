"""Evaluation of expressions and execution of procedure bodies.

Two modes exist. ``Mode.DET`` follows a single outcome: every ``choose``
picks the first satisfying value in enumeration order. ``Mode.NONDET``
lazily enumerates every outcome; subexpressions that cannot be multi-valued
are still evaluated on the deterministic path.

Environments are plain dicts from names to values. Constants live in
``TypedSpec.consts`` and are consulted when a name is not bound locally.
Deterministic evaluation binds quantified variables by temporarily mutating
the dict and restoring it afterwards; nondeterministic evaluation copies.
"""

from __future__ import annotations

import enum
import itertools
import time
from typing import Iterator

from . import errors as E
from .sema import BOOL, RESERVED_PREFIX, TypedSpec, int_quotient, modified_variables
from .syntax import nodes as n
from .types import ArrayDen, contains, enumerate_values, format_value

_MISSING = object()


class Mode(enum.Enum):
    DET = "det"
    NONDET = "nondet"


def _truthy(v) -> bool:
    return v is True


class Evaluator:
    """Evaluates phrases of one TypedSpec.

    ``tracer`` receives procedure state changes and operation calls;
    ``recorder`` receives formula-evaluation events (deterministic mode
    only). Function results are memoized unless either hook is attached.
    """

    def __init__(self, typed: TypedSpec, mode: Mode = Mode.DET, *, tracer=None,
                 recorder=None, timeout_ms: int = 0):
        self.typed = typed
        self.mode = mode
        self.tracer = tracer
        self.recorder = recorder
        self.timeout_ms = timeout_ms
        self.deadline = None
        self.memo: dict | None = {} if tracer is None and recorder is None else None
        self._multi: dict[int, bool] = {}
        self._multi_ops: dict[str, bool] = {}
        self._modified: dict[int, list[str]] = {}
        self._assign_dens: dict[int, object] | None = None
        self._dispatch = {cls: getattr(self, "_v_" + cls.__name__) for cls in (
            n.IntLit, n.BoolLit, n.Var, n.Unary, n.Binary, n.Quant, n.Choose, n.Let,
            n.LetPar, n.IfExpr, n.Call, n.Index, n.Update, n.TupleExpr, n.Proj,
            n.SetLit, n.EmptySet)}

    # -- budget ---------------------------------------------------------------

    def start_clock(self):
        self.deadline = (time.monotonic() + self.timeout_ms / 1000) if self.timeout_ms else None

    def _tick(self, span, env):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise E.EvalTimeout(f"evaluation exceeded {self.timeout_ms} ms", span, env)

    # -- public entry points ------------------------------------------------

    def value(self, e: n.Expr, env: dict):
        """The deterministic value of ``e``."""
        return self._dispatch[type(e)](e, env)

    def outcomes(self, e: n.Expr, env: dict) -> Iterator:
        """All outcomes of ``e`` under the current mode, lazily."""
        if self.mode is Mode.DET or not self.is_multi(e):
            yield self.value(e, env)
        else:
            yield from self._nd(e, env)

    def holds(self, e: n.Expr, env: dict) -> bool:
        """Evaluate ``e`` in formula position (recorded as a tree node if recording)."""
        rec = self.recorder
        if rec is not None and rec.active and not _structured(e):
            return _truthy(rec.atom(e, env, lambda: self.value(e, env)))
        return _truthy(self.value(e, env))

    def call(self, op: n.Decl, args: tuple, span=None) -> Iterator:
        """Outcomes of applying ``op``; raises on contract violations."""
        if self.mode is Mode.DET or not self.op_is_multi(op):
            yield self._call_det(op, args, span)
        else:
            yield from self._call_nd(op, args, span)

    def admissible(self, op: n.Decl, args: tuple) -> bool:
        env = self._bind_params(op, args)
        return all(_truthy(v) for r in op.requires for v in self.outcomes(r, env))

    # -- lookups ------------------------------------------------------------

    def lookup(self, name, env, span):
        v = env.get(name, _MISSING)
        if v is _MISSING:
            v = self.typed.consts.get(name, _MISSING)
            if v is _MISSING:
                raise E.EvalError(f"unbound variable {name}", span, env)
        return v

    def _bind_params(self, op, args):
        return {p.name: a for p, a in zip(op.params, args)}

    def _check_range(self, value, den, span, env, what):
        if not contains(den, value):
            raise E.RangeViolation(f"{what} {format_value(value, den)} is not in {den}", span, env)

    # -- multi-valuedness ---------------------------------------------------

    def op_is_multi(self, op: n.Decl) -> bool:
        key = op.name
        if key not in self._multi_ops:
            self._multi_ops[key] = False  # guards against cycles
            parts = list(op.requires)
            if isinstance(op, n.ProcDecl):
                parts += [op.body, op.ret]
            else:
                parts.append(op.body)
            self._multi_ops[key] = any(self._contains_multi(p) for p in parts)
        return self._multi_ops[key]

    def _contains_multi(self, node) -> bool:
        for sub in n.walk(node):
            if isinstance(sub, n.Choose):
                return True
            if isinstance(sub, n.Call) and self.op_is_multi(self.typed.ops[sub.name]):
                return True
        return False

    def is_multi(self, e: n.Expr) -> bool:
        k = id(e)
        if k not in self._multi:
            self._multi[k] = self._contains_multi(e)
        return self._multi[k]

    # -- deterministic expression evaluation -------------------------------

    def _v_IntLit(self, e, env):
        return e.value

    def _v_BoolLit(self, e, env):
        return e.value

    def _v_Var(self, e, env):
        return self.lookup(e.name, env, e.span)

    def _v_Unary(self, e, env):
        if e.op == "¬":
            rec = self.recorder
            if rec is not None and rec.active:
                node = rec.open("¬", e, env)
                v = not self.holds(e.operand, env)
                return rec.close(node, v)
            return not self.holds(e.operand, env)
        return -self.value(e.operand, env)

    def _v_Binary(self, e, env):
        op = e.op
        rec = self.recorder
        if op in ("∧", "∨", "⇒", "⇔"):
            node = rec.open(op, e, env) if rec is not None and rec.active else None
            left = self.holds(e.left, env)
            if op == "∧":
                v = left and self.holds(e.right, env)
            elif op == "∨":
                v = left or self.holds(e.right, env)
            elif op == "⇒":
                v = (not left) or self.holds(e.right, env)
            else:
                v = left == self.holds(e.right, env)
            return rec.close(node, v) if node is not None else v
        return self._binary(op, self.value(e.left, env), self.value(e.right, env), e, env)

    def _binary(self, op, a, b, e, env):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "⋅":
            return a * b
        if op == "=":
            return a == b
        if op == "≠":
            return a != b
        if op == "<":
            return a < b
        if op == "≤":
            return a <= b
        if op == ">":
            return a > b
        if op == "≥":
            return a >= b
        if op in ("/", "%"):
            if b == 0:
                raise E.RangeViolation("division by zero", e.span, env)
            q = int_quotient(a, b)
            return q if op == "/" else a - b * q
        if op == "∈":
            return a in b
        if op == "⊆":
            return a <= b
        if op == "∪":
            return a | b
        if op == "∩":
            return a & b
        if op == "\\":
            return a - b
        raise E.EvalError(f"unknown operator {op}", e.span, env)

    def _binder_values(self, binders):
        dens = [self.typed.den_of(b.type) for b in binders]
        names = [b.name for b in binders]
        if len(binders) == 1:
            return names, ((v,) for v in enumerate_values(dens[0]))
        # product varies the last binder fastest, i.e. nested-loop order
        return names, itertools.product(*(list(enumerate_values(d)) for d in dens))

    def _v_Quant(self, e, env):
        names, combos = self._binder_values(e.binders)
        want = e.op == "∃"
        saved = [env.get(x, _MISSING) for x in names]
        rec = self.recorder
        node = rec.open(e.op, e, env) if rec is not None and rec.active else None
        result = not want
        try:
            for combo in combos:
                self._tick(e.span, env)
                for x, v in zip(names, combo):
                    env[x] = v
                if self.holds(e.body, env) == want:
                    result = want
                    break
        finally:
            _restore(env, names, saved)
        return rec.close(node, result) if node is not None else result

    def _v_Choose(self, e, env):
        name = e.binder.name
        saved = env.get(name, _MISSING)
        den = self.typed.den_of(e.binder.type)
        rec = self.recorder
        if rec is not None:
            rec.suspend()
        try:
            for v in enumerate_values(den):
                self._tick(e.span, env)
                env[name] = v
                if self.holds(e.cond, env):
                    return v
        finally:
            _restore(env, [name], [saved])
            if rec is not None:
                rec.resume()
        raise E.ChooseFailure(f"no value of {den} satisfies the choose condition", e.span, env)

    def _v_Let(self, e, env):
        names = [b.name for b in e.bindings]
        saved = [env.get(x, _MISSING) for x in names]
        rec = self.recorder
        node = rec.open("let", e, env) if rec is not None and rec.active else None
        try:
            for b in e.bindings:
                env[b.name] = self._plain(b.value, env)
            v = self.holds(e.body, env) if node is not None else self.value(e.body, env)
        finally:
            _restore(env, names, saved)
        return rec.close(node, v) if node is not None else v

    def _v_LetPar(self, e, env):
        names = [b.name for b in e.bindings]
        values = [self._plain(b.value, env) for b in e.bindings]
        saved = [env.get(x, _MISSING) for x in names]
        rec = self.recorder
        node = rec.open("letpar", e, env) if rec is not None and rec.active else None
        try:
            for x, v in zip(names, values):
                env[x] = v
            v = self.holds(e.body, env) if node is not None else self.value(e.body, env)
        finally:
            _restore(env, names, saved)
        return rec.close(node, v) if node is not None else v

    def _plain(self, e, env):
        """Evaluate a non-formula subterm without recording it."""
        rec = self.recorder
        if rec is None or not rec.active:
            return self.value(e, env)
        rec.suspend()
        try:
            return self.value(e, env)
        finally:
            rec.resume()

    def _v_IfExpr(self, e, env):
        rec = self.recorder
        if rec is not None and rec.active and self.typed.expr_types.get(id(e)) == BOOL:
            node = rec.open("if", e, env)
            branch = e.then if self.holds(e.cond, env) else e.orelse
            return rec.close(node, self.holds(branch, env))
        branch = e.then if self._plain(e.cond, env) else e.orelse
        return self.value(branch, env)

    def _v_Call(self, e, env):
        op = self.typed.ops[e.name]
        args = tuple(self._plain(a, env) for a in e.args)
        rec = self.recorder
        if rec is not None and rec.active:
            return rec.pred_call(op, args, e, env, lambda: self._call_det(op, args, e.span))
        return self._call_det(op, args, e.span)

    def _index(self, arr, i, span, env):
        if not 0 <= i < len(arr):
            raise E.RangeViolation(f"index {i} out of bounds for length {len(arr)}", span, env)
        return arr[i]

    def _v_Index(self, e, env):
        return self._index(self.value(e.array, env), self.value(e.index, env), e.span, env)

    def _v_Update(self, e, env):
        arr, i, v = self.value(e.array, env), self.value(e.index, env), self.value(e.value, env)
        self._index(arr, i, e.span, env)
        return arr[:i] + (v,) + arr[i + 1:]

    def _v_TupleExpr(self, e, env):
        return tuple(self.value(i, env) for i in e.items)

    def _v_Proj(self, e, env):
        return self.value(e.tuple, env)[e.index - 1]

    def _v_SetLit(self, e, env):
        return frozenset(self.value(i, env) for i in e.items)

    def _v_EmptySet(self, e, env):
        return frozenset()

    # -- operation calls ----------------------------------------------------

    def _call_det(self, op, args, span):
        memo = self.memo
        if memo is None or isinstance(op, n.ProcDecl):
            return self._invoke(op, args, span)
        key = (op.name, args)
        hit = memo.get(key)
        if hit is not None:
            if hit[0]:
                return hit[1]
            raise hit[1]
        try:
            v = self._invoke(op, args, span)
        except E.EvalError as err:
            memo[key] = (False, err)
            raise
        memo[key] = (True, v)
        return v

    def _invoke(self, op, args, span):
        tracer = self.tracer
        if tracer is None:
            return next(self._apply(op, args, span))
        tracer.enter_call(op, args)
        try:
            v = next(self._apply(op, args, span))
        except E.EvalError as err:
            tracer.exit_call(err)
            raise
        tracer.exit_call(v)
        return v

    def _call_nd(self, op, args, span):
        return self._apply(op, args, span)

    def _apply(self, op, args, span) -> Iterator:
        env = self._bind_params(op, args)
        for p, a in zip(op.params, args):
            self._check_range(a, self.typed.den_of(p.type), span, env, f"argument {p.name} =")
        for r in op.requires:
            for ok in self.outcomes(r, env):
                if not _truthy(ok):
                    raise E.PreconditionViolation(
                        f"call of {op.name} violates its precondition", span, env)
        if isinstance(op, n.ProcDecl):
            yield from self.run_procedure(op, env)
            return
        if isinstance(op, n.FunDecl):
            den = self.typed.den_of(op.result)
            for v in self.outcomes(op.body, env):
                self._check_range(v, den, op.body.span, env, f"result of {op.name}")
                yield v
            return
        rec = self.recorder
        if rec is not None and rec.active:
            yield self.holds(op.body, env)
            return
        yield from self.outcomes(op.body, env)

    def run_procedure(self, op: n.ProcDecl, env: dict) -> Iterator:
        """Execute a procedure body from parameter bindings ``env``; yields results."""
        den = self.typed.den_of(op.result)
        for state in self.execute(op.body, dict(env), scoped=False):
            for r in self.outcomes(op.ret, state):
                self._check_range(r, den, op.ret.span, state, "return value")
                post_env = dict(env, result=r)
                for q in op.ensures:
                    for ok in self.outcomes(q, post_env):
                        if not _truthy(ok):
                            raise E.PostconditionViolation(
                                f"result {format_value(r, den)} of {op.name} violates its postcondition",
                                q.span, post_env)
                yield r

    # -- commands -----------------------------------------------------------

    def execute(self, c: n.Command, state: dict, scoped: bool = True) -> Iterator[dict]:
        """Yield every state reachable by running ``c`` from ``state``."""
        if isinstance(c, n.Seq):
            yield from self._seq(c.commands, 0, state, scoped)
        elif isinstance(c, n.VarDecl):
            den = self.typed.den_of(c.type)
            for v in self.outcomes(c.init, state):
                self._check_range(v, den, c.span, state, f"value for {c.name}:")
                yield self._assigned(state, c.name, v, c)
        elif isinstance(c, n.Assign):
            yield from self._assign(c, state)
        elif isinstance(c, n.If):
            for cond in self.outcomes(c.cond, state):
                if cond:
                    yield from self.execute(c.then, state)
                elif c.orelse is not None:
                    yield from self.execute(c.orelse, state)
                else:
                    yield state
        elif isinstance(c, n.While):
            yield from self._loop(c, c.cond, c.invariants, c.decreases, c.body, None, state)
        elif isinstance(c, n.For):
            for s in self.execute(c.init, state):
                for out in self._loop(c, c.cond, c.invariants, c.decreases, c.body, c.update, s):
                    out = dict(out)
                    out.pop(c.init.name, None)
                    yield out
        elif isinstance(c, n.Assert):
            for ok in self.outcomes(c.formula, state):
                if not _truthy(ok):
                    raise E.AssertionViolation("assertion does not hold", c.span, state)
            yield state
        elif isinstance(c, n.CallCmd):
            for _ in self.outcomes(c.call, state):
                yield state
        else:
            raise E.UnsupportedConstruct(f"cannot execute {type(c).__name__}", c.span)

    def _seq(self, commands, i, state, scoped):
        if i == len(commands):
            if scoped:
                declared = [c.name for c in commands if isinstance(c, n.VarDecl)]
                if declared:
                    state = {k: v for k, v in state.items() if k not in declared}
            yield state
            return
        if self.mode is Mode.DET:
            # iterate rather than recurse to keep generator chains shallow
            for c in commands[i:]:
                state = next(iter(self.execute(c, state)))
            yield from self._seq(commands, len(commands), state, scoped)
            return
        for s in self.execute(commands[i], state):
            yield from self._seq(commands, i + 1, s, scoped)

    def _assigned(self, state, name, value, cmd):
        new = dict(state)
        new[name] = value
        if self.tracer is not None:
            self.tracer.state(new, cmd)
        return new

    def _assign(self, c: n.Assign, state):
        target = self.lookup(c.name, state, c.span)
        den = self._var_den(c.name, state, c)
        for v in self.outcomes(c.value, state):
            if not c.indices:
                new = v
            else:
                new = self._store(target, [self.value(i, state) for i in c.indices], v, c, state)
            self._check_range(new, den, c.span, state, f"value for {c.name}:")
            yield self._assigned(state, c.name, new, c)

    def _store(self, arr, idxs, v, c, state):
        i = idxs[0]
        self._index(arr, i, c.span, state)
        inner = v if len(idxs) == 1 else self._store(arr[i], idxs[1:], v, c, state)
        return arr[:i] + (inner,) + arr[i + 1:]

    def _var_den(self, name, state, cmd):
        table = self._assign_dens
        if table is None:
            table = self._assign_dens = {}
            for op in self.typed.ops.values():
                if isinstance(op, n.ProcDecl):
                    scope = {p.name: self.typed.den_of(p.type) for p in op.params}
                    self._scope_walk(op.body, scope, table)
        return table[id(cmd)]

    def _scope_walk(self, c, scope, table):
        if isinstance(c, n.VarDecl):
            scope[c.name] = self.typed.den_of(c.type)
        elif isinstance(c, n.Assign):
            table[id(c)] = scope[c.name]
        elif isinstance(c, n.Seq):
            inner = dict(scope)
            for cmd in c.commands:
                self._scope_walk(cmd, inner, table)
        elif isinstance(c, n.If):
            self._scope_walk(c.then, scope, table)
            if c.orelse is not None:
                self._scope_walk(c.orelse, scope, table)
        elif isinstance(c, n.While):
            self._scope_walk(c.body, scope, table)
        elif isinstance(c, n.For):
            inner = dict(scope)
            for part in (c.init, c.body, c.update):
                self._scope_walk(part, inner, table)

    def _loop(self, c, cond, invariants, decreases, body, update, state):
        key = id(c)
        if key not in self._modified:
            parts = (body,) + ((update,) if update is not None else ())
            self._modified[key] = [v for v in modified_variables(n.Seq(parts)) if v in state]
        snapshot = {RESERVED_PREFIX + v: state[v] for v in self._modified[key]}
        # entries: (state, measure before the iteration that produced it, iteration)
        stack = [(state, None, 0)]
        while stack:
            s, prev, it = stack.pop()
            self._tick(c.span, s)
            measures = [None] if decreases is None else list(self.outcomes(decreases, s))
            if prev is not None:
                for m in measures:
                    if not m < prev:
                        raise E.MeasureNotDecreased(
                            f"termination measure went from {prev} to {m}", decreases.span,
                            s, before=prev, after=m)
            inv_env = {**s, **snapshot}
            for k, inv in enumerate(invariants):
                for ok in self.outcomes(inv, inv_env):
                    if not _truthy(ok):
                        raise E.InvariantViolation(
                            f"loop invariant {k + 1} does not hold at iteration {it}",
                            inv.span, inv_env, which=k, iteration=it)
            successors = []
            for m in measures:
                if m is not None and m < 0:
                    raise E.MeasureNegative(f"termination measure is negative ({m})",
                                            decreases.span, s, value=m)
                for go in self.outcomes(cond, s):
                    if not go:
                        yield s
                        continue
                    for s2 in self.execute(body, s):
                        if update is not None:
                            for s3 in self.execute(update, s2):
                                successors.append((s3, m, it + 1))
                        else:
                            successors.append((s2, m, it + 1))
            stack.extend(reversed(successors))

    # -- nondeterministic expression evaluation -----------------------------

    def _nd(self, e, env) -> Iterator:
        t = type(e)
        if t is n.Choose:
            den = self.typed.den_of(e.binder.type)
            found = False
            for v in enumerate_values(den):
                self._tick(e.span, env)
                inner = dict(env)
                inner[e.binder.name] = v
                if any(_truthy(c) for c in self.outcomes(e.cond, inner)):
                    found = True
                    yield v
            if not found:
                raise E.ChooseFailure(f"no value of {den} satisfies the choose condition",
                                      e.span, env)
        elif t is n.Unary:
            for v in self.outcomes(e.operand, env):
                yield (not v) if e.op == "¬" else -v
        elif t is n.Binary:
            op = e.op
            for a in self.outcomes(e.left, env):
                if op == "∧" and not a:
                    yield False
                elif op == "∨" and a:
                    yield True
                elif op == "⇒" and not a:
                    yield True
                else:
                    for b in self.outcomes(e.right, env):
                        if op in ("∧", "∨", "⇒"):
                            yield bool(b)
                        elif op == "⇔":
                            yield a == b
                        else:
                            yield self._binary(op, a, b, e, env)
        elif t is n.Quant:
            names, combos = self._binder_values(e.binders)
            yield from self._nd_quant(e, env, names, list(combos), 0)
        elif t is n.Let:
            yield from self._nd_let(e, env, 0)
        elif t is n.LetPar:
            for values in self._nd_product([b.value for b in e.bindings], env):
                inner = dict(env)
                inner.update(zip((b.name for b in e.bindings), values))
                yield from self.outcomes(e.body, inner)
        elif t is n.IfExpr:
            for c in self.outcomes(e.cond, env):
                yield from self.outcomes(e.then if c else e.orelse, env)
        elif t is n.Call:
            op = self.typed.ops[e.name]
            for args in self._nd_product(e.args, env):
                yield from self.call(op, args, e.span)
        elif t is n.Index:
            for arr, i in self._nd_product([e.array, e.index], env):
                yield self._index(arr, i, e.span, env)
        elif t is n.Update:
            for arr, i, v in self._nd_product([e.array, e.index, e.value], env):
                self._index(arr, i, e.span, env)
                yield arr[:i] + (v,) + arr[i + 1:]
        elif t is n.TupleExpr:
            yield from self._nd_product(e.items, env)
        elif t is n.Proj:
            for v in self.outcomes(e.tuple, env):
                yield v[e.index - 1]
        elif t is n.SetLit:
            for items in self._nd_product(e.items, env):
                yield frozenset(items)
        else:
            yield self.value(e, env)

    def _nd_product(self, exprs, env) -> Iterator[tuple]:
        if not exprs:
            yield ()
            return
        for head in self.outcomes(exprs[0], env):
            for rest in self._nd_product(exprs[1:], env):
                yield (head,) + rest

    def _nd_let(self, e, env, i):
        if i == len(e.bindings):
            yield from self.outcomes(e.body, env)
            return
        b = e.bindings[i]
        for v in self.outcomes(b.value, env):
            inner = dict(env)
            inner[b.name] = v
            yield from self._nd_let(e, inner, i + 1)

    def _nd_quant(self, e, env, names, combos, i):
        want = e.op == "∃"
        if i == len(combos):
            yield not want
            return
        inner = dict(env)
        inner.update(zip(names, combos[i]))
        for v in self.outcomes(e.body, inner):
            if bool(v) == want:
                yield want
            else:
                yield from self._nd_quant(e, env, names, combos, i + 1)


_STRUCTURED = (n.Quant, n.Let, n.LetPar, n.IfExpr, n.Call)


def _structured(e) -> bool:
    """Formula nodes that record themselves rather than as atoms."""
    if isinstance(e, n.Binary):
        return e.op in ("∧", "∨", "⇒", "⇔")
    if isinstance(e, n.Unary):
        return e.op == "¬"
    return isinstance(e, _STRUCTURED)


def _restore(env, names, saved):
    for x, old in zip(reversed(names), reversed(saved)):
        if old is _MISSING:
            env.pop(x, None)
        else:
            env[x] = old

