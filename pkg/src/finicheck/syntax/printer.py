"""Fully parenthesized Unicode pretty-printer.

Every compound expression is wrapped in parentheses, so the output re-parses
to the same tree regardless of precedence. Binder bodies that are atoms get
an extra pair of parentheses, e.g. ``(∃y:T. (q(x, y)))``.
"""

from __future__ import annotations

from functools import singledispatch

from . import nodes as n

_ATOMS = (n.IntLit, n.BoolLit, n.Var, n.Call, n.Index, n.Proj, n.TupleExpr,
          n.SetLit, n.EmptySet)

INDENT = "  "


def pretty_print(node: n.Node) -> str:
    if isinstance(node, n.Spec):
        return "\n\n".join(_decl(d) for d in node.decls) + "\n"
    if isinstance(node, n.Decl):
        return _decl(node)
    if isinstance(node, n.Command):
        return "\n".join(_command(node, 0))
    if isinstance(node, n.TypeExpr):
        return _type(node)
    return _expr(node)


def _body(e: n.Expr) -> str:
    text = _expr(e)
    return f"({text})" if isinstance(e, _ATOMS) else text


@singledispatch
def _expr(e) -> str:
    raise TypeError(f"cannot print {type(e).__name__}")


@_expr.register
def _(e: n.IntLit):
    return str(e.value) if e.value >= 0 else f"(-{-e.value})"


@_expr.register
def _(e: n.BoolLit):
    return "true" if e.value else "false"


@_expr.register
def _(e: n.Var):
    return e.name


@_expr.register
def _(e: n.Unary):
    return f"({e.op}{_expr(e.operand)})"


@_expr.register
def _(e: n.Binary):
    return f"({_expr(e.left)} {e.op} {_expr(e.right)})"


def _binder(b: n.Binder) -> str:
    return f"{b.name}:{_type(b.type)}"


@_expr.register
def _(e: n.Quant):
    binders = ", ".join(_binder(b) for b in e.binders)
    return f"({e.op}{binders}. {_body(e.body)})"


@_expr.register
def _(e: n.Choose):
    return f"(choose {_binder(e.binder)} with {_body(e.cond)})"


def _bindings(bs) -> str:
    return ", ".join(f"{b.name} = {_expr(b.value)}" for b in bs)


@_expr.register
def _(e: n.Let):
    return f"(let {_bindings(e.bindings)} in {_body(e.body)})"


@_expr.register
def _(e: n.LetPar):
    return f"(letpar {_bindings(e.bindings)} in {_body(e.body)})"


@_expr.register
def _(e: n.IfExpr):
    return f"(if {_expr(e.cond)} then {_expr(e.then)} else {_expr(e.orelse)})"


@_expr.register
def _(e: n.Call):
    return f"{e.name}({', '.join(_expr(a) for a in e.args)})"


@_expr.register
def _(e: n.Index):
    return f"{_expr(e.array)}[{_expr(e.index)}]"


@_expr.register
def _(e: n.Update):
    return f"({_expr(e.array)} with [{_expr(e.index)}] = {_expr(e.value)})"


@_expr.register
def _(e: n.TupleExpr):
    return f"⟨{', '.join(_expr(i) for i in e.items)}⟩"


@_expr.register
def _(e: n.Proj):
    return f"{_expr(e.tuple)}.{e.index}"


@_expr.register
def _(e: n.SetLit):
    return "{" + ", ".join(_expr(i) for i in e.items) + "}"


@_expr.register
def _(e: n.EmptySet):
    return f"∅[{_type(e.elem)}]"


def _type(t: n.TypeExpr) -> str:
    if isinstance(t, n.BoolType):
        return "𝔹"
    if isinstance(t, n.NatType):
        return "ℕ" if t.bound is None else f"ℕ[{_expr(t.bound)}]"
    if isinstance(t, n.IntType):
        if t.lo is None:
            return "ℤ"
        return f"ℤ[{_expr(t.lo)}, {_expr(t.hi)}]"
    if isinstance(t, n.ArrayType):
        return f"Array[{_expr(t.length)}, {_type(t.elem)}]"
    if isinstance(t, n.SetType):
        return f"Set[{_type(t.elem)}]"
    if isinstance(t, n.TupleType):
        return f"Tuple[{', '.join(_type(c) for c in t.components)}]"
    if isinstance(t, n.NamedType):
        return t.name
    raise TypeError(f"cannot print {type(t).__name__}")


def _annotations(invariants, decreases, depth):
    pad = INDENT * (depth + 1)
    lines = [f"{pad}invariant {_expr(i)};" for i in invariants]
    if decreases is not None:
        lines.append(f"{pad}decreases {_expr(decreases)};")
    return lines


def _block(seq: n.Seq, depth: int, head: str) -> list[str]:
    pad = INDENT * depth
    lines = [f"{pad}{head}{{"]
    for c in seq.commands:
        lines.extend(_command(c, depth + 1))
    lines.append(f"{pad}}}")
    return lines


def _var_decl(c: n.VarDecl) -> str:
    return f"var {c.name}:{_type(c.type)} ≔ {_expr(c.init)}"


def _assign(c: n.Assign) -> str:
    target = c.name + "".join(f"[{_expr(i)}]" for i in c.indices)
    return f"{target} ≔ {_expr(c.value)}"


def _command(c: n.Command, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(c, n.VarDecl):
        return [f"{pad}{_var_decl(c)};"]
    if isinstance(c, n.Assign):
        return [f"{pad}{_assign(c)};"]
    if isinstance(c, n.Assert):
        return [f"{pad}assert {_expr(c.formula)};"]
    if isinstance(c, n.CallCmd):
        return [f"{pad}{_expr(c.call)};"]
    if isinstance(c, n.Seq):
        return _block(c, depth, "")
    if isinstance(c, n.If):
        lines = _block(c.then, depth, f"if {_expr(c.cond)} then ")
        if c.orelse is not None:
            rest = _block(c.orelse, depth, "")
            lines[-1] = f"{lines[-1]} else {rest[0].lstrip()}"
            lines.extend(rest[1:])
        return lines
    if isinstance(c, n.While):
        lines = [f"{pad}while {_expr(c.cond)} do"]
        lines += _annotations(c.invariants, c.decreases, depth)
        return lines + _block(c.body, depth, "")
    if isinstance(c, n.For):
        lines = [f"{pad}for {_var_decl(c.init)}; {_expr(c.cond)}; {_assign(c.update)} do"]
        lines += _annotations(c.invariants, c.decreases, depth)
        return lines + _block(c.body, depth, "")
    raise TypeError(f"cannot print {type(c).__name__}")


def _params(ps) -> str:
    return "(" + ", ".join(f"{p.name}:{_type(p.type)}" for p in ps) + ")"


def _clauses(keyword, formulas) -> str:
    return "".join(f"\n  {keyword} {_expr(f)};" for f in formulas)


def _decl(d: n.Decl) -> str:
    if isinstance(d, n.ValDecl):
        out = f"val {d.name}"
        if d.type is not None:
            out += f": {_type(d.type)}"
        if d.value is not None:
            out += f" = {_expr(d.value)}"
        return out + ";"
    if isinstance(d, n.TypeDecl):
        return f"type {d.name} = {_type(d.type)};"
    if isinstance(d, (n.PredDecl, n.TheoremDecl)):
        kw = "pred" if isinstance(d, n.PredDecl) else "theorem"
        return f"{kw} {d.name}{_params(d.params)}{_clauses('requires', d.requires)}\n  ⇔ {_expr(d.body)};"
    if isinstance(d, n.FunDecl):
        return (f"fun {d.name}{_params(d.params)}: {_type(d.result)}"
                f"{_clauses('requires', d.requires)}\n  = {_expr(d.body)};")
    if isinstance(d, n.ProcDecl):
        lines = [f"proc {d.name}{_params(d.params)}: {_type(d.result)}"
                 f"{_clauses('requires', d.requires)}{_clauses('ensures', d.ensures)}", "{"]
        for c in d.body.commands:
            lines.extend(_command(c, 1))
        lines.append(f"{INDENT}return {_expr(d.ret)};")
        lines.append("}")
        return "\n".join(lines)
    raise TypeError(f"cannot print {type(d).__name__}")


_ASCII = [
    ("∀", "forall "), ("∃", "exists "), ("¬", "not "), ("∧", " and "),
    ("∨", " or "), ("⇒", " => "), ("⇔", " <=> "), ("≔", ":="), ("≤", "<="),
    ("≥", ">="), ("≠", "!="), ("⋅", "*"), ("ℕ", "Nat"), ("ℤ", "Int"),
    ("𝔹", "Bool"), ("∈", " isin "), ("⊆", " subseteq "), ("∪", " union "),
    ("∩", " intersect "), ("∅", "emptyset"), ("⟨", "<<"), ("⟩", ">>"),
    ("−", "-"),
]


def to_ascii(text: str) -> str:
    """Transliterate math symbols into their ASCII shortcuts."""
    for sym, alias in _ASCII:
        text = text.replace(sym, alias)
    return text
