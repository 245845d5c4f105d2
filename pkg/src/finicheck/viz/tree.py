"""Evaluation trees of formulas, pruned to the evidence for their truth value.

The recorder captures every evaluated subformula: connectives and
quantifiers become ConnectiveNodes labeled by their outermost symbol,
applications of user-defined operations become PredCallNodes, and all other
formulas (comparisons, memberships, ...) become AtomNodes. ``let``,
``letpar`` and conditional formulas appear as connective nodes labeled
``let``, ``letpar`` and ``if``.

Pruning keeps, for a false conjunction or universal formula, only the first
false child; for a true disjunction or existential formula only the first
true child; for an implication that is true because its antecedent is false
only the antecedent. Everywhere else all evaluated children are kept.

Layers: the nodes reachable from the root without entering a predicate call
subtree form one layer; each predicate call subtree starts a new one. A layer
larger than the cap is cut in pre-order and a TruncatedNode records how many
nodes were dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .. import errors as E
from ..eval import Evaluator, Mode
from ..sema import TypedSpec
from ..syntax import nodes as n
from ..syntax.printer import pretty_print
from ..types import format_value

DEFAULT_LAYER_CAP = 500


@dataclass
class ConnectiveNode:
    label: str
    formula: str
    bindings: dict[str, str]
    value: bool | None
    children: list["EvalNode"] = field(default_factory=list)


@dataclass
class AtomNode:
    formula: str
    bindings: dict[str, str]
    value: bool | None
    children: list["EvalNode"] = field(default_factory=list)


@dataclass
class PredCallNode:
    name: str
    args: list[str]
    formula: str
    bindings: dict[str, str]
    value: bool | None
    subtree: "EvalNode | None" = None

    @property
    def children(self):
        return []


@dataclass
class TruncatedNode:
    omitted: int

    @property
    def children(self):
        return []


@dataclass
class InstanceNode:
    number: int
    args: dict[str, str]
    value: bool | None
    children: list["EvalNode"] = field(default_factory=list)
    error: str | None = None


@dataclass
class RootNode:
    operation: str
    children: list[InstanceNode] = field(default_factory=list)


EvalNode = Union[RootNode, InstanceNode, ConnectiveNode, AtomNode, PredCallNode, TruncatedNode]


@dataclass
class EvalTree:
    root: RootNode
    layer_cap: int = DEFAULT_LAYER_CAP
    pruned: bool = True


def _bindings(env: dict) -> dict[str, str]:
    return {k: format_value(v) for k, v in env.items()}


class TreeRecorder:
    """Recorder hooks for the evaluator.

    Predicate calls at depth below ``expand_depth`` get their defining
    body recorded as a subtree; deeper calls become plain leaves.
    """

    def __init__(self, expand_depth: int = 1):
        self.expand_depth = expand_depth
        self.container = AtomNode("", {}, None)  # collects the top formula
        self.stack: list = [self.container]
        self._suspended = 0
        self._depth = 0

    @property
    def active(self) -> bool:
        return self._suspended == 0

    def suspend(self):
        self._suspended += 1

    def resume(self):
        self._suspended -= 1

    def reset(self):
        self.container = AtomNode("", {}, None)
        self.stack = [self.container]
        self._suspended = 0
        self._depth = 0

    def _attach(self, node):
        parent = self.stack[-1]
        if isinstance(parent, PredCallNode):
            parent.subtree = node
        else:
            parent.children.append(node)

    def open(self, label, expr, env):
        node = ConnectiveNode(label, pretty_print(expr), _bindings(env), None)
        self._attach(node)
        self.stack.append(node)
        return node

    def close(self, node, value):
        node.value = bool(value)
        self.stack.pop()
        return value

    def atom(self, expr, env, thunk):
        node = AtomNode(pretty_print(expr), _bindings(env), None)
        self._attach(node)
        self.suspend()
        try:
            value = thunk()
        finally:
            self.resume()
        node.value = value is True
        return value

    def pred_call(self, op, args, expr, env, thunk):
        node = PredCallNode(op.name, [format_value(a) for a in args], pretty_print(expr),
                            _bindings(env), None)
        self._attach(node)
        if self._depth >= self.expand_depth:
            self.suspend()
            try:
                value = thunk()
            finally:
                self.resume()
        else:
            self.stack.append(node)
            self._depth += 1
            try:
                value = thunk()
            finally:
                self._depth -= 1
                self.stack.pop()
        node.value = value is True
        return value


# --- pruning and layer caps ---------------------------------------------------

def prune(node: EvalNode) -> EvalNode:
    """A copy of ``node`` keeping only the children that justify its value."""
    if isinstance(node, PredCallNode):
        sub = prune(node.subtree) if node.subtree is not None else None
        return PredCallNode(node.name, node.args, node.formula, node.bindings, node.value, sub)
    if isinstance(node, (AtomNode, TruncatedNode)):
        return node
    if isinstance(node, RootNode):
        return RootNode(node.operation, [prune(c) for c in node.children])
    if isinstance(node, InstanceNode):
        return InstanceNode(node.number, node.args, node.value,
                            [prune(c) for c in node.children], node.error)
    kids = node.children
    label, value = node.label, node.value
    if (label in ("∧", "∀") and value is False) or (label in ("∨", "∃") and value is True):
        kids = [next(c for c in kids if c.value is value)]
    elif label == "⇒" and value is True and kids and kids[0].value is False:
        kids = kids[:1]
    return ConnectiveNode(label, node.formula, node.bindings, value, [prune(c) for c in kids])


def layer_size(node: EvalNode) -> int:
    """Nodes of ``node``'s layer below and including it."""
    return 1 + sum(layer_size(c) for c in node.children)


def _with_children(node, kids):
    if isinstance(node, RootNode):
        return RootNode(node.operation, kids)
    if isinstance(node, InstanceNode):
        return InstanceNode(node.number, node.args, node.value, kids, node.error)
    if isinstance(node, ConnectiveNode):
        return ConnectiveNode(node.label, node.formula, node.bindings, node.value, kids)
    return AtomNode(node.formula, node.bindings, node.value, kids)


def cap_layers(node: EvalNode, cap: int) -> EvalNode:
    """Cut every layer to at most ``cap`` nodes, markers included."""
    if cap < 2:
        raise ValueError("layer cap must be at least 2")
    return _cap(node, cap, cap)[0]


def _cap(node, budget, cap):
    if isinstance(node, PredCallNode):
        sub = cap_layers(node.subtree, cap) if node.subtree is not None else None
        return PredCallNode(node.name, node.args, node.formula, node.bindings, node.value, sub), 1
    if isinstance(node, TruncatedNode):
        return node, 1
    kids = node.children
    size = layer_size(node)
    if size <= budget:
        return _with_children(node, [_cap(c, size, cap)[0] for c in kids]), size
    used, kept = 1, []
    for i, child in enumerate(kids):
        rest = sum(layer_size(c) for c in kids[i:])
        if rest <= budget - used:
            kept.extend(_cap(c, layer_size(c), cap)[0] for c in kids[i:])
            used += rest
            break
        avail = budget - used - 1  # room for a marker
        size = layer_size(child)
        if size <= avail:
            new, u = _cap(child, size, cap)
        elif avail >= 2:
            new, u = _cap(child, avail, cap)
        else:
            kept.append(TruncatedNode(rest))
            used += 1
            break
        kept.append(new)
        used += u
    return _with_children(node, kept), used


def reconstruct(node: EvalNode) -> bool | None:
    """Truth value derivable bottom-up from the kept children alone.

    Raises ValueError on truncated layers, whose evidence is incomplete.
    """
    if isinstance(node, TruncatedNode):
        raise ValueError("cannot reconstruct a truncated layer")
    if isinstance(node, AtomNode):
        return node.value
    if isinstance(node, PredCallNode):
        return reconstruct(node.subtree) if node.subtree is not None else node.value
    if isinstance(node, InstanceNode):
        return reconstruct(node.children[0]) if node.children else node.value
    if isinstance(node, RootNode):
        return all(reconstruct(c) for c in node.children)
    vals = [reconstruct(c) for c in node.children]
    label = node.label
    if label in ("∧", "∀"):
        return all(vals)
    if label in ("∨", "∃"):
        return any(vals)
    if label == "⇒":
        return True if vals[0] is False else vals[1]
    if label == "⇔":
        return vals[0] == vals[1]
    if label == "¬":
        return not vals[0]
    # let, letpar: the body; if: the chosen branch
    return vals[-1]


def _is_formula_op(typed: TypedSpec, op) -> bool:
    if isinstance(op, (n.PredDecl, n.TheoremDecl)):
        return True
    return isinstance(op, n.FunDecl) and isinstance(op.result, n.BoolType)


def build_eval_tree(typed: TypedSpec, op_name: str, *, prune_tree: bool = True,
                    layer_cap: int = DEFAULT_LAYER_CAP, inputs=None) -> EvalTree:
    """Evaluate a predicate or theorem on every admissible input and record it.

    ``inputs`` restricts the run to the given argument tuples.
    """
    from ..check import parameter_tuples

    op = typed.ops[op_name]
    if not _is_formula_op(typed, op):
        raise E.UnsupportedConstruct(f"{op_name} is not a formula; evaluation trees need "
                                     "a predicate or theorem", op.span)
    rec = TreeRecorder()
    ev = Evaluator(typed, Mode.DET, recorder=rec)
    root = RootNode(op.name)
    number = 0
    for args in (parameter_tuples(typed, op) if inputs is None else inputs):
        args = tuple(args)
        env = {p.name: a for p, a in zip(op.params, args)}
        rec.reset()
        rec.suspend()
        try:
            admissible = ev.admissible(op, args)
        except E.EvalError:
            admissible = True  # the error shows up again in the evaluation
        finally:
            rec.resume()
        if not admissible:
            continue
        number += 1
        arg_text = {p.name: format_value(a, d)
                    for p, a, d in zip(op.params, args, typed.param_dens(op))}
        inst = InstanceNode(number, arg_text, None)
        try:
            inst.value = ev.holds(op.body, env)
        except E.EvalError as err:
            inst.error = f"{err.kind}: {err.message}"
        inst.children = list(rec.container.children)
        root.children.append(inst)
    tree_root = prune(root) if prune_tree else root
    return EvalTree(cap_layers(tree_root, layer_cap), layer_cap, prune_tree)


def iter_nodes(node: EvalNode):
    """Every node including predicate subtrees, pre-order."""
    yield node
    if isinstance(node, PredCallNode):
        if node.subtree is not None:
            yield from iter_nodes(node.subtree)
        return
    for c in node.children:
        yield from iter_nodes(c)
