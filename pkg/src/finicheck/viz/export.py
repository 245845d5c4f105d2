"""DOT and JSON export of traces and evaluation trees, plus a JSON reader.

JSON schema (all objects carry a ``kind``):

    trace:      {"kind": "trace", "title", "result", "error", "nodes": [...], "edges": [[i, j], ...]}
    state:      {"kind": "state", "number", "command", "snapshot": {var: text}}
    call:       {"kind": "call", "call", "subgraph": trace}
    tree:       {"kind": "tree", "layer_cap", "pruned", "root": node}
    root:       {"kind": "root", "operation", "children": [...]}
    instance:   {"kind": "instance", "number", "args": {param: text}, "value", "error", "children"}
    connective: {"kind": "connective", "label", "formula", "bindings", "value", "children"}
    atom:       {"kind": "atom", "formula", "bindings", "value"}
    predcall:   {"kind": "predcall", "name", "args": [text], "formula", "bindings", "value",
                 "subtree": node | null}
    truncated:  {"kind": "truncated", "truncated": true, "omitted": count}

Values inside snapshots and bindings are rendered as source text.
"""

from __future__ import annotations

import json
from typing import Union

from .trace import CallNode, StateNode, TraceGraph
from .tree import (AtomNode, ConnectiveNode, EvalTree, InstanceNode, PredCallNode, RootNode,
                   TruncatedNode)

Graph = Union[TraceGraph, EvalTree]


# --- JSON ------------------------------------------------------------------

def to_json(g) -> dict:
    if isinstance(g, TraceGraph):
        return {"kind": "trace", "title": g.title, "result": g.result, "error": g.error,
                "nodes": [to_json(x) for x in g.nodes], "edges": [list(e) for e in g.edges]}
    if isinstance(g, StateNode):
        return {"kind": "state", "number": g.number, "command": g.command,
                "snapshot": dict(g.snapshot)}
    if isinstance(g, CallNode):
        return {"kind": "call", "call": g.call, "subgraph": to_json(g.subgraph)}
    if isinstance(g, EvalTree):
        return {"kind": "tree", "layer_cap": g.layer_cap, "pruned": g.pruned,
                "root": to_json(g.root)}
    if isinstance(g, RootNode):
        return {"kind": "root", "operation": g.operation,
                "children": [to_json(c) for c in g.children]}
    if isinstance(g, InstanceNode):
        return {"kind": "instance", "number": g.number, "args": dict(g.args), "value": g.value,
                "error": g.error, "children": [to_json(c) for c in g.children]}
    if isinstance(g, ConnectiveNode):
        return {"kind": "connective", "label": g.label, "formula": g.formula,
                "bindings": dict(g.bindings), "value": g.value,
                "children": [to_json(c) for c in g.children]}
    if isinstance(g, AtomNode):
        return {"kind": "atom", "formula": g.formula, "bindings": dict(g.bindings),
                "value": g.value}
    if isinstance(g, PredCallNode):
        return {"kind": "predcall", "name": g.name, "args": list(g.args), "formula": g.formula,
                "bindings": dict(g.bindings), "value": g.value,
                "subtree": to_json(g.subtree) if g.subtree is not None else None}
    if isinstance(g, TruncatedNode):
        return {"kind": "truncated", "truncated": True, "omitted": g.omitted}
    raise TypeError(f"cannot export {type(g).__name__}")


def from_json(d: dict):
    kind = d["kind"]
    if kind == "trace":
        return TraceGraph(d["title"], [from_json(x) for x in d["nodes"]],
                          [tuple(e) for e in d["edges"]], d["result"], d["error"])
    if kind == "state":
        return StateNode(d["number"], dict(d["snapshot"]), d["command"])
    if kind == "call":
        return CallNode(d["call"], from_json(d["subgraph"]))
    if kind == "tree":
        return EvalTree(from_json(d["root"]), d["layer_cap"], d["pruned"])
    if kind == "root":
        return RootNode(d["operation"], [from_json(c) for c in d["children"]])
    if kind == "instance":
        return InstanceNode(d["number"], dict(d["args"]), d["value"],
                            [from_json(c) for c in d["children"]], d["error"])
    if kind == "connective":
        return ConnectiveNode(d["label"], d["formula"], dict(d["bindings"]), d["value"],
                              [from_json(c) for c in d["children"]])
    if kind == "atom":
        return AtomNode(d["formula"], dict(d["bindings"]), d["value"])
    if kind == "predcall":
        sub = from_json(d["subtree"]) if d["subtree"] is not None else None
        return PredCallNode(d["name"], list(d["args"]), d["formula"], dict(d["bindings"]),
                            d["value"], sub)
    if kind == "truncated":
        return TruncatedNode(d["omitted"])
    raise ValueError(f"unknown node kind {kind!r}")


def emit_json(g) -> str:
    """JSON text of a graph (or a list of graphs)."""
    data = [to_json(x) for x in g] if isinstance(g, list) else to_json(g)
    return json.dumps(data, ensure_ascii=False, indent=2)


def read_json(text: str):
    data = json.loads(text)
    return [from_json(x) for x in data] if isinstance(data, list) else from_json(data)


# --- DOT -------------------------------------------------------------------

def _q(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _attrs(**kw) -> str:
    return "[" + ", ".join(f"{k}={_q(v)}" for k, v in kw.items() if v is not None) + "]"


def _table(d: dict) -> str:
    return "\n".join(f"{k} = {v}" for k, v in d.items())


class _Dot:
    def __init__(self):
        self.lines: list[str] = []
        self.count = 0

    def new_id(self) -> str:
        self.count += 1
        return f"n{self.count - 1}"

    def emit(self, depth, text):
        self.lines.append("  " * depth + text)


def _trace_dot(dot: _Dot, g: TraceGraph, depth: int) -> list[str]:
    ids = []
    for node in g.nodes:
        if isinstance(node, StateNode):
            nid = dot.new_id()
            tip = (node.command + "\n" if node.command else "") + _table(node.snapshot)
            dot.emit(depth, f"{nid} {_attrs(label=node.number, tooltip=tip, shape='circle')};")
        else:
            cluster = f"cluster_{dot.count}"
            nid = dot.new_id()
            sub = node.subgraph
            status = sub.error or (f"result = {sub.result}" if sub.result is not None else "")
            dot.emit(depth, f"subgraph {cluster} {{")
            dot.emit(depth + 1, f"label={_q(node.call)};")
            dot.emit(depth + 1, f"{nid} {_attrs(label=node.call, tooltip=status, shape='box3d')};")
            inner = _trace_dot(dot, sub, depth + 1)
            for a, b in sub.edges:
                dot.emit(depth + 1, f"{inner[a]} -> {inner[b]};")
            if inner:
                dot.emit(depth + 1, f"{nid} -> {inner[0]} [style=dotted];")
            dot.emit(depth, "}")
        ids.append(nid)
    return ids


def _color(value):
    return {True: "darkgreen", False: "red"}.get(value, "gray")


def _tree_dot(dot: _Dot, node, depth: int) -> str:
    nid = dot.new_id()
    if isinstance(node, RootNode):
        dot.emit(depth, f"{nid} {_attrs(label=node.operation, shape='doubleoctagon')};")
    elif isinstance(node, InstanceNode):
        tip = _table(node.args) + (f"\n{node.error}" if node.error else "")
        dot.emit(depth, f"{nid} {_attrs(label=node.number, tooltip=tip, shape='circle', color=_color(node.value))};")
    elif isinstance(node, ConnectiveNode):
        tip = f"{node.formula}\n{_table(node.bindings)}\nvalue = {node.value}"
        dot.emit(depth, f"{nid} {_attrs(label=node.label, tooltip=tip, color=_color(node.value))};")
    elif isinstance(node, AtomNode):
        tip = f"{_table(node.bindings)}\nvalue = {node.value}"
        dot.emit(depth, f"{nid} {_attrs(label=node.formula, tooltip=tip, shape='box', color=_color(node.value))};")
    elif isinstance(node, TruncatedNode):
        dot.emit(depth, f"{nid} {_attrs(label=f'… {node.omitted} more', shape='note')};")
    elif isinstance(node, PredCallNode):
        tip = f"{node.formula}\n{_table(node.bindings)}\nvalue = {node.value}"
        label = f"{node.name}({','.join(node.args)})"
        if node.subtree is None:
            dot.emit(depth, f"{nid} {_attrs(label=label, tooltip=tip, shape='box3d', color=_color(node.value))};")
        else:
            dot.emit(depth, f"subgraph cluster_{nid} {{")
            dot.emit(depth + 1, f"label={_q(label)};")
            dot.emit(depth + 1, f"{nid} {_attrs(label=label, tooltip=tip, shape='box3d', color=_color(node.value))};")
            child = _tree_dot(dot, node.subtree, depth + 1)
            dot.emit(depth + 1, f"{nid} -> {child} [style=dotted];")
            dot.emit(depth, "}")
        return nid
    for c in node.children:
        cid = _tree_dot(dot, c, depth)
        dot.emit(depth, f"{nid} -> {cid};")
    return nid


def emit_dot(g: Graph) -> str:
    """Graphviz DOT text; hover data goes into ``tooltip`` attributes."""
    dot = _Dot()
    if isinstance(g, TraceGraph):
        dot.emit(0, "digraph trace {")
        dot.emit(1, f"label={_q(g.title)};")
        dot.emit(1, "rankdir=LR;")
        if not g.nodes:
            status = g.error or (f"result = {g.result}" if g.result is not None else "")
            dot.emit(1, f"title {_attrs(label=g.title, tooltip=status, shape='plaintext')};")
        ids = _trace_dot(dot, g, 1)
        for a, b in g.edges:
            dot.emit(1, f"{ids[a]} -> {ids[b]};")
    elif isinstance(g, EvalTree):
        dot.emit(0, "digraph tree {")
        _tree_dot(dot, g.root, 1)
    else:
        raise TypeError(f"cannot export {type(g).__name__}")
    dot.emit(0, "}")
    return "\n".join(dot.lines) + "\n"
