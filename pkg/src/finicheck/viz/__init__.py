"""Execution traces and formula evaluation trees, exported as DOT or JSON."""

from .export import emit_dot, emit_json, from_json, read_json, to_json
from .trace import CallNode, StateNode, TraceGraph, build_trace
from .tree import (AtomNode, ConnectiveNode, EvalTree, InstanceNode, PredCallNode, RootNode,
                   TruncatedNode, build_eval_tree, cap_layers, prune, reconstruct)

__all__ = [
    "AtomNode", "CallNode", "ConnectiveNode", "EvalTree", "InstanceNode", "PredCallNode",
    "RootNode", "StateNode", "TraceGraph", "TruncatedNode", "build_eval_tree", "build_trace",
    "cap_layers", "emit_dot", "emit_json", "from_json", "prune", "read_json", "reconstruct",
    "to_json",
]
