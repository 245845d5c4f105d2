"""Execution traces: the sequence of states of one procedure run.

Every completed variable declaration or assignment adds a numbered state
node; every operation call adds a call node holding the callee's own trace.
Functions and predicates have no states of their own, so their call nodes
only contain the calls they make in turn.
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


@dataclass
class StateNode:
    number: int
    snapshot: dict[str, str]
    command: str = ""


@dataclass
class CallNode:
    call: str
    subgraph: "TraceGraph"


TraceNode = Union[StateNode, CallNode]


@dataclass
class TraceGraph:
    title: str
    nodes: list[TraceNode] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    result: str | None = None
    error: str | None = None

    def add(self, node: TraceNode):
        if self.nodes:
            self.edges.append((len(self.nodes) - 1, len(self.nodes)))
        self.nodes.append(node)

    @property
    def states(self) -> list[StateNode]:
        return [x for x in self.nodes if isinstance(x, StateNode)]

    @property
    def calls(self) -> list[CallNode]:
        return [x for x in self.nodes if isinstance(x, CallNode)]


def call_text(typed: TypedSpec, op: n.Decl, args: tuple) -> str:
    dens = typed.param_dens(op)
    return f"{op.name}({','.join(format_value(a, d) for a, d in zip(args, dens))})"


class TraceRecorder:
    """Tracer hooks for the evaluator; builds nested TraceGraphs."""

    def __init__(self, typed: TypedSpec):
        self.typed = typed
        self.top = TraceGraph("")
        self.stack = [self.top]
        self._ops = []

    def enter_call(self, op, args):
        self.stack.append(TraceGraph(call_text(self.typed, op, args)))
        self._ops.append(op)

    def exit_call(self, outcome):
        graph = self.stack.pop()
        op = self._ops.pop()
        if isinstance(outcome, E.EvalError):
            graph.error = f"{outcome.kind}: {outcome.message}"
        else:
            graph.result = format_value(outcome, self.typed.result_den(op))
        self.stack[-1].add(CallNode(graph.title, graph))

    def state(self, new_state, cmd):
        graph = self.stack[-1]
        number = len(graph.states) + 1
        snapshot = {k: format_value(v) for k, v in new_state.items()}
        graph.add(StateNode(number, snapshot, _command_text(cmd)))


def _command_text(cmd) -> str:
    text = pretty_print(cmd)
    return text.rstrip(";")


def build_trace(typed: TypedSpec, op_name: str, args: tuple) -> TraceGraph:
    """Run ``op_name`` on ``args`` deterministically and return its trace.

    A failing run still yields a trace; its ``error`` field says why.
    """
    op = typed.ops[op_name]
    rec = TraceRecorder(typed)
    ev = Evaluator(typed, Mode.DET, tracer=rec)
    try:
        next(ev.call(op, tuple(args)))
    except E.EvalError:
        pass  # recorded on the graph by exit_call
    (node,) = rec.top.nodes
    return node.subgraph
