"""Exhaustive checking of one operation over every parameter tuple.

Parameter tuples are enumerated with the first parameter varying slowest,
each parameter following its carrier's canonical order. An input is
inadmissible when the operation's precondition is false on it; otherwise
the operation is executed with every annotation checked, and theorems
additionally fail when their body is false.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import errors as E
from .eval import Evaluator, Mode
from .sema import TypedSpec, resolve
from .syntax import nodes as n
from .types import carrier_size, enumerate_values, format_value, kind_name, to_json_value

# inputs handed to the worker pool per round trip
_BATCH = 2048


@dataclass
class CheckConfig:
    operation: str
    mode: Mode = Mode.DET
    silent: bool = True
    timeout_ms: int = 0
    workers: int = 1
    fail_fast: bool = False


@dataclass
class Failure:
    inputs: tuple
    error: E.EvalError


@dataclass
class RunReport:
    operation: str
    param_names: list[str]
    param_dens: list
    total_inputs: int
    checked: int = 0
    inadmissible: int = 0
    inadmissible_inputs: list[tuple] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    duration_ms: float = 0.0
    completed: bool = True

    @property
    def processed(self) -> int:
        return self.checked + self.inadmissible + len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def signature(self) -> str:
        return f"{self.operation}({','.join(kind_name(d) for d in self.param_dens)})"

    def call_text(self, inputs: tuple) -> str:
        args = ",".join(format_value(v, d) for v, d in zip(inputs, self.param_dens))
        return f"{self.operation}({args})"


def parameter_tuples(typed: TypedSpec, op: n.Decl) -> Iterator[tuple]:
    """Every parameter tuple of ``op`` in canonical order (first parameter slowest)."""
    dens = typed.param_dens(op)
    return itertools.product(*(list(enumerate_values(d)) for d in dens))


def check_input(ev: Evaluator, op: n.Decl, args: tuple):
    """Classify one input: ``("inadmissible", None)``, ``("ok", values)`` or ``("fail", error)``."""
    env = {p.name: a for p, a in zip(op.params, args)}
    ev.start_clock()
    try:
        if not ev.admissible(op, args):
            return "inadmissible", None
        values = []
        for v in ev.call(op, args):
            if isinstance(op, n.TheoremDecl) and v is not True:
                raise E.TheoremViolation(f"theorem {op.name} is false", op.body.span, env)
            if v not in values:
                values.append(v)
        return "ok", values
    except E.EvalError as err:
        return "fail", err


# --- worker processes ------------------------------------------------------

_worker: dict = {}


def _init_worker(spec, consts, name, mode, timeout_ms):
    typed = resolve(spec, consts)
    _worker["op"] = typed.ops[name]
    _worker["ev"] = Evaluator(typed, mode, timeout_ms=timeout_ms)


def _work(args):
    return check_input(_worker["ev"], _worker["op"], args)


def _batched(it, size):
    it = iter(it)
    while batch := list(itertools.islice(it, size)):
        yield batch


def _outcomes(typed, op, cfg, ev) -> Iterator[tuple[tuple, tuple]]:
    inputs = parameter_tuples(typed, op)
    if cfg.workers <= 1:
        ev = ev or Evaluator(typed, cfg.mode, timeout_ms=cfg.timeout_ms)
        for args in inputs:
            yield args, check_input(ev, op, args)
        return
    init = (typed.spec, dict(typed.consts), op.name, cfg.mode, cfg.timeout_ms)
    with ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=init) as pool:
        for batch in _batched(inputs, _BATCH):
            chunk = max(1, len(batch) // (cfg.workers * 4))
            # map preserves input order, so results come back canonical
            yield from zip(batch, pool.map(_work, batch, chunksize=chunk))


def run_operation(typed: TypedSpec, cfg: CheckConfig,
                  emit: Callable[[str], None] | None = None,
                  evaluator: Evaluator | None = None) -> RunReport:
    """Check ``cfg.operation`` on all inputs; failures are collected, not raised.

    Unless ``cfg.silent``, ``emit`` receives one line per input. A serial
    run may reuse ``evaluator`` (and its memo of function results).
    """
    op = typed.ops.get(cfg.operation)
    if op is None:
        raise E.SemaError(f"no operation named {cfg.operation}")
    dens = typed.param_dens(op)
    report = RunReport(op.name, [p.name for p in op.params], dens,
                       math.prod(carrier_size(d) for d in dens))
    result_den = typed.result_den(op)
    start = time.perf_counter()
    for args, (status, payload) in _outcomes(typed, op, cfg, evaluator):
        if status == "inadmissible":
            report.inadmissible += 1
            report.inadmissible_inputs.append(args)
            line = f"{report.call_text(args)}: inadmissible"
        elif status == "ok":
            report.checked += 1
            line = f"{report.call_text(args)} = " + " | ".join(
                format_value(v, result_den) for v in payload)
        else:
            report.failures.append(Failure(args, payload))
            line = f"{report.call_text(args)}: ERROR ({payload.kind}) {payload.message}"
        if emit is not None and not cfg.silent:
            emit(line)
        if status == "fail" and cfg.fail_fast:
            break
    report.completed = report.processed == report.total_inputs
    report.duration_ms = (time.perf_counter() - start) * 1000
    return report


def _bindings(env: dict) -> str:
    return ", ".join(f"{k} = {format_value(v)}" for k, v in env.items())


def format_report(r: RunReport, source: str | None = None) -> str:
    """Human-readable summary; a FAILURE block lists every counterexample."""
    lines = [f"Executing {r.signature} with all {r.total_inputs} inputs."]
    counts = f"{r.duration_ms:.0f} ms, {r.checked} checked, {r.inadmissible} inadmissible"
    if r.ok and r.completed:
        lines.append(f"Execution completed for ALL inputs ({counts}).")
        return "\n".join(lines)
    scope = "ALL" if r.completed else f"{r.processed} of {r.total_inputs}"
    lines.append(f"FAILURE: {len(r.failures)} failing input(s) among {scope} inputs ({counts}).")
    for f in r.failures:
        err = f.error
        where = ""
        if err.span is not None and source is not None:
            line, col = err.span.line_col(source)
            where = f" at {line}:{col}"
        lines.append(f"  {r.call_text(f.inputs)}: {err.kind}{where}: {err.message}")
        lines.append(f"    inputs: {_bindings(dict(zip(r.param_names, f.inputs))) or '(none)'}")
        if err.env:
            lines.append(f"    state: {_bindings(err.env)}")
    return "\n".join(lines)


def report_to_json(r: RunReport) -> dict:
    def err_json(err):
        out = {"kind": err.kind, "message": err.message,
               "env": {k: to_json_value(v) for k, v in err.env.items()}}
        if err.span is not None:
            out["span"] = [err.span.start, err.span.end]
        return out

    return {
        "operation": r.operation,
        "signature": r.signature,
        "total_inputs": r.total_inputs,
        "checked": r.checked,
        "inadmissible": r.inadmissible,
        "inadmissible_inputs": [to_json_value(a) for a in r.inadmissible_inputs],
        "failures": [{"inputs": to_json_value(f.inputs), "error": err_json(f.error)}
                     for f in r.failures],
        "duration_ms": round(r.duration_ms, 3),
        "completed": r.completed,
    }


def dump_reports(reports: list[RunReport], path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([report_to_json(r) for r in reports], fh, ensure_ascii=False, indent=2)
