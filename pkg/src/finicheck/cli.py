"""Command-line entry point: ``finicheck SPEC [options]``.

Exit codes: 0 when every requested check passes, 1 when some check fails,
2 on usage, syntax, type or constant-binding errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import errors as E
from .check import CheckConfig, dump_reports, format_report, parameter_tuples, run_operation
from .eval import Mode
from .sema import resolve
from .syntax import nodes as n
from .syntax import parse_source, to_ascii
from .vcg import check_vcs, generate_all, generate_vcs, vc_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _const(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {name} is not an integer: {value!r}")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="finicheck",
        description="Check theorems and procedure contracts of a finite-domain specification "
                    "over all inputs, generate verification conditions, and export traces.")
    p.add_argument("spec", help="specification file (UTF-8)")
    p.add_argument("--const", action="append", type=_const, default=[], metavar="NAME=VALUE",
                   help="bind a constant (repeatable)")
    p.add_argument("--op", metavar="NAME", help="operation to check (default: all)")
    p.add_argument("--mode", choices=["det", "nondet"], default=None)
    p.add_argument("--nondet", action="store_true", help="same as --mode nondet")
    p.add_argument("--silent", action="store_true", help="suppress per-input output lines")
    p.add_argument("--fail-fast", action="store_true", help="stop an operation at its first failure")
    p.add_argument("--vcg", action="store_true", help="list the verification conditions")
    p.add_argument("--vcg-json", metavar="PATH", help="write the verification conditions as JSON")
    p.add_argument("--check-vc", metavar="ID|all", help="check one or all verification conditions")
    p.add_argument("--trace", metavar="PATH", help="export execution traces of --op")
    p.add_argument("--tree", metavar="PATH", help="export the evaluation tree of --op")
    p.add_argument("--input", type=_positive, metavar="K",
                   help="restrict --trace/--tree to the K-th enumerated input (1-based)")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--max-layer-nodes", type=_positive, default=500, metavar="K")
    p.add_argument("--no-prune", action="store_true", help="keep all evaluated subformulas")
    p.add_argument("--report-json", metavar="PATH", help="write run reports as JSON")
    p.add_argument("--workers", type=_positive, default=1, metavar="N")
    p.add_argument("--timeout", type=int, default=0, metavar="MS", help="per-input budget (0 = none)")
    p.add_argument("--ascii", action="store_true", help="transliterate math symbols to ASCII")
    return p


def _validate(args, parser):
    if args.trace and args.tree:
        parser.error("--trace and --tree are mutually exclusive")
    if (args.trace or args.tree) and not args.op:
        parser.error("--trace and --tree require --op")
    if args.nondet and args.mode == "det":
        parser.error("--nondet conflicts with --mode det")
    if (args.trace or args.tree) and (args.nondet or args.mode == "nondet"):
        parser.error("--trace and --tree run in deterministic mode only")
    if args.input and not (args.trace or args.tree):
        parser.error("--input applies to --trace and --tree")
    if args.max_layer_nodes < 2:
        parser.error("--max-layer-nodes must be at least 2")
    if args.timeout < 0:
        parser.error("--timeout must be non-negative")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    out = (lambda s: print(to_ascii(s))) if args.ascii else print
    path = Path(args.spec)
    try:
        source = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        print(f"finicheck: cannot read {args.spec}: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        spec = parse_source(source)
        typed = resolve(spec, dict(args.const))
        return _run(args, source, typed, out)
    except (E.LexError, E.ParseError, E.SemaError, E.UnsupportedConstruct) as err:
        print(f"{args.spec}:{err.render(source)}", file=sys.stderr)
        return EXIT_USAGE
    except _Usage as err:
        print(f"finicheck: {err}", file=sys.stderr)
        return EXIT_USAGE


def _run(args, source, typed, out) -> int:
    mode = Mode.NONDET if args.nondet or args.mode == "nondet" else Mode.DET
    if args.op is not None and args.op not in typed.ops:
        raise _Usage(f"no operation named {args.op}")
    if args.vcg or args.vcg_json or args.check_vc:
        return _vc_tasks(args, source, typed, mode, out)
    if args.trace or args.tree:
        return _visualize(args, typed)
    names = [args.op] if args.op else [d.name for d in typed.spec.operations()]
    reports, status = [], EXIT_OK
    for name in names:
        cfg = CheckConfig(name, mode, args.silent, args.timeout, args.workers, args.fail_fast)
        report = run_operation(typed, cfg, out)
        out(format_report(report, source))
        reports.append(report)
        if not report.ok:
            status = EXIT_FAIL
    if args.report_json:
        dump_reports(reports, args.report_json)
    return status


def _vc_tasks(args, source, typed, mode, out) -> int:
    if args.op is not None:
        if not isinstance(typed.ops[args.op], n.ProcDecl):
            raise _Usage(f"{args.op} is not a procedure; only procedures have verification conditions")
        vcs = generate_vcs(typed.spec, args.op)
    else:
        vcs = generate_all(typed.spec)
    if args.vcg:
        for vc in vcs:
            out(f"{vc.id}  {vc.question}")
    status = EXIT_OK
    if args.check_vc:
        chosen = vcs if args.check_vc == "all" else [v for v in vcs if v.id == args.check_vc]
        if not chosen:
            raise _Usage(f"no verification condition {args.check_vc}")
        cfg = CheckConfig("", mode, args.silent, args.timeout, args.workers, args.fail_fast)
        reports = check_vcs(chosen, typed, cfg, out)
        for vc, report in zip(chosen, reports):
            out(f"{vc.id} ({vc.question}) {vc.status.upper()}")
            if not report.ok:
                out(format_report(report))
                status = EXIT_FAIL
        if args.report_json:
            dump_reports(reports, args.report_json)
    if args.vcg_json:
        with open(args.vcg_json, "w", encoding="utf-8") as fh:
            json.dump([vc_to_json(v) for v in vcs], fh, ensure_ascii=False, indent=2)
    return status


def _visualize(args, typed) -> int:
    from .viz import build_eval_tree, build_trace, emit_dot, emit_json

    op = typed.ops[args.op]
    inputs = list(parameter_tuples(typed, op))
    if args.input is not None:
        if args.input > len(inputs):
            raise _Usage(f"--input {args.input} exceeds the {len(inputs)} inputs of {op.name}")
        inputs = [inputs[args.input - 1]]
    else:
        from .eval import Evaluator
        ev = Evaluator(typed)
        inputs = [a for a in inputs if _admissible(ev, op, a)]
    emit = emit_json if args.format == "json" else emit_dot
    if args.trace:
        graphs = [build_trace(typed, op.name, a) for a in inputs]
        text = emit(graphs) if args.format == "json" else "".join(emit_dot(g) for g in graphs)
        failed = any(g.error for g in graphs)
        target = args.trace
    else:
        tree = build_eval_tree(typed, op.name, prune_tree=not args.no_prune,
                               layer_cap=args.max_layer_nodes, inputs=inputs)
        text = emit(tree)
        failed = any(i.error or i.value is False for i in tree.root.children)
        target = args.tree
    Path(target).write_text(text, encoding="utf-8")
    return EXIT_FAIL if failed else EXIT_OK


def _admissible(ev, op, args) -> bool:
    try:
        return ev.admissible(op, args)
    except E.EvalError:
        return True


if __name__ == "__main__":
    sys.exit(main())
