"""Command-line front end.

Exit codes: 0 SAT / PASS, 1 UNSAT / FAIL, 2 error, 3 UNKNOWN.  The
``LCLTOPO_LOG`` environment variable sets the log level and nothing else.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import complex as cx
from .errors import LclError
from .protocol import NONE, IdMode, build_protocol_complex, default_R
from .reduction import MAX_EXPANDED_HEIGHT, Tower, linial_bound, log_star, reduce_once, tower
from .search import (DEFAULT_MAX_NODES, SAT, UNKNOWN, UNSAT, AlgorithmTable, extract_algorithm, solve,
                     solve_skeleton)
from .sim import cross_validate, reference_linial_table
from .task import BUILTINS, build_input_complex, build_output_complex, builtin_task, parse_task, task_to_doc

EXIT_OK, EXIT_FAIL, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2, 3

# With arbitrary IDs from [R], R >= 24 forces three IDs that a 0-round
# 3col-to-mis map treats alike, hence impossibility.  Documentation only: the
# exact search already answers UNSAT from R = 4 on.
PIGEONHOLE_R = 24
VERDICT_EXIT = {SAT: EXIT_OK, UNSAT: EXIT_FAIL, UNKNOWN: EXIT_UNKNOWN}

log = logging.getLogger("lcltopo")


class UsageError(LclError):
    pass


def load_task(args):
    given = [x for x in (args.task, args.builtin, getattr(args, "task_arg", None)) if x]
    if len(given) != 1:
        raise UsageError("give exactly one task: a builtin name, a task file, --task FILE or --builtin NAME")
    if args.builtin:
        return builtin_task(args.builtin)
    src = given[0]
    path = Path(src)
    if args.task or path.suffix == ".json" or os.sep in src or path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read task file {src}: {e.strerror}") from None
        return parse_task(text)
    return builtin_task(src)


def id_mode(args, t: int) -> IdMode:
    if args.ids == NONE:
        if args.R is not None:
            raise UsageError("--R only applies with --ids arbitrary or increasing")
        return IdMode()
    return IdMode(args.ids, args.R if args.R is not None else default_R(t))


def parse_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise UsageError(f"bad ring size {text!r}; use N or LO..HI") from None
    if hi_i < lo_i:
        raise UsageError(f"empty ring size range {text!r}")
    return range(lo_i, hi_i + 1)


def write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def emit(args, line: str, doc: dict) -> None:
    print(json.dumps(doc, ensure_ascii=False, sort_keys=True) if args.json else line)


def check_t(t: int) -> None:
    if t < 0:
        raise UsageError("--t must be non-negative")


def cmd_build(args) -> int:
    task = load_task(args)
    check_t(args.t)
    if args.side == "input":
        K = build_input_complex(task)
    elif args.side == "output":
        K = build_output_complex(task)
    else:
        K = build_protocol_complex(task, args.t, id_mode(args, args.t))
    comps = cx.connected_components(K)
    if args.out:
        write(args.out, cx.dumps(K))
    if args.dot:
        write(args.dot, cx.to_dot(K))
    line = f"vertices={len(K.vertices)} facets={len(K.facets)} components={len(comps)}"
    emit(args, line, {"vertices": len(K.vertices), "facets": len(K.facets), "components": len(comps)})
    return EXIT_OK


def _solve(args, skeleton: bool):
    task = load_task(args)
    check_t(args.t)
    mode = id_mode(args, args.t)
    fn = solve_skeleton if skeleton else solve
    return task, mode, fn(task, args.t, mode, max_nodes=args.max_nodes, threads=args.threads)


def _report_verdict(args, result) -> int:
    line = result.verdict.upper()
    emit(args, line, {"verdict": line, "nodes": result.stats["nodes"], "views": result.stats["views"]})
    return VERDICT_EXIT[result.verdict]


def cmd_solve(args, skeleton: bool = False) -> int:
    _, _, result = _solve(args, skeleton)
    if result.verdict == SAT and args.out:
        write(args.out, result.dumps())
    return _report_verdict(args, result)


def cmd_solve_skeleton(args) -> int:
    return cmd_solve(args, skeleton=True)


def cmd_extract(args) -> int:
    task, mode, result = _solve(args, False)
    if result.verdict == SAT:
        table = extract_algorithm(result, task, args.t, mode)
        if args.out:
            write(args.out, table.dumps())
        elif not args.json:
            sys.stdout.write(table.dumps())
    return _report_verdict(args, result)


def load_table(path) -> AlgorithmTable:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read table {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"table {path} is not JSON: {e.msg} (line {e.lineno})") from None
    return AlgorithmTable.from_json(doc)


def cmd_simulate(args) -> int:
    table = load_table(args.table)
    if not (args.task or args.builtin or args.task_arg):
        if not table.task:
            raise UsageError("the table names no task; pass one")
        args.builtin = table.task
    task = load_task(args)
    n_range = parse_range(args.n)
    for n in n_range:
        if n < 2 * table.rounds + 1:
            raise UsageError(f"ring of {n} nodes is too small for a {table.rounds}-round table "
                             f"(need n >= {2 * table.rounds + 1})")
    report = cross_validate(table, task, n_range, trials=args.trials, seed=args.seed)
    if args.out:
        write(args.out, json.dumps(report.to_json(), ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    emit(args, report.summary(), {"summary": report.summary(), **report.to_json()})
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_reduce(args) -> int:
    table = load_table(args.table)
    t = table.rounds if args.t is None else args.t
    R = table.id_mode.R if args.R is None else args.R
    if table.id_mode.kind != "increasing" or R is None:
        raise UsageError("round reduction needs a table over increasing IDs")
    reduced = reduce_once(table, t, R, args.k)
    colors = len(set(reduced.entries.values()))
    if args.out:
        write(args.out, reduced.dumps())
    line = f"VERIFIED rounds={reduced.rounds} views={len(reduced.entries)} colors_used={colors} palette={reduced.task}"
    emit(args, line, {"verified": True, "rounds": reduced.rounds, "views": len(reduced.entries),
                      "colors_used": colors, "palette": reduced.task})
    return EXIT_OK


def _show(x) -> str:
    return str(x) if x.bit_length() <= 128 else f"2^^{log_star(x)}"


def parse_n(text: str):
    """Integer, or a tower of twos written 2^^h."""
    try:
        if text.startswith("2^^"):
            return tower(int(text[3:]))
        return int(text)
    except ValueError:
        raise UsageError(f"n must be an integer or 2^^h, got {text[:40]!r}") from None


def cmd_bound(args) -> int:
    n = parse_n(args.n)
    b = linial_bound(n)
    h = log_star(n)
    shown_n = str(n) if isinstance(n, Tower) else _show(n)
    shown_t = str(tower(h)) if h > MAX_EXPANDED_HEIGHT else _show(tower(h))
    trace = f"log*({shown_n}) = {h} (tower({h}) = {shown_t} >= n); ceil({h}/2) - 1 = {b}"
    if args.json:
        emit(args, "", {"bound": b, "log_star": h, "trace": trace})
    else:
        print(b)
        print(trace)
    return EXIT_OK


def cmd_export(args) -> int:
    if args.what == "linial":
        text = reference_linial_table().dumps()
    elif args.what == "task":
        text = json.dumps(task_to_doc(load_task(args)), ensure_ascii=False, indent=1) + "\n"
    else:
        task = load_task(args)
        check_t(args.t)
        if args.side == "input":
            K = build_input_complex(task)
        elif args.side == "output":
            K = build_output_complex(task)
        else:
            K = build_protocol_complex(task, args.t, id_mode(args, args.t))
        text = cx.to_dot(K) if args.dot else cx.dumps(K)
    if args.out:
        write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_task(p, positional=True):
    if positional:
        p.add_argument("task_arg", nargs="?", metavar="TASK",
                       help=f"builtin name ({', '.join(BUILTINS)}) or path to a task JSON file")
    p.add_argument("--task", help="path to a task JSON file")
    p.add_argument("--builtin", help="builtin task name")


def _add_model(p):
    p.add_argument("--t", type=int, default=0, help="number of rounds (default 0)")
    p.add_argument("--ids", choices=("none", "arbitrary", "increasing"), default="none")
    p.add_argument("--R", type=int, help="ID range [1, R] (default: size of a radius-(t+1) ball)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcltopo", description="Decide and simulate LCL tasks on rings via protocol complexes.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write the main artifact to this file")
    common.add_argument("--threads", type=int, help="worker threads (1 = sequential; default: machine parallelism)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled simulation")

    p = sub.add_parser("build", parents=[common], help="build an input, output or protocol complex")
    _add_task(p)
    _add_model(p)
    p.add_argument("--side", choices=("protocol", "input", "output"), default="protocol")
    p.add_argument("--dot", help="also write the 1-skeleton as DOT to this file")
    p.set_defaults(func=cmd_build)

    for name, func, help_ in (("solve", cmd_solve, "decide whether a t-round map exists"),
                              ("solve-skeleton", cmd_solve_skeleton, "edge-only relaxation of solve"),
                              ("extract", cmd_extract, "solve and write the algorithm table")):
        p = sub.add_parser(name, parents=[common], help=help_, epilog=(
            f"Note: for 0-round 3col-to-mis with arbitrary IDs, a counting argument rules out R >= {PIGEONHOLE_R}; "
            "the exact search reports UNSAT already at R = 4."))
        _add_task(p)
        _add_model(p)
        p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES,
                       help=f"search node cap per component (default {DEFAULT_MAX_NODES}); exceeding it gives UNKNOWN")
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", parents=[common], help="run a table on every admissible ring")
    p.add_argument("table", help="algorithm table JSON")
    _add_task(p)
    p.add_argument("--n", required=True, help="ring size N or range LO..HI")
    p.add_argument("--trials", type=int, default=1000, help="samples per size when exhaustive runs are too many")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reduce", parents=[common], help="derive a (t-1)-round 2^(2^k)-colouring table")
    p.add_argument("table", help="t-round k-colouring table over increasing IDs")
    p.add_argument("--t", type=int, help="rounds of the input table (default: from the table)")
    p.add_argument("--R", type=int, help="ID range (default: from the table)")
    p.add_argument("--k", type=int, help="colours used by the input table (default: largest colour)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bound", parents=[common], help="rounds needed to 3-colour C_n: ceil(log*(n)/2) - 1")
    p.add_argument("n")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("export", parents=[common], help="export the reference table, a normalized task, or a complex")
    p.add_argument("what", choices=("linial", "task", "complex"))
    _add_task(p)
    _add_model(p)
    p.add_argument("--side", choices=("protocol", "input", "output"), default="protocol")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON for complexes")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("LCLTOPO_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except LclError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
