"""Command-line front end.

Exit codes: 0 success, 1 budget exceeded, 2 usage error, 3 internal
invariant violation.  Results go to stdout (or --output), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import connection as cl
from .core import APPEND, CastlingParams, canonicalize, castle, reduce_to_root, residual
from .errors import BudgetExceeded, InvalidParams, InvariantViolation, NonPositiveResult
from .graded import GradedHom, f1_closed_form, f1_shifted, random_trace_free, table_row
from .search import DEFAULT_BUDGET, SearchBox, search
from .tree import DEFAULT_NODE_BUDGET, EnumerationConfig, enumerate_tree, export

EXIT_OK, EXIT_BUDGET, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _tuple_arg(text):
    text = text.strip()
    if text in ("", "()"):
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tuple {text!r}; expected k1,k2,...") from None


def _fmt_tuple(t):
    return ",".join(str(k) for k in t) if t else "()"


def _frac(v):
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def build_parser():
    p = argparse.ArgumentParser(prog="castellan", description="Castling transformations and connection checks.")
    p.add_argument("--output", "-o", help="write results to this file instead of stdout")
    p.add_argument("--budget", type=int, help="node/candidate budget (default: $CASTELLAN_BUDGET or built-in)")
    sub = p.add_subparsers(dest="command", required=True)

    def with_params(sp):
        sp.add_argument("--l", type=int, required=True)
        sp.add_argument("--alpha", type=int, required=True)

    sp = sub.add_parser("verify", help="residual of a tuple")
    with_params(sp)
    sp.add_argument("--tuple", type=_tuple_arg, required=True)
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("step", help="apply one castling move")
    with_params(sp)
    sp.add_argument("--tuple", type=_tuple_arg, required=True)
    sp.add_argument("--pos", required=True, help="1-based position in the canonical tuple, or 'append'")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("reduce", help="descend a solution to the root")
    with_params(sp)
    sp.add_argument("--tuple", type=_tuple_arg, required=True)
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("enumerate", help="breadth-first solution tree")
    with_params(sp)
    sp.add_argument("--max-entry", type=int, required=True)
    sp.add_argument("--max-depth", type=int, required=True)
    sp.add_argument("--format", choices=["json", "dot", "csv"], default="json")
    sp.add_argument("--no-quotients", action="store_true")

    sp = sub.add_parser("conjecture", help="exhaustive search in a cube or box")
    with_params(sp)
    sp.add_argument("--j-max", type=int, required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--cube", action="store_true", help="entries <= alpha - 1")
    grp.add_argument("--entry-max", type=int)
    sp.add_argument("--entry-min", type=int, default=1)
    sp.add_argument("--format", choices=["text", "json"], default="json")

    sp = sub.add_parser("geometry", help="tensor checks for the canonical connection on sl(m)")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--product-abelian", type=int, default=2, metavar="D")
    sp.add_argument("--seed", type=int, default=0)
    return p


def _params(args):
    try:
        return CastlingParams(args.l, args.alpha)
    except InvalidParams as exc:
        raise UsageError(str(exc)) from None


def _canonical_input(raw, err):
    try:
        t = canonicalize(raw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if list(t) != list(raw):
        print(f"note: input {_fmt_tuple(raw)} canonicalized to {_fmt_tuple(t)}", file=err)
    return t


def _budget(args, default):
    if args.budget is not None:
        return args.budget
    env = os.environ.get("CASTELLAN_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CASTELLAN_BUDGET must be an integer, got {env!r}") from None
    return default


def cmd_verify(args, err):
    params = _params(args)
    t = _canonical_input(args.tuple, err)
    r = residual(params, t)
    if args.format == "json":
        return json.dumps({"tuple": [str(k) for k in t], "residual": str(r), "solution": r == 0}) + "\n"
    return f"residual={r} solution={'true' if r == 0 else 'false'}\n"


def cmd_step(args, err):
    params = _params(args)
    t = _canonical_input(args.tuple, err)
    if args.pos == "append":
        pos = APPEND
    else:
        try:
            pos = int(args.pos) - 1
        except ValueError:
            raise UsageError(f"--pos must be an integer or 'append', got {args.pos!r}") from None
        if not 0 <= pos < len(t):
            raise UsageError(f"--pos {args.pos} out of range for {_fmt_tuple(t)}")
    try:
        move = castle(params, t, pos)
    except NonPositiveResult as exc:
        raise UsageError(str(exc)) from None
    if move.self_loop:
        print("note: self-loop, tuple unchanged", file=err)
    if args.format == "json":
        return json.dumps({"before": [str(k) for k in t], "after": [str(k) for k in move.after],
                           "new_value": str(move.new_value), "self_loop": move.self_loop}) + "\n"
    return _fmt_tuple(move.after) + "\n"


def cmd_reduce(args, err):
    params = _params(args)
    t = _canonical_input(args.tuple, err)
    trace = reduce_to_root(params, t)
    if args.format == "json":
        return json.dumps({
            "outcome": trace.outcome,
            "reason": trace.reason,
            "tuples": [[str(k) for k in s] for s in trace.tuples],
            "steps": len(trace.moves),
        }) + "\n"
    lines = [f"{i}: {_fmt_tuple(s)}" for i, s in enumerate(trace.tuples)]
    tail = f"outcome={trace.outcome} steps={len(trace.moves)}"
    if trace.reason:
        tail += f" reason={trace.reason}"
    return "\n".join(lines + [tail]) + "\n"


def cmd_enumerate(args, err):
    params = _params(args)
    if args.max_depth < 0 or args.max_entry < 1:
        raise UsageError("--max-depth must be >= 0 and --max-entry >= 1")
    config = EnumerationConfig(params, args.max_depth, args.max_entry, not args.no_quotients)
    tree = enumerate_tree(config, node_budget=_budget(args, DEFAULT_NODE_BUDGET))
    return export(tree, args.format).decode("utf-8")


def cmd_conjecture(args, err):
    params = _params(args)
    if args.j_max < 1:
        raise UsageError("--j-max must be >= 1")
    if args.cube:
        box = SearchBox.cube(params, args.j_max)
    else:
        if args.entry_min < 1:
            raise UsageError("--entry-min must be >= 1")
        box = SearchBox(params, args.j_max, args.entry_min, args.entry_max)
    report = search(box, budget=_budget(args, DEFAULT_BUDGET))
    if args.format == "json":
        return report.to_json()
    lines = [f"{_fmt_tuple(t)} {tag}" for t, tag in report.solutions]
    lines.append(f"solutions={len(report.solutions)} exhausted={'true' if report.exhausted else 'false'}")
    return "\n".join(lines) + "\n"


def geometry_report(m: int, d: int = 2, seed: int = 0) -> dict:
    conn = cl.canonical_connection(m)
    ts = cl.tensors(conn)
    prod = cl.tensors(cl.product_connection(cl.flat_connection(d), conn))

    rng = random.Random(seed)
    xi = random_trace_free(rng, m)
    g = GradedHom(m, xi)
    agree, nonzero = True, False
    printed = {}
    for row in (1, 2, 3, 4):
        printed[str(row)] = True
        for i in range(m - 1):
            X, Y, printed_value = table_row(row, m, i, xi)
            value = f1_shifted(g, X, Y)
            agree = agree and value == f1_closed_form(m, xi, X, Y)
            nonzero = nonzero or value != 0
            printed[str(row)] = printed[str(row)] and value == printed_value

    witness = {}
    for name, arr in (("ricci", ts.ricci), ("product_weyl", prod.weyl)):
        hits = cl.nonzero_entries(arr, limit=1)
        if hits:
            idx, val = hits[0]
            witness[name] = {"index": [int(i) for i in idx], "value": _frac(val)}
    return {
        "m": m,
        "torsion_zero": cl.is_zero(ts.torsion),
        "weyl_zero": cl.is_zero(ts.weyl),
        "ricci_zero": cl.is_zero(ts.ricci),
        "product_weyl_zero": cl.is_zero(prod.weyl),
        "f_table_ok": agree and nonzero,
        "f_table_printed_rows_match": printed,
        "witness": witness or None,
    }


def cmd_geometry(args, err):
    if args.m < 2:
        raise UsageError("--m must be >= 2")
    if args.product_abelian < 1:
        raise UsageError("--product-abelian must be >= 1")
    return json.dumps(geometry_report(args.m, args.product_abelian, args.seed), indent=2) + "\n"


COMMANDS = {
    "verify": cmd_verify,
    "step": cmd_step,
    "reduce": cmd_reduce,
    "enumerate": cmd_enumerate,
    "conjecture": cmd_conjecture,
    "geometry": cmd_geometry,
}


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        text = COMMANDS[args.command](args, err)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=err)
        partial = getattr(exc, "partial", None)
        if partial is not None and hasattr(partial, "to_json"):
            out.write(partial.to_json())
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=err)
        return EXIT_INVARIANT
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def main():
    sys.exit(run())
