"""Command-line front end.

Exit codes: 0 for success / affirmative verdicts, 1 for negative verdicts,
2 for usage, parse or resource errors.  The solver's node budget can be
capped through the PLS_BUDGET_NODES environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .core import CONJUGATE_KINDS, LatinError, conjugate, cycle_type
from .gridio import ParseError, format_grid, format_json, load_square
from .pipeline import complete_ct111
from .reduction import classify_terminal, successive_reduce
from .search import (SUPPORTED_FULL_RUNS, complete_latin_corner, sample_family,
                     verify_family)
from .smetaniuk import smetaniuk_complete_t2, t2_construct, t_construct
from .solver import BudgetExceeded, is_completable


def _budget() -> int | None:
    raw = os.environ.get("PLS_BUDGET_NODES")
    return int(raw) if raw else None


def _write_square(square, path, as_json=False):
    text = format_json(square) + "\n" if as_json else format_grid(square)
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_check(args) -> int:
    square = load_square(args.file)
    cert = is_completable(square, budget=_budget())
    print(cert.verdict)
    if cert.completable and args.witness:
        _write_square(cert.witness, args.witness)
    return 0 if cert.completable else 1


def cmd_reduce(args) -> int:
    square = load_square(args.file)
    terminal, trace = successive_reduce(square)
    for i, step in enumerate(trace, start=1):
        print(f"step {i}: {json.dumps(step.to_json())}")
    label, k = classify_terminal(terminal)
    if k is None:
        print(f"terminal: order-{terminal.order} ({label})")
    else:
        print(f"terminal: order-{terminal.order} class ({label}) k={k} "
              f"type {cycle_type(terminal)}")
    if args.terminal:
        _write_square(terminal, args.terminal)
    return 0


def cmd_complete(args) -> int:
    square = load_square(args.file)
    if args.oracle:
        cert = is_completable(square, budget=_budget())
        if not cert.completable:
            print("non-completable", file=sys.stderr)
            return 1
        witness = cert.witness
    elif args.ct111:
        witness = complete_ct111(square)
    else:
        witness = complete_latin_corner(square).certificate.witness
    _write_square(witness, args.output)
    return 0


def cmd_search(args) -> int:
    if args.sample:
        report = sample_family(args.order, args.family, args.sample,
                               seed=args.seed)
    else:
        if (args.family, args.order) not in SUPPORTED_FULL_RUNS:
            print(f"full search supports {SUPPORTED_FULL_RUNS}; "
                  f"use --sample for other runs", file=sys.stderr)
            return 2
        report = verify_family(args.order, args.family, jobs=args.jobs,
                               checkpoint=args.checkpoint)
    print(report.to_json())
    return 0 if report.clean else 1


def cmd_conjugate(args) -> int:
    square = load_square(args.file)
    _write_square(conjugate(square, args.kind), args.output)
    return 0


def cmd_classify(args) -> int:
    square = load_square(args.file)
    ct = cycle_type(square)
    print(f"cycle type: {ct}")
    if square.order >= 8:
        try:
            label, k = classify_terminal(square)
            print(f"terminal class: {label}" + (f" k={k}" if k is not None else ""))
        except LatinError:
            print("terminal class: none (square is reducible)")
    return 0


def cmd_smetaniuk(args) -> int:
    square = load_square(args.file)
    if args.action == "t":
        result = t_construct(square)
    elif args.action == "t2":
        result = t2_construct(square).lifted
    else:
        result = smetaniuk_complete_t2(t2_construct(square), budget=_budget())
    # lifts over 1..n use symbols beyond n, so emit JSON
    _write_square(result, args.output, as_json=True)
    return 0


def cmd_verify(args) -> int:
    square = load_square(args.file)
    candidate = load_square(args.completion)
    if candidate.is_complete() and candidate.extends(square):
        print("valid completion")
        return 0
    print("not a completion", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pls23",
        description="completion tools for partial Latin squares with two "
                    "filled rows and three filled columns")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide completability exactly")
    p.add_argument("file")
    p.add_argument("--witness", help="write a completion grid here")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="successively reduce and classify")
    p.add_argument("file")
    p.add_argument("--terminal", help="write the terminal square here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("complete", help="construct a completion")
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--oracle", action="store_true",
                   help="use exact search on any square")
    p.add_argument("--ct111", action="store_true",
                   help="use the constructive pipeline (cycle type "
                        "{(111,1),(00,k+2)}, k >= 3)")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("search", help="verify a family exhaustively or sampled")
    p.add_argument("--family", choices=("all", "ct111"), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint")
    p.add_argument("--sample", type=int, default=0,
                   help="check this many random family members instead of "
                        "the full canonical enumeration")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("conjugate", help="apply a coordinate permutation")
    p.add_argument("file")
    p.add_argument("kind", choices=CONJUGATE_KINDS)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("classify", help="print the cycle type")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("smetaniuk", help="lift constructions")
    p.add_argument("action", choices=("t", "t2", "complete"))
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_smetaniuk)

    p = sub.add_parser("verify", help="check that one square completes another")
    p.add_argument("file")
    p.add_argument("completion")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except LatinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
