"""periodlab command line.

Exit codes: 0 ok, 1 formula/oracle disagreement or invariant violation,
2 invalid input, 3 capacity exceeded or search exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from math import lcm
from typing import Sequence

from . import __version__
from .errors import CapacityError, InvalidInputError, PeriodLabError
from .exact_arith import format_rational, is_prime
from .g_function import ProgressionParams, g_eval
from .harness import (
    DEFAULT_GRID,
    RECORD_FIELDS,
    SweepConfig,
    bound_check,
    build_report,
    disagreements,
    nonperiodic_witness,
    render_records,
    report_record,
    sweep_verify,
)
from .multiplicative import parse_function_tag
from .period_theory import local_period_case, local_table, smallest_period_phi

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


def _int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None


def _add_params(sp: argparse.ArgumentParser, with_n: bool = False) -> None:
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--b", type=int, default=0)
    sp.add_argument("--c", type=int, default=1)
    if with_n:
        sp.add_argument("--n", type=int, required=True)


def _add_common(sp: argparse.ArgumentParser, method: bool = False) -> None:
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--function", default="phi", help="phi, one, sigma:<alpha>, pow:<e>")
    sp.add_argument("--oracle-budget", type=int, default=None)
    if method:
        sp.add_argument("--method", choices=("formula", "oracle", "both"), default="both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="periodlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate g_{k,f}(n)")
    _add_params(sp, with_n=True)
    _add_common(sp)

    sp = sub.add_parser("period", help="smallest period of g_{k,f}")
    _add_params(sp)
    _add_common(sp, method=True)

    sp = sub.add_parser("local", help="per-prime local periods of g_{k,phi}")
    _add_params(sp)
    sp.add_argument("--p", type=int, default=None, help="only this prime")
    _add_common(sp, method=True)

    sp = sub.add_parser("sweep", help="formula vs oracle over a parameter grid")
    for name, key in (("--k", "k_range"), ("--a", "a_range"), ("--b", "b_range"), ("--c", "c_range")):
        lo, hi = DEFAULT_GRID[key]
        sp.add_argument(name, type=_int_range, default=(lo, hi), help=f"N or LO:HI (default {lo}:{hi})")
    sp.add_argument("--jobs", type=int, default=1)
    _add_common(sp, method=True)

    sp = sub.add_parser("bound", help="check lcm of totients against the period bound")
    _add_params(sp, with_n=True)
    _add_common(sp)

    sp = sub.add_parser("witness-nonperiodic", help="show prod/lcm of totients is unbounded")
    sp.add_argument("--min-bound", type=int, default=5)
    sp.add_argument("--search-limit", type=int, default=1000)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _params(args) -> ProgressionParams:
    return ProgressionParams(args.k, args.a, args.b, args.c)


def _emit(records: list[dict], fmt: str, single: bool = False, fields=None) -> None:
    if fmt == "json" and single:
        out = json.dumps(records[0], indent=2) + "\n"
    else:
        out = render_records(records, fmt, fields)
    sys.stdout.write(out)


def _cmd_eval(args) -> int:
    params = _params(args)
    spec = parse_function_tag(args.function)
    value = g_eval(spec, params, args.n)
    rec = {"k": params.k, "a": params.a, "b": params.b, "c": params.c, "n": args.n,
           "function": spec.name, "value": format_rational(value)}
    _emit([rec], args.format, single=True)
    return EXIT_OK


def _cmd_period(args) -> int:
    report = build_report(_params(args), args.method, args.function, args.oracle_budget)
    _emit([report_record(report)], args.format, single=True, fields=RECORD_FIELDS)
    return EXIT_DISAGREE if report.agree is False else EXIT_OK


def _cmd_local(args) -> int:
    params = _params(args)
    if parse_function_tag(args.function).name != "phi":
        raise InvalidInputError("local analysis exists for phi only")
    if args.p is not None and not is_prime(args.p):
        raise InvalidInputError(f"{args.p} is not prime")
    primes = None if args.p is None else [args.p]
    with_oracle = args.method != "formula"
    try:
        table = local_table(params, primes, with_oracle, args.oracle_budget)
    except CapacityError:
        if args.method == "oracle":
            raise
        table = local_table(params, primes, False)
    records = []
    bad = False
    for p, (formula, oracle) in table.items():
        case = local_period_case(p, params)[1] if p <= params.derived.cLk_value else "p_above_cLk"
        agree = None if oracle is None else formula == oracle
        bad |= agree is False
        records.append({"p": p, "case": case,
                        "formula_local": formula if args.method != "oracle" else None,
                        "oracle_local": oracle, "agree": agree})
    if primes is None:
        records_lcm = 1
        for r in records:
            records_lcm = lcm(records_lcm, r["formula_local"] or r["oracle_local"])
        if records_lcm != smallest_period_phi(params):
            bad = True
    _emit(records, args.format, fields=("p", "case", "formula_local", "oracle_local", "agree"))
    return EXIT_DISAGREE if bad else EXIT_OK


def _cmd_sweep(args) -> int:
    config = SweepConfig(args.k, args.a, args.b, args.c, args.oracle_budget,
                         args.function, args.jobs, args.method)
    reports = sweep_verify(config)
    _emit([report_record(r) for r in reports], args.format, fields=RECORD_FIELDS)
    bad = disagreements(reports)
    skipped = sum(1 for r in reports if r.oracle_period is None and args.method != "formula")
    logging.getLogger("periodlab").info("%d points, %d disagreements, %d oracle skips",
                                        len(reports), len(bad), skipped)
    return EXIT_DISAGREE if bad else EXIT_OK


def _cmd_bound(args) -> int:
    params = _params(args)
    rec = bound_check(params, args.n)
    _emit([{"k": params.k, "a": params.a, "b": params.b, "c": params.c, "n": args.n,
            "lhs": str(rec.lhs), "rhs": format_rational(rec.rhs), "holds": rec.holds}],
          args.format, single=True)
    return EXIT_OK if rec.holds else EXIT_DISAGREE


def _cmd_witness(args) -> int:
    w = nonperiodic_witness(args.min_bound, args.search_limit, args.k)
    _emit([{"p": w.p, "m": w.m, "n0": w.n0, "g_bar_value_lower_bound": str(w.g_bar_value_lower_bound)}],
          args.format, single=True)
    return EXIT_OK


COMMANDS = {
    "eval": _cmd_eval,
    "period": _cmd_period,
    "local": _cmd_local,
    "sweep": _cmd_sweep,
    "bound": _cmd_bound,
    "witness-nonperiodic": _cmd_witness,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except PeriodLabError as exc:
        print(f"periodlab: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
