"""Sweeps, report records, the lcm-of-totients bound and the unboundedness witness."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import CapacityError, InvalidInputError, InvariantViolation, NotFoundError
from .exact_arith import _factor_pairs, is_prime
from .g_function import ProgressionParams, g_eval, window
from .multiplicative import eval_on_factors, parse_function_tag
from .period_theory import (
    PHI,
    PeriodReport,
    brute_force_smallest_period,
    default_oracle_budget,
    eta_for,
    exceptional_odd_prime,
    smallest_period_phi,
)

log = logging.getLogger(__name__)

METHODS = ("formula", "oracle", "both")
RECORD_FIELDS = (
    "k", "a", "b", "c", "d", "a_prime", "cLk", "eta", "eta_case",
    "exceptional_prime", "formula_period", "oracle_period", "agree",
)

DEFAULT_GRID = {"k_range": (1, 8), "a_range": (1, 6), "b_range": (0, 6), "c_range": (1, 4)}


@dataclass(frozen=True)
class SweepConfig:
    k_range: tuple[int, int] = DEFAULT_GRID["k_range"]
    a_range: tuple[int, int] = DEFAULT_GRID["a_range"]
    b_range: tuple[int, int] = DEFAULT_GRID["b_range"]
    c_range: tuple[int, int] = DEFAULT_GRID["c_range"]
    oracle_budget: int | None = None
    function_tag: str = "phi"
    parallelism: int = 1
    method: str = "both"

    def __post_init__(self) -> None:
        floors = {"k_range": 1, "a_range": 1, "b_range": 0, "c_range": 1}
        for name, floor in floors.items():
            lo, hi = getattr(self, name)
            if max(lo, floor) > hi:
                raise InvalidInputError(f"{name} {lo}..{hi} has no admissible values (minimum {floor})")
        if self.oracle_budget is not None and self.oracle_budget < 1:
            raise InvalidInputError("oracle_budget must be >= 1")
        if self.parallelism < 1:
            raise InvalidInputError("parallelism must be >= 1")
        if self.method not in METHODS:
            raise InvalidInputError(f"method must be one of {METHODS}")
        parse_function_tag(self.function_tag)

    def grid(self) -> list[ProgressionParams]:
        floors = (1, 1, 0, 1)
        ranges = (self.k_range, self.a_range, self.b_range, self.c_range)
        axes = [range(max(lo, f), hi + 1) for (lo, hi), f in zip(ranges, floors)]
        return [ProgressionParams(*t) for t in itertools.product(*axes)]


def build_report(
    params: ProgressionParams,
    method: str = "both",
    function_tag: str = "phi",
    budget: int | None = None,
) -> PeriodReport:
    """Formula and/or oracle period for one parameter set.

    With ``method="both"`` an oracle over budget leaves ``oracle_period``
    empty instead of failing; with ``method="oracle"`` it raises.
    """
    if method not in METHODS:
        raise InvalidInputError(f"method must be one of {METHODS}")
    spec = parse_function_tag(function_tag)
    report = PeriodReport(params, function_tag=spec.name)
    if method in ("formula", "both"):
        if spec.name == "phi":
            report.formula_period = smallest_period_phi(params)
        elif method == "formula":
            raise InvalidInputError(f"no closed form for {spec.name}; use --method oracle")
    if method in ("oracle", "both"):
        try:
            report.oracle_period = brute_force_smallest_period(spec, params, budget)
        except CapacityError:
            if method == "oracle":
                raise
            log.info("oracle skipped for %s: over budget", params)
    return report


def report_record(report: PeriodReport) -> dict:
    p = report.params
    dp = p.derived
    eta = eta_for(p)
    exc = exceptional_odd_prime(p)
    return {
        "k": p.k,
        "a": p.a,
        "b": p.b,
        "c": p.c,
        "d": dp.d,
        "a_prime": dp.a_prime,
        "cLk": str(dp.cLk_value),
        "eta": eta.value,
        "eta_case": eta.case_tag,
        "exceptional_prime": exc.p if exc else None,
        "formula_period": None if report.formula_period is None else str(report.formula_period),
        "oracle_period": None if report.oracle_period is None else str(report.oracle_period),
        "agree": report.agree,
    }


def _sweep_point(args: tuple) -> PeriodReport:
    params, method, tag, budget = args
    return build_report(params, method, tag, budget)


def sweep_verify(config: SweepConfig) -> list[PeriodReport]:
    """One report per grid point, sorted by (k, a, b, c)."""
    budget = config.oracle_budget if config.oracle_budget is not None else default_oracle_budget()
    work = [(p, config.method, config.function_tag, budget) for p in config.grid()]
    if config.parallelism > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            reports = list(pool.map(_sweep_point, work, chunksize=8))
    else:
        reports = [_sweep_point(w) for w in work]
    reports.sort(key=lambda r: r.params.sort_key())
    return reports


def disagreements(reports: list[PeriodReport]) -> list[PeriodReport]:
    return [r for r in reports if r.agree is False]


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render_records(records: list[dict], fmt: str, fields: tuple[str, ...] | None = None) -> str:
    """JSON array or RFC 4180 CSV with a header row."""
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt == "csv":
        if fields is None:
            fields = tuple(records[0]) if records else ()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([_csv_cell(rec.get(f)) for f in fields])
        return buf.getvalue()
    raise InvalidInputError(f"unknown format {fmt!r}")


# --- lcm of totients bound -------------------------------------------------


@dataclass(frozen=True)
class BoundRecord:
    lhs: int
    rhs: Fraction
    holds: bool


def bound_check(params: ProgressionParams, n: int, period: int | None = None) -> BoundRecord:
    """lcm_i phi(term_i) <= prod_i phi(term_i) / g(<n>), where <n> is the
    representative of n in [1, P] and P is the smallest period of g_{k,phi}."""
    period = smallest_period_phi(params) if period is None else period
    phis = [eval_on_factors(PHI, _factor_pairs(t)) for t in window(params, n).full_terms]
    lhs = lcm(*phis)
    prod = 1
    for v in phis:
        prod *= v
    rep = (n - 1) % period + 1
    rhs = Fraction(prod) / g_eval(PHI, params, rep)
    return BoundRecord(lhs, rhs, lhs <= rhs)


# --- unboundedness witness ----------------------------------------------------


@dataclass(frozen=True)
class WitnessRecord:
    p: int
    m: int
    n0: int
    g_bar_value_lower_bound: int


def g_bar_phi(k: int, n: int) -> int:
    """prod_{i=0..k} phi(n+i) / lcm_i phi(n+i)."""
    phis = [eval_on_factors(PHI, _factor_pairs(n + i)) for i in range(k + 1)]
    prod = 1
    for v in phis:
        prod *= v
    return prod // lcm(*phis)


def nonperiodic_witness(min_bound: int, search_limit: int, k: int = 1) -> WitnessRecord:
    """Smallest prime p > min_bound and smallest m <= search_limit with
    m*p^2 + 1 prime. At n0 = m*p^2 both phi(n0) and phi(n0 + 1) are divisible
    by p, so prod/lcm of totients over the window at n0 is at least p."""
    if isinstance(min_bound, bool) or not isinstance(min_bound, int) or min_bound < 2:
        raise InvalidInputError(f"min_bound must be an integer >= 2, got {min_bound!r}")
    if isinstance(search_limit, bool) or not isinstance(search_limit, int) or search_limit < 1:
        raise InvalidInputError(f"search_limit must be a positive integer, got {search_limit!r}")
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    p = min_bound + 1
    while not is_prime(p):
        p += 1
    m = next((m for m in range(1, search_limit + 1) if is_prime(m * p * p + 1)), None)
    if m is None:
        raise NotFoundError(f"no m <= {search_limit} makes m*{p}^2 + 1 prime; raise the limit")
    n0 = m * p * p
    phi0 = eval_on_factors(PHI, _factor_pairs(n0))
    phi1 = eval_on_factors(PHI, _factor_pairs(n0 + 1))
    if phi0 % p or phi1 % p:
        raise InvariantViolation(f"{p} does not divide phi({n0}) = {phi0} and phi({n0 + 1}) = {phi1}")
    value = g_bar_phi(k, n0)
    if value % p:
        raise InvariantViolation(f"{p} does not divide the totient ratio {value} at n0 = {n0}")
    return WitnessRecord(p, m, n0, value)
