"""Shared helpers: naive reference implementations that share no code with
the package, plus a terminal summary for the acceptance criteria."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import pytest
from sympy import divisor_sigma, totient


def naive_phi(n: int) -> int:
    return sum(1 for m in range(1, n + 1) if gcd(m, n) == 1)


NAIVE_F = {
    "phi": lambda n: Fraction(int(totient(n))),
    "one": lambda n: Fraction(1),
    "sigma:0": lambda n: Fraction(int(divisor_sigma(n, 0))),
    "sigma:1": lambda n: Fraction(int(divisor_sigma(n, 1))),
    "sigma:2": lambda n: Fraction(int(divisor_sigma(n, 2))),
    "pow:1": lambda n: Fraction(n),
    "pow:-1": lambda n: Fraction(1, n),
    "pow:2": lambda n: Fraction(n * n),
}


def naive_g(tag: str, k: int, a: int, b: int, c: int, n: int) -> Fraction:
    f = NAIVE_F[tag]
    terms = [b + a * (n + i * c) for i in range(k + 1)]
    num = Fraction(1)
    for t in terms:
        num *= f(t)
    return num / f(lcm(*terms))


def naive_smallest_period(values: list) -> int:
    """Least T with values[i + T] == values[i] for every index in range;
    ``values`` must cover several periods for the answer to mean anything."""
    for T in range(1, len(values)):
        if all(values[i + T] == values[i] for i in range(len(values) - T)):
            return T
    raise AssertionError("no period inside the sampled range")


# --- acceptance summary -----------------------------------------------------

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE[number] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE, key=int):
        status, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
