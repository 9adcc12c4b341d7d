"""Multiplicative functions defined by their values on prime powers.

A function is given only through ``(p, e) -> f(p^e)``; evaluation at ``n``
multiplies those values over the factorization of ``n``, so multiplicativity
holds by construction rather than by assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from numbers import Rational
from typing import Callable, Iterable, Sequence

from .errors import CapacityError, InvalidInputError
from .exact_arith import SUBSET_CAP, _check_list, _factor_pairs, _require_positive_int, lcm_list

PrimePowerRule = Callable[[int, int], "Rational | int"]


@dataclass(frozen=True)
class MultiplicativeFunctionSpec:
    name: str
    prime_power_value: PrimePowerRule
    # True when every value is an integer; lets callers skip Fraction arithmetic
    integer_valued: bool = False

    @property
    def tag(self) -> str:
        return self.name

    def __call__(self, n: int) -> Fraction:
        return eval_f(self, n)


def _phi(p: int, e: int) -> int:
    return p ** (e - 1) * (p - 1)


def _sigma(alpha: int) -> PrimePowerRule:
    def rule(p: int, e: int) -> int:
        q = p**alpha
        return sum(q**j for j in range(e + 1))

    return rule


def _pow(exponent: int) -> PrimePowerRule:
    if exponent >= 0:
        return lambda p, e: p ** (e * exponent)
    return lambda p, e: Fraction(1, p ** (-e * exponent))


def _one(p: int, e: int) -> int:
    return 1


def make_builtin(kind: str, param: int | None = None) -> MultiplicativeFunctionSpec:
    """Build one of ``phi``, ``sigma`` (needs alpha >= 0), ``pow`` (needs an
    integer exponent) or ``one``."""
    if kind == "phi":
        return MultiplicativeFunctionSpec("phi", _phi, integer_valued=True)
    if kind == "one":
        return MultiplicativeFunctionSpec("one", _one, integer_valued=True)
    if kind == "sigma":
        if isinstance(param, bool) or not isinstance(param, int) or param < 0:
            raise InvalidInputError(f"sigma needs an integer alpha >= 0, got {param!r}")
        return MultiplicativeFunctionSpec(f"sigma:{param}", _sigma(param), integer_valued=True)
    if kind == "pow":
        if isinstance(param, bool) or not isinstance(param, int):
            raise InvalidInputError(f"pow needs an integer exponent, got {param!r}")
        return MultiplicativeFunctionSpec(f"pow:{param}", _pow(param), integer_valued=param >= 0)
    raise InvalidInputError(f"unknown builtin {kind!r}")


def parse_function_tag(tag: str) -> MultiplicativeFunctionSpec:
    """``"phi"``, ``"one"``, ``"sigma:<alpha>"`` or ``"pow:<e>"``."""
    kind, sep, raw = tag.strip().partition(":")
    if not sep:
        if kind in ("sigma", "pow"):
            raise InvalidInputError(f"{kind} needs a parameter, e.g. {kind}:1")
        return make_builtin(kind)
    if kind not in ("sigma", "pow"):
        raise InvalidInputError(f"{kind!r} takes no parameter")
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInputError(f"non-integer parameter in {tag!r}") from None
    return make_builtin(kind, value)


BUILTIN_TAGS = ("phi", "one", "sigma:0", "sigma:1", "sigma:2", "pow:1", "pow:-1", "pow:2")


def all_builtins() -> list[MultiplicativeFunctionSpec]:
    return [parse_function_tag(t) for t in BUILTIN_TAGS]


def eval_on_factors(spec: MultiplicativeFunctionSpec, pairs: Iterable[tuple[int, int]]):
    """Product of prime-power values; int for integer-valued specs."""
    out = 1
    rule = spec.prime_power_value
    for p, e in pairs:
        v = rule(p, e)
        if v == 0:
            raise InvalidInputError(f"{spec.name} vanishes at {p}^{e}")
        out *= v
    return out


def eval_f(spec: MultiplicativeFunctionSpec, n: int) -> Fraction:
    _require_positive_int("n", n)
    return Fraction(eval_on_factors(spec, _factor_pairs(n)))


def f_of_lcm_direct(spec: MultiplicativeFunctionSpec, values: Sequence[int]) -> Fraction:
    return eval_f(spec, lcm_list(values))


def f_of_lcm_hua(spec: MultiplicativeFunctionSpec, values: Sequence[int], cap: int = SUBSET_CAP) -> Fraction:
    """f(lcm) as an alternating product of f(gcd) over all nonempty subsets."""
    _check_list(values)
    if len(values) > cap:
        raise CapacityError(f"{len(values)} values exceeds subset cap {cap}")
    num = Fraction(1)
    den = Fraction(1)
    for r in range(1, len(values) + 1):
        for subset in combinations(values, r):
            g = subset[0]
            for x in subset[1:]:
                g = gcd(g, x)
            if r % 2:
                num *= eval_f(spec, g)
            else:
                den *= eval_f(spec, g)
    return num / den
