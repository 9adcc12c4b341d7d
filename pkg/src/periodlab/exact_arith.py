"""Exact integer/rational plumbing: factorization, valuations, lcm/gcd folds.

Rationals are plain :class:`fractions.Fraction` values; ``ExactRational`` is
only an alias so signatures say what they mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import combinations
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from sympy import factorint as _sympy_factorint
from sympy import isprime as _sympy_isprime
from sympy import primerange

from .errors import CapacityError, InvalidInputError, InvariantViolation

ExactRational = Fraction

TRIAL_DIVISION_LIMIT = 10**6
SUBSET_CAP = 20


def _require_positive_int(name: str, n: object) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInputError(f"{name} must be an integer, got {n!r}")
    if n < 1:
        raise InvalidInputError(f"{name} must be >= 1, got {n}")
    return n


def is_prime(n: int) -> bool:
    # sympy's test is deterministic below 2**64 and BPSW above
    return n >= 2 and bool(_sympy_isprime(n))


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(primerange(2, TRIAL_DIVISION_LIMIT + 1))


@lru_cache(maxsize=1 << 18)
def _factor_pairs(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        if m < TRIAL_DIVISION_LIMIT**2 or is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            rest = {int(p): int(e) for p, e in _sympy_factorint(m).items()}
            for p, e in rest.items():
                if not is_prime(p):
                    raise InvariantViolation(f"splitting {m} produced composite factor {p}")
                out[p] = out.get(p, 0) + e
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer kept as sorted ``(prime, exponent)`` pairs."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(p), int(e)) for p, e in self.factors))
        for i, (p, e) in enumerate(pairs):
            if e < 1:
                raise InvalidInputError(f"exponent of {p} must be positive, got {e}")
            if i and pairs[i - 1][0] == p:
                raise InvalidInputError(f"prime {p} listed twice")
            if not is_prime(p):
                raise InvalidInputError(f"{p} is not prime")
        object.__setattr__(self, "factors", pairs)

    @classmethod
    def from_mapping(cls, factors: Mapping[int, int]) -> FactoredInteger:
        return cls(tuple((p, e) for p, e in factors.items() if e))

    @classmethod
    def _trusted(cls, pairs: Iterable[tuple[int, int]]) -> FactoredInteger:
        obj = object.__new__(cls)
        object.__setattr__(obj, "factors", tuple(sorted((p, e) for p, e in pairs if e)))
        return obj

    @cached_property
    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def __int__(self) -> int:
        return self.value

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __mul__(self, other: FactoredInteger) -> FactoredInteger:
        merged = self.as_dict()
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredInteger._trusted(merged.items())

    def lcm(self, other: FactoredInteger) -> FactoredInteger:
        merged = self.as_dict()
        for p, e in other.factors:
            merged[p] = max(merged.get(p, 0), e)
        return FactoredInteger._trusted(merged.items())

    def divides(self, other: FactoredInteger) -> bool:
        return all(other.exponent(p) >= e for p, e in self.factors)

    def exact_div(self, other: FactoredInteger) -> FactoredInteger:
        if not other.divides(self):
            raise InvariantViolation(f"{other.value} does not divide {self.value}")
        merged = self.as_dict()
        for p, e in other.factors:
            merged[p] -= e
        return FactoredInteger._trusted(merged.items())

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factorize(n: int) -> FactoredInteger:
    _require_positive_int("n", n)
    return FactoredInteger._trusted(_factor_pairs(n))


def vp(p: int, n: int) -> int:
    """Exponent of the prime ``p`` in the positive integer ``n``."""
    _require_positive_int("n", n)
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    return _vp(p, n)


def _vp(p: int, n: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def lcm_upto(k: int) -> FactoredInteger:
    """lcm(1, ..., k) in factored form; k = 0 gives 1 by convention."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise InvalidInputError(f"k must be a nonnegative integer, got {k!r}")
    pairs = []
    for p in primerange(2, k + 1):
        e, q = 0, p
        while q <= k:
            e += 1
            q *= p
        pairs.append((int(p), e))
    return FactoredInteger._trusted(pairs)


def _check_list(values: Sequence[int]) -> None:
    if len(values) == 0:
        raise InvalidInputError("need a nonempty list")
    for v in values:
        _require_positive_int("list entry", v)


def lcm_list(values: Sequence[int]) -> int:
    _check_list(values)
    return reduce(lcm, values)


def gcd_list(values: Sequence[int]) -> int:
    _check_list(values)
    return reduce(gcd, values)


def alternating_min_expansion(values: Sequence[int], cap: int = SUBSET_CAP) -> int:
    """Sum of (-1)^(|S|+1) * min(S) over nonempty sub-multisets S.

    Equals ``max(values)``; kept as an independent check of the
    inclusion-exclusion that turns gcds into an lcm.
    """
    if len(values) == 0:
        raise InvalidInputError("need a nonempty multiset")
    if len(values) > cap:
        raise CapacityError(f"{len(values)} elements exceeds subset cap {cap}")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise InvalidInputError(f"entries must be nonnegative integers, got {v!r}")
    total = 0
    for r in range(1, len(values) + 1):
        sign = 1 if r % 2 else -1
        for subset in combinations(values, r):
            total += sign * min(subset)
    return total


def to_rational(x: Rational | int) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def format_rational(x: Rational | int) -> str:
    """``num/den`` in lowest terms; integers without ``/1``."""
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def divisors(n: FactoredInteger | int) -> list[int]:
    """All positive divisors, ascending."""
    fi = n if isinstance(n, FactoredInteger) else factorize(n)
    divs = [1]
    for p, e in fi.factors:
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in _factor_pairs(n))

