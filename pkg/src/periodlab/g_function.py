"""The ratio g_{k,f}(n) over a progression window and its p-adic pieces.

For n >= 1 the window is the k+1 terms b + a(n + ic), i = 0..k, and

    g_{k,f}(n) = prod_i f(term_i) / f(lcm of the terms).

For f = phi the p-adic valuation of g splits into a constant
``k * v_p(phi(d))``, prime-power crowding terms (``fe_terms``) and terms
from primes q with p | q - 1 (``hq_terms``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .errors import InvalidInputError
from .exact_arith import (
    FactoredInteger,
    _factor_pairs,
    _require_positive_int,
    _vp,
    factorize,
    is_prime,
    lcm_upto,
)
from .multiplicative import MultiplicativeFunctionSpec, eval_on_factors


@dataclass(frozen=True)
class ProgressionParams:
    k: int
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        for name, lo in (("k", 1), ("a", 1), ("b", 0), ("c", 1)):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidInputError(f"{name} must be an integer, got {v!r}")
            if v < lo:
                raise InvalidInputError(f"{name} must be >= {lo}, got {v}")

    @cached_property
    def derived(self) -> DerivedParams:
        return derive_params(self)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.k, self.a, self.b, self.c)


@dataclass(frozen=True)
class DerivedParams:
    d: int
    a_prime: int
    b_prime: int
    L_k: FactoredInteger
    cLk: FactoredInteger

    @property
    def cLk_value(self) -> int:
        return self.cLk.value


@dataclass(frozen=True)
class ProgressionWindow:
    full_terms: tuple[int, ...]
    reduced_terms: tuple[int, ...]


@dataclass(frozen=True)
class LocalValuationBreakdown:
    p: int
    base: int
    fe_terms: dict[int, int] = field(default_factory=dict)
    hq_terms: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.base + sum(self.fe_terms.values()) + sum(self.hq_terms.values())


def derive_params(params: ProgressionParams) -> DerivedParams:
    # gcd(a, 0) = a, so b = 0 gives a' = 1, b' = 0
    d = gcd(params.a, params.b)
    L_k = lcm_upto(params.k)
    return DerivedParams(
        d=d,
        a_prime=params.a // d,
        b_prime=params.b // d,
        L_k=L_k,
        cLk=factorize(params.c) * L_k,
    )


def window(params: ProgressionParams, n: int) -> ProgressionWindow:
    _require_positive_int("n", n)
    dp = params.derived
    full = tuple(params.b + params.a * (n + i * params.c) for i in range(params.k + 1))
    if full[0] < 1:
        raise InvalidInputError(f"nonpositive term in window at n={n}")
    reduced = tuple(dp.b_prime + dp.a_prime * (n + i * params.c) for i in range(params.k + 1))
    return ProgressionWindow(full, reduced)


def _g_parts(spec: MultiplicativeFunctionSpec, terms: tuple[int, ...]):
    num = 1
    top: dict[int, int] = {}
    for t in terms:
        pairs = _factor_pairs(t)
        num *= eval_on_factors(spec, pairs)
        for p, e in pairs:
            if top.get(p, 0) < e:
                top[p] = e
    return num, eval_on_factors(spec, top.items())


def g_eval(spec: MultiplicativeFunctionSpec, params: ProgressionParams, n: int) -> Fraction:
    num, den = _g_parts(spec, window(params, n).full_terms)
    return Fraction(num) / den


def g_value_fast(spec: MultiplicativeFunctionSpec, params: ProgressionParams, n: int):
    """Same value as :func:`g_eval`, skipping validation; int for integer-valued specs
    when the quotient is integral. Used by the brute-force oracles."""
    b, a, c = params.b, params.a, params.c
    num, den = _g_parts(spec, tuple(b + a * (n + i * c) for i in range(params.k + 1)))
    if spec.integer_valued:
        q, r = divmod(num, den)
        if r == 0:
            return q
    return Fraction(num) / den


def _phi_d_valuation(p: int, d: int) -> int:
    total = 0
    for q, e in _factor_pairs(d):
        total += _vp(p, q - 1) + (e - 1 if q == p else 0)
    return total


def _require_prime(p: int) -> None:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise InvalidInputError(f"{p!r} is not prime")


def g_phi_local_valuation(p: int, params: ProgressionParams, n: int) -> LocalValuationBreakdown:
    """v_p(g_{k,phi}(n)) split into its constant, prime-power and q-terms.

    Only primes q dividing cL_k matter for the q-terms: any other prime
    divides at most one window element.
    """
    _require_prime(p)
    dp = params.derived
    terms = window(params, n).reduced_terms
    base = params.k * _phi_d_valuation(p, dp.d)

    fe: dict[int, int] = {}
    start = 1 if dp.d % p == 0 else 2
    for e in range(start, dp.cLk.exponent(p) + 1):
        pe = p**e
        fe[e] = max(0, sum(1 for m in terms if m % pe == 0) - 1)

    hq: dict[int, int] = {}
    for q in dp.cLk.primes:
        if params.a % q == 0 or (q - 1) % p:
            continue
        hits = sum(1 for m in terms if m % q == 0)
        hq[q] = max(0, hits - 1) * _vp(p, q - 1)
    return LocalValuationBreakdown(p, base, fe, hq)


def g_phi_local_valuation_direct(p: int, params: ProgressionParams, n: int) -> int:
    """The same valuation from the unsimplified case split on p | d.

    Sums over every prime q dividing some reduced term instead of only the
    primes of cL_k; kept as a cross-check of the simplified form.
    """
    _require_prime(p)
    dp = params.derived
    terms = window(params, n).reduced_terms
    vals = [_vp(p, m) for m in terms]
    total = params.k * _phi_d_valuation(p, dp.d)
    if dp.d % p:
        total += sum(max(v - 1, 0) for v in vals) - max(max(vals) - 1, 0)
    else:
        total += sum(vals) - max(vals)

    qs = set()
    for m in terms:
        qs.update(q for q, _ in _factor_pairs(m))
    for q in qs:
        if q == p or dp.d % q == 0:
            continue
        hits = sum(1 for m in terms if m % q == 0)
        total += max(0, hits - 1) * _vp(p, q - 1)
    return total


def check_incongruence(p: int, e: int, params: ProgressionParams, m: int) -> bool:
    """Whether p^e consecutive terms b' + a'(m + ic) are pairwise distinct
    modulo p^(v_p(c) + e). Requires p not dividing a'."""
    _require_prime(p)
    _require_positive_int("e", e)
    _require_positive_int("m", m)
    dp = params.derived
    if dp.a_prime % p == 0:
        raise InvalidInputError(f"{p} divides a' = {dp.a_prime}")
    modulus = p ** (_vp(p, params.c) + e)
    residues = {(dp.b_prime + dp.a_prime * (m + i * params.c)) % modulus for i in range(p**e)}
    return len(residues) == p**e

