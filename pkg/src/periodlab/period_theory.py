"""Smallest period of g_{k,phi}: closed form, per-prime local periods, oracles.

Closed form. With d = gcd(a, b), a' = a/d and T = c * lcm(1..k),

    Q = T / (eta * prod_{q | a'} q^{v_q(T)})

where eta is a power of two picked by :func:`eta2`. The smallest period is
Q, except when some odd prime p <= k with p not dividing a' satisfies
v_p(k+1) >= v_p(L_k) >= 1; then it is Q / p^{v_p(L_k)}. There is at most one
such p.

Local periods. For each prime p, n -> v_p(g(n)) has its own smallest period
and the global one is their lcm. Only the primes returned by
:func:`candidate_primes` can have a local period other than 1.

Oracles. T is a period of g for every multiplicative f, so the smallest
period divides T and comparing one full window n in [1, T] settles any
candidate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy import primerange

from .errors import CapacityError, InvalidInputError, InvariantViolation
from .exact_arith import FactoredInteger, _vp, divisors, is_prime, lcm_upto, prime_factors
from .g_function import ProgressionParams, g_value_fast
from .multiplicative import MultiplicativeFunctionSpec, make_builtin

DEFAULT_ORACLE_BUDGET = 5000
ORACLE_BUDGET_ENV = "PERIODLAB_ORACLE_BUDGET"

PHI = make_builtin("phi")


@dataclass(frozen=True)
class EtaCase:
    value: int
    case_tag: str


@dataclass(frozen=True)
class ExceptionalPrime:
    p: int
    correction_exponent: int


@dataclass
class PeriodReport:
    params: ProgressionParams
    formula_period: int | None = None
    oracle_period: int | None = None
    local_breakdown: dict[int, tuple[int | None, int | None]] | None = None
    function_tag: str = "phi"

    @property
    def agree(self) -> bool | None:
        if self.formula_period is None or self.oracle_period is None:
            return None
        return self.formula_period == self.oracle_period


ETA_FULL = "2^v2(L_k)"
ETA_A_ODD = "a_odd_and_v2(cL_k)=1"
ETA_K3_C_EVEN = "k=3_a_odd_c_even"
ETA_K3_D_EVEN = "k=3_a'_odd_d_even"
ETA_ONE = "otherwise"


def eta2(k: int, a: int, a_prime: int, c: int, d: int) -> EtaCase:
    """Power-of-two correction in the closed form.

    Note the mix of conditions on a and on a'; both are needed.
    """
    for name, v in (("k", k), ("a", a), ("a_prime", a_prime), ("c", c), ("d", d)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")
    if d * a_prime != a:
        raise InvalidInputError(f"inconsistent triple: d*a' = {d * a_prime} != a = {a}")
    v2L = lcm_upto(k).exponent(2)
    v2cL = v2L + _vp(2, c)
    a_odd, ap_odd = a % 2 == 1, a_prime % 2 == 1

    full = ap_odd and _vp(2, k + 1) >= v2L >= 2
    halves = [
        (ETA_A_ODD, a_odd and v2cL == 1),
        (ETA_K3_C_EVEN, k == 3 and a_odd and c % 2 == 0),
        (ETA_K3_D_EVEN, k == 3 and ap_odd and d % 2 == 0),
    ]
    # the first branch needs k >= 7, the second k <= 3
    if full and any(hit for _, hit in halves):
        raise InvariantViolation(f"eta branches overlap at k={k}, a={a}, a'={a_prime}, c={c}, d={d}")
    if full:
        return EtaCase(2**v2L, ETA_FULL)
    for tag, hit in halves:
        if hit:
            return EtaCase(2, tag)
    return EtaCase(1, ETA_ONE)


def eta_for(params: ProgressionParams) -> EtaCase:
    dp = params.derived
    return eta2(params.k, params.a, dp.a_prime, params.c, dp.d)


def _q_factored(params: ProgressionParams) -> FactoredInteger:
    dp = params.derived
    T = dp.cLk
    eta = eta_for(params).value
    removed = {q: T.exponent(q) for q in prime_factors(dp.a_prime) if T.exponent(q)}
    if eta > 1:
        removed[2] = removed.get(2, 0) + _vp(2, eta)
    return T.exact_div(FactoredInteger._trusted(removed.items()))


def q_formula(params: ProgressionParams) -> int:
    return _q_factored(params).value


def exceptional_odd_prime(params: ProgressionParams) -> ExceptionalPrime | None:
    """The odd prime p <= k, p not dividing a', with v_p(k+1) >= v_p(L_k) >= 1."""
    dp = params.derived
    k = params.k
    found = []
    for p in primerange(3, k + 1):
        p = int(p)
        if dp.a_prime % p == 0:
            continue
        vL = dp.L_k.exponent(p)
        if vL >= 1 and _vp(p, k + 1) >= vL:
            found.append(ExceptionalPrime(p, vL))
    if len(found) > 1:
        raise InvariantViolation(f"several exceptional primes for k={k}: {[e.p for e in found]}")
    return found[0] if found else None


def smallest_period_phi_factored(params: ProgressionParams) -> FactoredInteger:
    q = _q_factored(params)
    exc = exceptional_odd_prime(params)
    if exc is None:
        return q
    return q.exact_div(FactoredInteger._trusted([(exc.p, exc.correction_exponent)]))


def smallest_period_phi(params: ProgressionParams) -> int:
    return smallest_period_phi_factored(params).value


def _q_products(p: int, params: ProgressionParams) -> tuple[int, int]:
    """(product over q | L_k, q not | ac, p | q-1, q not | k+1;
    product over q | c, q not | a, p | q-1)."""
    dp = params.derived
    a, c, k = params.a, params.c, params.k
    from_L = 1
    for q in dp.L_k.primes:
        if (a * c) % q and (q - 1) % p == 0 and (k + 1) % q:
            from_L *= q
    from_c = 1
    for q in prime_factors(c):
        if a % q and (q - 1) % p == 0:
            from_c *= q
    return from_L, from_c


def local_period_case(p: int, params: ProgressionParams) -> tuple[int, str]:
    """Closed-form local period of n -> v_p(g_{k,phi}(n)), with the case used."""
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise InvalidInputError(f"{p!r} is not prime")
    dp = params.derived
    T = dp.cLk
    if p > T.value:
        raise InvalidInputError(f"p = {p} exceeds cL_k = {T.value}; the local period is 1")
    from_L, from_c = _q_products(p, params)

    vT = T.exponent(p)
    if vT == 0:
        return from_c, "p_coprime_to_cLk"
    if dp.a_prime % p == 0:
        return from_L * from_c, "p_divides_a'"

    vc = _vp(p, params.c)
    k_reaches = _vp(p, params.k + 1) >= dp.L_k.exponent(p)
    if dp.d % p:
        if vT == 1:
            e, tag = 0, "p_coprime_to_d:v_p(cL_k)=1"
        elif k_reaches:
            e, tag = vc, "p_coprime_to_d:k+1_reaches"
        else:
            e, tag = vT, "p_coprime_to_d:k+1_short"
    else:
        if k_reaches:
            e, tag = vc, "p_divides_d:k+1_reaches"
        else:
            e, tag = vT, "p_divides_d:k+1_short"
    return p**e * from_L * from_c, tag


def local_period_formula(p: int, params: ProgressionParams) -> int:
    return local_period_case(p, params)[0]


def candidate_primes(params: ProgressionParams) -> list[int]:
    """Primes whose local period may exceed 1: those dividing cL_k and those
    dividing q - 1 for a prime q | c with q not dividing a."""
    dp = params.derived
    out = set(dp.cLk.primes)
    for q in prime_factors(params.c):
        if params.a % q:
            out.update(prime_factors(q - 1))
    return sorted(out)


def assemble_from_locals(params: ProgressionParams) -> int:
    total = 1
    for p in candidate_primes(params):
        total = lcm(total, local_period_formula(p, params))
    return total


# --- brute force ---------------------------------------------------------


def default_oracle_budget() -> int:
    raw = os.environ.get(ORACLE_BUDGET_ENV)
    if raw is None:
        return DEFAULT_ORACLE_BUDGET
    try:
        budget = int(raw)
    except ValueError:
        raise InvalidInputError(f"{ORACLE_BUDGET_ENV} must be an integer, got {raw!r}") from None
    if budget < 1:
        raise InvalidInputError(f"{ORACLE_BUDGET_ENV} must be >= 1, got {budget}")
    return budget


@dataclass
class OracleSearch:
    """Result of a divisor-lattice period search.

    ``rejected`` maps every divisor tried before ``period`` to an n with
    F(n + divisor) != F(n).
    """

    period: int
    rejected: dict[int, int] = field(default_factory=dict)


def _check_budget(params: ProgressionParams, budget: int | None) -> int:
    budget = default_oracle_budget() if budget is None else budget
    T = params.derived.cLk_value
    if T > budget:
        raise CapacityError(f"cL_k = {T} exceeds oracle budget {budget}")
    return T


def g_values(spec: MultiplicativeFunctionSpec, params: ProgressionParams, count: int) -> list:
    """g(1), ..., g(count) as a 0-indexed list."""
    return [g_value_fast(spec, params, n) for n in range(1, count + 1)]


def search_period(values: Sequence, T: int) -> OracleSearch:
    """Smallest divisor delta of T with values[n + delta] == values[n] on one window.

    ``values`` holds F(1..2T) and T must be a period of F. Periods of a
    function on the positive integers are closed under gcd (if d1 < d2 are
    periods, write g = u*d1 - v*d2 with u, v >= 0; then
    F(n + g) = F(n + g + v*d2) = F(n + u*d1) = F(n)), so the smallest period
    divides T and it is enough to try divisors of T in ascending order.
    Equality on one window of length T extends to all n because T is a
    period.
    """
    if len(values) < 2 * T:
        raise InvalidInputError(f"need {2 * T} values, got {len(values)}")
    rejected: dict[int, int] = {}
    for delta in divisors(T):
        bad = next((n for n in range(T) if values[n + delta] != values[n]), None)
        if bad is None:
            return OracleSearch(delta, rejected)
        rejected[delta] = bad + 1
    raise InvariantViolation(f"{T} is not a period of the sampled function")


def oracle_search(spec: MultiplicativeFunctionSpec, params: ProgressionParams, budget: int | None = None) -> OracleSearch:
    T = _check_budget(params, budget)
    return search_period(g_values(spec, params, 2 * T), T)


def brute_force_smallest_period(spec: MultiplicativeFunctionSpec, params: ProgressionParams, budget: int | None = None) -> int:
    return oracle_search(spec, params, budget).period


def rational_vp(p: int, x) -> int:
    x = Fraction(x)
    if x == 0:
        raise InvalidInputError("valuation of zero")
    return _vp(p, abs(x.numerator)) - _vp(p, x.denominator)


def local_search(p: int, values: Sequence, T: int) -> OracleSearch:
    return search_period([rational_vp(p, v) for v in values], T)


def brute_force_local_period(
    p: int,
    params: ProgressionParams,
    budget: int | None = None,
    spec: MultiplicativeFunctionSpec = PHI,
) -> int:
    if not is_prime(p):
        raise InvalidInputError(f"{p!r} is not prime")
    T = _check_budget(params, budget)
    return local_search(p, g_values(spec, params, 2 * T), T).period


def local_table(
    params: ProgressionParams,
    primes: Sequence[int] | None = None,
    with_oracle: bool = True,
    budget: int | None = None,
) -> dict[int, tuple[int, int | None]]:
    """Per prime: (closed-form local period, brute-force local period or None)."""
    primes = candidate_primes(params) if primes is None else list(primes)
    values = None
    if with_oracle:
        T = _check_budget(params, budget)
        values = g_values(PHI, params, 2 * T)
    out: dict[int, tuple[int, int | None]] = {}
    for p in primes:
        formula = 1 if p > params.derived.cLk_value else local_period_formula(p, params)
        oracle = local_search(p, values, T).period if values is not None else None
        out[p] = (formula, oracle)
    return out

