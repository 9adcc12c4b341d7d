import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from periodlab import (
    InvalidInputError,
    ProgressionParams,
    check_incongruence,
    derive_params,
    g_eval,
    g_phi_local_valuation,
    g_phi_local_valuation_direct,
    make_builtin,
    window,
)
from periodlab.exact_arith import factorize
from periodlab.multiplicative import BUILTIN_TAGS, parse_function_tag

from conftest import naive_g

phi = make_builtin("phi")
params_st = st.builds(
    ProgressionParams,
    st.integers(1, 6), st.integers(1, 8), st.integers(0, 8), st.integers(1, 4),
)


def _vp(p, x):
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def test_params_validation():
    for bad in [(0, 1, 0, 1), (1, 0, 0, 1), (1, 1, -1, 1), (1, 1, 0, 0), (1.5, 1, 0, 1)]:
        with pytest.raises(InvalidInputError):
            ProgressionParams(*bad)


def test_derive_params_examples():
    dp = derive_params(ProgressionParams(2, 4, 6, 1))
    assert (dp.d, dp.a_prime, dp.b_prime, dp.cLk_value) == (2, 2, 3, 2)
    dp = derive_params(ProgressionParams(3, 4, 0, 1))
    assert (dp.d, dp.a_prime, dp.b_prime, dp.cLk_value) == (4, 1, 0, 6)
    dp = derive_params(ProgressionParams(7, 1, 0, 1))
    assert (dp.d, dp.a_prime, dp.b_prime, dp.cLk_value) == (1, 1, 0, 420)


@given(params_st)
def test_derived_invariants(params):
    dp = params.derived
    assert gcd(dp.a_prime, dp.b_prime) == 1
    assert dp.d * dp.a_prime == params.a and dp.d * dp.b_prime == params.b
    assert dp.cLk == factorize(params.c * dp.L_k.value)


def test_window_examples():
    assert window(ProgressionParams(3, 1, 0, 1), 3).full_terms == (3, 4, 5, 6)
    assert window(ProgressionParams(2, 2, 1, 3), 1).full_terms == (3, 9, 15)
    w = window(ProgressionParams(3, 2, 2, 1), 1)
    assert w.full_terms == (4, 6, 8, 10) and w.reduced_terms == (2, 3, 4, 5)
    with pytest.raises(InvalidInputError):
        window(ProgressionParams(3, 2, 2, 1), 0)


@given(params_st, st.integers(1, 10**4))
def test_window_invariants(params, n):
    w = window(params, n)
    d = params.derived.d
    assert all(f == d * r for f, r in zip(w.full_terms, w.reduced_terms))
    assert all(x < y for x, y in zip(w.full_terms, w.full_terms[1:]))
    assert len(w.full_terms) == params.k + 1


def test_g_eval_examples():
    assert g_eval(make_builtin("one"), ProgressionParams(4, 3, 2, 2), 17) == 1
    assert g_eval(phi, ProgressionParams(2, 1, 0, 1), 1) == 1
    assert g_eval(phi, ProgressionParams(3, 1, 0, 1), 3) == 2


@given(st.sampled_from(BUILTIN_TAGS), params_st, st.integers(1, 300))
def test_g_eval_matches_naive(tag, params, n):
    expected = naive_g(tag, params.k, params.a, params.b, params.c, n)
    assert g_eval(parse_function_tag(tag), params, n) == expected


@given(params_st, st.integers(1, 2000))
def test_g_phi_positive_integer(params, n):
    v = g_eval(phi, params, n)
    assert v.denominator == 1 and v >= 1


@given(params_st, st.integers(1, 500))
def test_gcd_pattern_shift(params, n):
    T = params.derived.cLk_value
    x = window(params, n).full_terms
    y = window(params, n + T).full_terms
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            assert gcd(x[i], x[j]) == gcd(y[i], y[j])


def test_local_valuation_examples():
    bd = g_phi_local_valuation(2, ProgressionParams(3, 1, 0, 1), 1)
    assert bd.total == 0 and bd.fe_terms == {}
    bd = g_phi_local_valuation(2, ProgressionParams(3, 1, 0, 1), 3)
    assert bd.total == 1 and bd.hq_terms == {3: 1} and bd.base == 0
    assert g_phi_local_valuation(3, ProgressionParams(3, 1, 0, 1), 3).total == 0
    with pytest.raises(InvalidInputError):
        g_phi_local_valuation(4, ProgressionParams(3, 1, 0, 1), 3)


@given(params_st, st.integers(1, 3000), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_local_valuation_matches_direct_forms(params, n, p):
    bd = g_phi_local_valuation(p, params, n)
    assert bd.total == bd.base + sum(bd.fe_terms.values()) + sum(bd.hq_terms.values())
    g = g_eval(phi, params, n).numerator
    assert bd.total == _vp(p, g)
    assert g_phi_local_valuation_direct(p, params, n) == bd.total


def test_fe_range_depends_on_d():
    # p = 2 divides d = 2: the range starts at e = 1
    bd = g_phi_local_valuation(2, ProgressionParams(4, 2, 2, 2), 1)
    assert min(bd.fe_terms) == 1 and max(bd.fe_terms) == 3
    bd = g_phi_local_valuation(2, ProgressionParams(4, 1, 0, 2), 1)
    assert min(bd.fe_terms) == 2 and max(bd.fe_terms) == 3


def test_incongruence_examples():
    assert check_incongruence(2, 1, ProgressionParams(1, 1, 0, 1), 5)
    assert check_incongruence(3, 1, ProgressionParams(1, 1, 0, 3), 1)
    assert check_incongruence(5, 2, ProgressionParams(1, 2, 1, 1), 1)
    with pytest.raises(InvalidInputError):
        check_incongruence(2, 1, ProgressionParams(1, 2, 1, 1), 1)


def test_incongruence_random():
    rng = random.Random(31)
    trials = 0
    while trials < 10_000:
        p = rng.choice([2, 3, 5, 7])
        e = rng.randint(1, 3 if p < 5 else 2)
        params = ProgressionParams(1, rng.randint(1, 60), rng.randint(0, 60), rng.randint(1, 60))
        if params.derived.a_prime % p == 0:
            continue
        assert check_incongruence(p, e, params, rng.randint(1, 10**6))
        trials += 1


def test_g_eval_rational_for_reciprocal_power():
    # pow:-1 gives lcm / product
    assert g_eval(make_builtin("pow", -1), ProgressionParams(2, 1, 0, 1), 2) == Fraction(12, 2 * 3 * 4)
