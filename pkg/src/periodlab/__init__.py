"""Exact evaluation and smallest-period analysis of g_{k,f}(n) =
prod_i f(b + a(n + ic)) / f(lcm_i (b + a(n + ic))) for multiplicative f."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    InvalidInputError,
    InvariantViolation,
    NotFoundError,
    PeriodLabError,
)
from .exact_arith import (
    ExactRational,
    FactoredInteger,
    alternating_min_expansion,
    factorize,
    format_rational,
    gcd_list,
    is_prime,
    lcm_list,
    lcm_upto,
    vp,
)
from .g_function import (
    DerivedParams,
    LocalValuationBreakdown,
    ProgressionParams,
    ProgressionWindow,
    check_incongruence,
    derive_params,
    g_eval,
    g_phi_local_valuation,
    g_phi_local_valuation_direct,
    window,
)
from .harness import (
    BoundRecord,
    SweepConfig,
    WitnessRecord,
    bound_check,
    nonperiodic_witness,
    sweep_verify,
)
from .multiplicative import (
    MultiplicativeFunctionSpec,
    eval_f,
    f_of_lcm_direct,
    f_of_lcm_hua,
    make_builtin,
    parse_function_tag,
)
from .period_theory import (
    EtaCase,
    ExceptionalPrime,
    PeriodReport,
    assemble_from_locals,
    brute_force_local_period,
    brute_force_smallest_period,
    candidate_primes,
    eta2,
    exceptional_odd_prime,
    local_period_formula,
    q_formula,
    smallest_period_phi,
)
