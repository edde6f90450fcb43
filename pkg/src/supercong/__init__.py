"""Exact-arithmetic q-series toolkit and supercongruence verification suite."""

__version__ = "0.1.0"

from .rationals import (
    NotPIntegralError,
    Valuation,
    congruent_mod_power,
    is_prime,
    primes_in_range,
    vp,
)
from .series import TruncatedSeries, eta_like_product, first_difference
from .qexpansions import (
    chi3,
    gen_C,
    gen_H,
    gen_L,
    gen_Up,
    gen_basis,
    gen_t,
    gen_theta,
    lambda_fn,
    mu_fn,
    sigma4chi3,
)
from .recurrence import (
    IntPolynomial,
    OreOperator,
    SequenceTable,
    a_seq,
    a_seq_hypergeometric,
    apply_operator,
    l2_operator,
    l3_operator,
    ore_multiply,
    shift_minus_27,
)
from .checks import CheckReport, DeltaTable, compute_deltas, run_battery

__all__ = [
    "__version__",
    "NotPIntegralError",
    "Valuation",
    "congruent_mod_power",
    "is_prime",
    "primes_in_range",
    "vp",
    "TruncatedSeries",
    "eta_like_product",
    "first_difference",
    "chi3",
    "sigma4chi3",
    "lambda_fn",
    "mu_fn",
    "gen_t",
    "gen_H",
    "gen_theta",
    "gen_C",
    "gen_L",
    "gen_Up",
    "gen_basis",
    "IntPolynomial",
    "OreOperator",
    "SequenceTable",
    "a_seq",
    "a_seq_hypergeometric",
    "apply_operator",
    "l2_operator",
    "l3_operator",
    "ore_multiply",
    "shift_minus_27",
    "CheckReport",
    "DeltaTable",
    "compute_deltas",
    "run_battery",
]
