import random
from fractions import Fraction

import pytest

from supercong.qexpansions import gen_C, gen_H, gen_t, gen_theta, gen_Up, lambda_fn
from supercong.recurrence import a_seq
from supercong.series import (
    HasConstantTermError,
    NonUnitLeadingCoefficientError,
    NotUnitOneError,
    OutOfPrecisionError,
    TruncatedSeries,
    _conv,
    _kron_mul,
    eta_like_product,
    first_difference,
)
from tests.conftest import rand_series, rand_unit_series


def S(coeffs, min_exp=0):
    return TruncatedSeries(min_exp, coeffs)


def schoolbook(xs, ys):
    """Independent quadratic-time convolution used as the reference oracle."""
    out = [0] * (len(xs) + len(ys) - 1)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            out[i + j] += x * y
    return out


# -- add ------------------------------------------------------------------

def test_add_basic():
    assert S([1, 1]) + S([1, -1]) == 2
    C = gen_C(20)
    assert C + (-C) == TruncatedSeries.zero(20)


def test_add_takes_min_precision():
    a = S([1, 2, 3, 4])
    b = S([1, 1])
    assert (a + b).prec == 2
    assert (a + b).coeffs == (2, 3)


# -- mul ------------------------------------------------------------------

def test_mul_basic():
    assert S([1, 1]) * S([1, -1]) == S([1, 0, -1])
    N = 30
    assert gen_t(N) * gen_H(N) == TruncatedSeries.monomial(1, N)


def test_mul_matches_schoolbook_oracle(rng):
    for trial in range(25):
        xs = rand_series(rng, 50, (-3, 3), integral=(trial % 2 == 0))
        ys = rand_series(rng, 50, (-3, 3), integral=(trial % 2 == 0))
        prod = xs * ys
        full = schoolbook(list(xs.coeffs), list(ys.coeffs))
        n_out = prod.prec - prod.min_exp
        assert list(prod.coeffs) == [Fraction(c) for c in full[:n_out]]


def test_kronecker_kernel_matches_schoolbook(rng):
    for _ in range(20):
        n = rng.randint(1, 80)
        xs = [rng.randint(-(10**30), 10**30) for _ in range(n)]
        ys = [rng.randint(-(10**30), 10**30) for _ in range(rng.randint(1, 80))]
        n_out = min(len(xs), len(ys))
        assert _kron_mul(xs, ys, n_out) == schoolbook(xs, ys)[:n_out]
    # huge-coefficient case
    xs = [rng.randint(-(10**300), 10**300) for _ in range(60)]
    ys = [rng.randint(-(10**300), 10**300) for _ in range(60)]
    assert _kron_mul(xs, ys, 60) == schoolbook(xs, ys)[:60]


def test_mul_precision_rule():
    a = S([1, 2, 3], min_exp=-1)  # prec 2
    b = S([4, 5, 6, 7], min_exp=2)  # prec 6
    prod = a * b
    assert prod.min_exp == 1
    assert prod.prec == min(a.prec + b.min_exp, b.prec + a.min_exp)


# -- invert ----------------------------------------------------------------

def test_invert_geometric():
    inv = S([1, -1, 0, 0, 0, 0]).invert()
    assert inv == S([1, 1, 1, 1, 1, 1])


def test_invert_of_hauptmodul_shifts():
    t = gen_t(12)
    assert t.invert().min_exp == -1


def test_invert_round_trip(rng):
    for _ in range(20):
        a = rand_unit_series(rng, 14)
        assert a * a.invert() == TruncatedSeries.one(14)


def test_invert_requires_unit():
    with pytest.raises(NonUnitLeadingCoefficientError):
        TruncatedSeries.zero(5).invert()


# -- pow_int ---------------------------------------------------------------

def test_pow_matches_iterated_mul():
    H = gen_H(40)
    power = TruncatedSeries.one(40)
    for _ in range(1500):
        power = power * H
    assert H.pow_int(1500) == power


def test_pow_zero_and_negative():
    t = gen_t(10)
    assert t.pow_int(0) == 1
    assert t.pow_int(-1) == t.invert()


def test_pow_additivity(rng):
    a = rand_series(rng, 10, (0, 0), integral=True)
    assert a.pow_int(7) == a.pow_int(3) * a.pow_int(4)


def test_integer_closure(rng):
    a = rand_series(rng, 20, (0, 0), integral=True)
    b = rand_series(rng, 20, (0, 0), integral=True)
    assert (a * b).is_integral()
    assert a.pow_int(5).is_integral()
    assert gen_H(30).is_integral() and gen_theta(30).is_integral()


# -- log and exp -------------------------------------------------------------

def test_log_unit_of_one():
    assert TruncatedSeries.one(8).log_unit() == TruncatedSeries.zero(8)


def test_log_unit_of_t_over_q():
    # Oracle: 12 * sum lambda(N) q^N from the divisor-sum form of the logarithm.
    N = 30
    got = gen_t(N).shift(-1).log_unit()
    expected = TruncatedSeries(
        0, [0] + [12 * Fraction(lambda_fn(n)) for n in range(1, N - 1)]
    )
    assert got == expected
    assert got.coeff(1) == 12 and got.coeff(2) == 18


def test_log_unit_requires_unit_one():
    with pytest.raises(NotUnitOneError):
        S([2, 1, 1]).log_unit()


def test_exp_of_zero():
    assert TruncatedSeries.zero(6, min_exp=1).exp_series() == 1


def test_exp_rejects_constant_term():
    with pytest.raises(HasConstantTermError):
        S([1, 1]).exp_series()


def test_exp_matches_hauptmodul_quotient():
    # exp(-m U_p) must reproduce t(q^p)^m / t(q)^{pm} built from eta products.
    p, m, N = 5, 2, 40
    up = gen_Up(p, N)
    via_exp = (up * (-m)).exp_series()
    t = gen_t(N + 2 * p * m)
    via_eta = t.pow_int(m).v_substitute(p) * t.pow_int(p * m).invert()
    assert first_difference(via_exp, via_eta) is None


def test_log_exp_round_trips(rng):
    for _ in range(10):
        a = rand_unit_series(rng, 10)
        assert a.log_unit().exp_series() == a
        body = rand_series(rng, 9, (0, 0))
        b = TruncatedSeries(1, body.coeffs)  # no constant term
        assert b.exp_series().log_unit() == b


# -- compose -----------------------------------------------------------------

def test_compose_reproduces_eta_quotient():
    N = 80
    table = a_seq(N - 1)
    outer = TruncatedSeries(0, [table.b(n) for n in range(N)])
    assert outer.compose(gen_t(N)) == gen_theta(N)


def test_compose_identity_inner():
    f = S([3, 1, 4, 1, 5])
    q = TruncatedSeries.monomial(1, 5)
    assert f.compose(q) == f


def test_compose_agrees_with_power_summation(rng):
    for _ in range(10):
        f = rand_series(rng, 8, (0, 0))
        g_body = rand_series(rng, 9, (0, 0))
        g = TruncatedSeries(1, g_body.coeffs)
        via_horner = f.compose(g)
        total = TruncatedSeries.zero(g.prec)
        for k in range(8):
            total = total + g.pow_int(k) * f.coeff(k)
        assert first_difference(via_horner, total) is None


def test_compose_rejects_bad_inner():
    from supercong.series import InnerNotPositiveValuationError

    with pytest.raises(InnerNotPositiveValuationError):
        S([1, 1]).compose(S([1, 1]))


# -- differentiate, substitution ----------------------------------------------

def test_differentiate_basic():
    assert TruncatedSeries.monomial(2, 5).differentiate() == S([2], min_exp=1) + 0
    assert TruncatedSeries.constant(9, 4).differentiate() == 0
    assert gen_t(6).differentiate() == S([1, 24, 270, 2032])


def test_v_substitute():
    assert S([1, 1], min_exp=1).v_substitute(3) == TruncatedSeries(
        3, [1, 0, 0, 1], 7
    )
    a = S([2, 3, 4], min_exp=-1)
    assert a.v_substitute(1) == a


def test_substitution_orthogonality(rng):
    for p in (2, 3, 5):
        a = rand_series(rng, 10, (-4, 4))
        assert a.v_substitute(p).lambda_extract(p) == a


def test_lambda_extract_example():
    a = TruncatedSeries(0, [1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1])
    assert a.lambda_extract(5) == S([1, 1, 1])


def test_projection_identity(rng):
    # Extracting every p-th coefficient after inflating one factor projects
    # onto the other factor: Lambda_p(V_p(h) g) = h Lambda_p(g).
    for _ in range(30):
        p = rng.choice([2, 3, 5, 7])
        h = rand_series(rng, rng.randint(4, 12), (-5, 5))
        g = rand_series(rng, rng.randint(8, 30), (-6, 6))
        lhs = (h.v_substitute(p) * g).lambda_extract(p)
        rhs = h * g.lambda_extract(p)
        assert first_difference(lhs, rhs) is None


def test_lambda_extract_eisenstein_congruence():
    from supercong.rationals import vp

    C = gen_C(151)
    folded = C.lambda_extract(5)
    for n in range(30):
        assert vp(folded.coeff(n) - C.coeff(n), 5) >= 4


# -- coeff access ---------------------------------------------------------------

def test_coeff_values_and_bounds():
    C = gen_C(6)
    assert C.coeff(2) == -45
    assert C.coeff(0) == 1
    with pytest.raises(OutOfPrecisionError):
        C.coeff(6)
    with pytest.raises(OutOfPrecisionError):
        C.coeff(-1)


# -- eta products -----------------------------------------------------------------

def test_eta_like_product_known_expansions():
    H = eta_like_product([(1, 12, (3, (1, 2)))], 5)
    assert list(H.coeffs) == [1, -12, 54, -76, -243]
    t_over_q = eta_like_product([(3, 12), (1, -12)], 4)
    assert list(t_over_q.coeffs) == [1, 12, 90, 508]


def test_eta_like_product_vs_naive_product():
    # Oracle: multiply the truncated binomial factors one at a time.
    N = 40
    naive = TruncatedSeries.one(N)
    for n in range(1, N):
        factor = TruncatedSeries(0, [1] + [0] * (n - 1) + [-1] + [0] * (N - n - 1))
        naive = naive * factor.pow_int(9)
    for n in range(1, (N - 1) // 3 + 1):
        factor = TruncatedSeries(0, [1] + [0] * (3 * n - 1) + [-1] + [0] * (N - 3 * n - 1))
        naive = naive * factor.pow_int(3).invert()
    assert gen_theta(N) == naive
    assert gen_theta(N).coeff(0) == 1
    assert gen_theta(N).is_integral()


# -- algebraic laws and precision soundness ------------------------------------------

def test_ring_axioms(rng):
    for _ in range(10):
        a = rand_series(rng, 8, (-2, 2))
        b = rand_series(rng, 8, (-2, 2))
        c = rand_series(rng, 8, (-2, 2))
        assert a + b == b + a
        assert a * b == b * a
        assert first_difference((a + b) + c, a + (b + c)) is None
        assert first_difference((a * b) * c, a * (b * c)) is None
        assert first_difference(a * (b + c), a * b + a * c) is None


def test_precision_soundness_of_pipelines():
    def pipeline(N):
        t = gen_t(N)
        H = gen_H(N)
        return (gen_C(N) * H.pow_int(7) + t.differentiate()).truncated(20)

    small = pipeline(25)
    large = pipeline(90)
    assert first_difference(small, large) is None

    up_small = gen_Up(7, 25)
    up_large = gen_Up(7, 120)
    assert first_difference(up_small, up_large) is None


def test_first_difference_reports_location():
    a = S([1, 2, 3])
    b = S([1, 5, 3])
    assert first_difference(a, b) == 1
    assert first_difference(a, a) is None
