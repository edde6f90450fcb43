import random
from fractions import Fraction

import pytest

from supercong.series import TruncatedSeries


def rand_rational(rng: random.Random, span: int = 50) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def rand_series(
    rng: random.Random,
    length: int = 12,
    min_exp_range: tuple[int, int] = (0, 0),
    integral: bool = False,
    span: int = 30,
) -> TruncatedSeries:
    min_exp = rng.randint(*min_exp_range)
    if integral:
        coeffs = [rng.randint(-span, span) for _ in range(length)]
    else:
        coeffs = [rand_rational(rng, span) for _ in range(length)]
    return TruncatedSeries(min_exp, coeffs)


def rand_unit_series(rng: random.Random, length: int = 12, span: int = 30):
    s = rand_series(rng, length, (0, 0), integral=False, span=span)
    coeffs = list(s.coeffs)
    coeffs[0] = Fraction(1)
    return TruncatedSeries(0, coeffs)


@pytest.fixture
def rng():
    return random.Random(20260810)
