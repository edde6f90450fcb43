"""Generators for the specific arithmetic functions and q-expansions in play.

The arithmetic side: the quadratic character mod 3, the twisted fourth-power
divisor sum sigma4chi3, the harmonic divisor difference lambda_fn, and the
prime-to-3 divisor sum mu_fn.  The q-series side: the degree-3 Hauptmodul t,
its reciprocal-quotient H = q/t, the weight-5 Eisenstein-type series C, the
logarithm L = log(t/q), the per-prime logarithmic defect series generated by
gen_Up, and the weakly holomorphic basis elements C/t^j.

All divisor sums come from a grow-only sieve cache shared by the generators;
the cache is rebuilt wholesale on growth so readers never observe a partially
filled table.
"""

from __future__ import annotations

from fractions import Fraction

from .rationals import normalize
from .series import TruncatedSeries, eta_like_product


def chi3(n: int) -> int:
    """Quadratic character mod 3: 0 on multiples of 3, else +-1."""
    r = n % 3
    if r == 0:
        return 0
    return 1 if r == 1 else -1


class ArithmeticFunctionCache:
    """Sieved values of sigma1 and sigma4chi3 up to a growing bound."""

    def __init__(self):
        self.bound = 0
        self.sigma1: list[int] = [0]
        self.sigma4chi3: list[int] = [0]

    def ensure(self, n: int) -> None:
        if n <= self.bound:
            return
        bound = max(n, 2 * self.bound, 64)
        s1 = [0] * (bound + 1)
        s4 = [0] * (bound + 1)
        for d in range(1, bound + 1):
            w4 = chi3(d) * d**4
            for m in range(d, bound + 1, d):
                s1[m] += d
                s4[m] += w4
        self.bound = bound
        self.sigma1 = s1
        self.sigma4chi3 = s4


_CACHE = ArithmeticFunctionCache()


def sigma1(n: int) -> int:
    if n < 1:
        raise ValueError("sigma1 needs a positive integer")
    _CACHE.ensure(n)
    return _CACHE.sigma1[n]


def sigma4chi3(n: int) -> int:
    """Twisted divisor sum: sum of chi3(d) d^4 over d | n.  Multiplicative."""
    if n < 1:
        raise ValueError("sigma4chi3 needs a positive integer")
    _CACHE.ensure(n)
    return _CACHE.sigma4chi3[n]


def lambda_fn(n):
    """sigma_{-1}(n) - sigma_{-1}(n/3), zero at non-integer arguments."""
    n = Fraction(n)
    if n <= 0:
        return 0
    total = 0
    if n.denominator == 1:
        total += Fraction(sigma1(n.numerator), n.numerator)
    third = n / 3
    if third.denominator == 1 and third >= 1:
        total -= Fraction(sigma1(third.numerator), third.numerator)
    return normalize(total)


def mu_fn(n: int) -> int:
    """12 * sigma1 of the prime-to-3 part of n."""
    if n < 1:
        raise ValueError("mu_fn needs a positive integer")
    while n % 3 == 0:
        n //= 3
    return 12 * sigma1(n)


# q-expansion generators ---------------------------------------------------

def gen_t(N: int) -> TruncatedSeries:
    """Hauptmodul t = q * prod (1-q^{3n})^12 (1-q^n)^-12; starts q + 12q^2."""
    if N < 2:
        raise ValueError("need N >= 2")
    return eta_like_product([(3, 12), (1, -12)], N - 1).shift(1)


def gen_H(N: int) -> TruncatedSeries:
    """H = q/t = prod over 3-coprime n of (1-q^n)^12; constant term 1."""
    if N < 2:
        raise ValueError("need N >= 2")
    return eta_like_product([(1, 12, (3, (1, 2)))], N)


def gen_theta(N: int) -> TruncatedSeries:
    """The weight-3 eta quotient prod (1-q^n)^9 (1-q^{3n})^-3."""
    if N < 2:
        raise ValueError("need N >= 2")
    return eta_like_product([(1, 9), (3, -3)], N)


def gen_C(N: int) -> TruncatedSeries:
    """1 + sum 3*sigma4chi3(n) q^n, the normalized weight-5 Eisenstein series."""
    if N < 1:
        raise ValueError("need N >= 1")
    _CACHE.ensure(N)
    coeffs = [1] + [3 * _CACHE.sigma4chi3[n] for n in range(1, N)]
    return TruncatedSeries(0, coeffs, N)


def gen_L(N: int) -> TruncatedSeries:
    """L = log(t/q) = sum (mu(n)/n) q^n."""
    if N < 2:
        raise ValueError("need N >= 2")
    coeffs = [normalize(Fraction(mu_fn(n), n)) for n in range(1, N)]
    return TruncatedSeries(1, coeffs, N)


def gen_Up(p: int, N: int) -> TruncatedSeries:
    """Logarithmic defect series for the prime p: p*L(q) - L(q^p).

    Generated from the closed form: the coefficient of q^n is 12p*lambda(m)
    where n = p^a * m with p not dividing m, so every coefficient is divisible
    by p and has denominator prime to p.
    """
    if p < 5:
        raise ValueError("need a prime p >= 5")
    if N < 2:
        raise ValueError("need N >= 2")
    coeffs = []
    for n in range(1, N):
        m = n
        while m % p == 0:
            m //= p
        coeffs.append(normalize(12 * p * Fraction(lambda_fn(m))))
    return TruncatedSeries(1, coeffs, N)


def gen_basis(j: int, N: int) -> TruncatedSeries:
    """Basis element C/t^j = q^-j * C * H^j as a Laurent series, min_exp -j."""
    if not 0 <= j <= 3:
        raise ValueError("basis index must lie in 0..3")
    C = gen_C(N)
    if j == 0:
        return C
    return (C * gen_H(N).pow_int(j)).shift(-j)
