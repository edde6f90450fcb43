"""Exact rational arithmetic, p-adic valuations, and primality helpers.

Rationals are represented by Python ints and ``fractions.Fraction``; both are
exact and always normalized (gcd 1, positive denominator), so every value in
the system is an exact rational with no rounding anywhere.  The p-adic
valuation of zero is a distinguished infinity marker, never a sentinel
integer, so a vanishing difference can be told apart from a merely divisible
one.
"""

from __future__ import annotations

from fractions import Fraction

Rational = "int | Fraction"


class NotPIntegralError(ArithmeticError):
    """An argument that must be p-integral has negative p-adic valuation."""


def normalize(x):
    """Return x as an int when its denominator is 1, else as a Fraction."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"not an exact rational: {x!r}")


class Valuation:
    """A p-adic valuation: an integer or infinity (the valuation of zero)."""

    __slots__ = ("value",)

    INFINITY: "Valuation"

    def __init__(self, value):
        self.value = value  # int, or None for infinity

    @property
    def is_infinite(self):
        return self.value is None

    def _cmp_key(self, other):
        if isinstance(other, Valuation):
            other = other.value
        elif not isinstance(other, int):
            return NotImplemented, NotImplemented
        a = self.value if self.value is not None else float("inf")
        b = other if other is not None else float("inf")
        return a, b

    def __eq__(self, other):
        a, b = self._cmp_key(other)
        if a is NotImplemented:
            return NotImplemented
        return a == b

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        if a is NotImplemented:
            return NotImplemented
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        if a is NotImplemented:
            return NotImplemented
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        if a is NotImplemented:
            return NotImplemented
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        if a is NotImplemented:
            return NotImplemented
        return a >= b

    def __add__(self, other):
        if isinstance(other, int):
            other = Valuation(other)
        if not isinstance(other, Valuation):
            return NotImplemented
        if self.value is None or other.value is None:
            return Valuation.INFINITY
        return Valuation(self.value + other.value)

    __radd__ = __add__

    def __hash__(self):
        return hash(("Valuation", self.value))

    def __repr__(self):
        return "Valuation.INFINITY" if self.value is None else f"Valuation({self.value})"

    def to_json(self):
        return "inf" if self.value is None else self.value

    @classmethod
    def from_json(cls, v):
        if v is None:
            return None
        return cls(None) if v == "inf" else cls(int(v))


Valuation.INFINITY = Valuation(None)


# Deterministic Miller-Rabin witnesses, valid for all n < 3.3e24 (covers 2^64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_prime_cache: dict[int, bool] = {}


def is_prime(n: int) -> bool:
    """Deterministic primality test for n < 2^64 (and well beyond)."""
    if n < 2:
        return False
    cached = _prime_cache.get(n)
    if cached is not None:
        return cached
    result = _is_prime_uncached(n)
    if len(_prime_cache) < 1_000_000:
        _prime_cache[n] = result
    return result


def _is_prime_uncached(n: int) -> bool:
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    if n in small:
        return True
    for p in small:
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def _vp_int(n: int, p: int) -> int:
    # n != 0
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int) -> Valuation:
    """p-adic valuation of an exact rational; Valuation.INFINITY for zero.

    v_p(a/b) = v_p(a) - v_p(b).  Rejects non-prime p.
    """
    if not is_prime(p):
        raise ValueError(f"vp requires a prime, got {p}")
    if isinstance(x, int):
        if x == 0:
            return Valuation.INFINITY
        return Valuation(_vp_int(x, p))
    if isinstance(x, Fraction):
        if x == 0:
            return Valuation.INFINITY
        return Valuation(_vp_int(x.numerator, p) - _vp_int(x.denominator, p))
    raise TypeError(f"not an exact rational: {x!r}")


def congruent_mod_power(x, y, p: int, k: int) -> bool:
    """True iff v_p(x - y) >= k, for p-integral rationals x and y.

    Raises NotPIntegralError when either argument has negative valuation,
    which is a different failure from the congruence simply not holding.
    """
    if k < 1:
        raise ValueError(f"modulus exponent must be positive, got {k}")
    if vp(x, p) < 0:
        raise NotPIntegralError(f"{x} is not {p}-integral")
    if vp(y, p) < 0:
        raise NotPIntegralError(f"{y} is not {p}-integral")
    return vp(x - y, p) >= k


def format_rational(x) -> str:
    """Decimal string for ints, 'num/den' for proper fractions."""
    x = normalize(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str):
    """Inverse of format_rational."""
    if "/" in s:
        num, den = s.split("/")
        return normalize(Fraction(int(num), int(den)))
    return int(s)
