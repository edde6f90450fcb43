"""The integer sequence A_n, its order-2 recurrence, and shift-operator algebra.

A_n is generated forward from A_0 = 1, A_1 = 9 by

    (n+2)^4 A_{n+2} = 3 R(n) A_{n+1} - 729 (n+1)^4 A_n,
    R(n) = 18n^4 + 108n^3 + 250n^2 + 264n + 107,

with the division asserted exact at every step.  The same module carries the
noncommutative shift-operator algebra (S acts by S f(n) = f(n+1), and
S P(n) = P(n+1) S for polynomial coefficients) used to verify that the
order-3 operator factors through the order-2 one, which is why the sequence
satisfies the shorter recurrence at all.

An independent ground-truth generator computes A_n directly from the cube of
the hypergeometric series with parameter pair (1/3, 1/3): the z^k coefficient
of the base series is ((1/3)_k / k!)^2.
"""

from __future__ import annotations

from fractions import Fraction


class NonIntegralStepError(ArithmeticError):
    """A recurrence step produced a non-integer value (implementation bug)."""


class TableTooShortError(LookupError):
    """An operator application reached past the end of the sequence table."""


class IntPolynomial:
    """Polynomial in the index variable n with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs) if coeffs else (0,)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __mul__(self, other):
        other = _as_poly(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def shift_index(self, k: int) -> "IntPolynomial":
        """P(n) -> P(n + k)."""
        out = IntPolynomial([0])
        power = IntPolynomial([1])
        base = IntPolynomial([k, 1])
        for c in self.coeffs:
            if c:
                out = out + power * IntPolynomial([c])
            power = power * base
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


def _as_poly(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    if isinstance(x, int):
        return IntPolynomial([x])
    raise TypeError(f"cannot coerce {x!r} to IntPolynomial")


class OreOperator:
    """Finite sum of P_k(n) * S^k terms in the shift algebra."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        cleaned = {}
        for k, poly in dict(terms).items():
            poly = _as_poly(poly)
            if k < 0:
                raise ValueError("shift powers must be nonnegative")
            if poly.coeffs != (0,):
                cleaned[k] = poly
        self.terms = cleaned

    @classmethod
    def identity(cls):
        return cls({0: IntPolynomial([1])})

    @classmethod
    def shift(cls):
        return cls({1: IntPolynomial([1])})

    @property
    def order(self) -> int:
        return max(self.terms, default=0)

    def __add__(self, other):
        out = dict(self.terms)
        for k, poly in other.terms.items():
            out[k] = out.get(k, IntPolynomial([0])) + poly
        return OreOperator(out)

    def __neg__(self):
        return OreOperator({k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Composition: S^i P(n) rewrites to P(n+i) S^i before collecting."""
        if not isinstance(other, OreOperator):
            return NotImplemented
        out: dict[int, IntPolynomial] = {}
        for i, P in self.terms.items():
            for j, Q in other.terms.items():
                contrib = P * Q.shift_index(i)
                key = i + j
                out[key] = out.get(key, IntPolynomial([0])) + contrib
        return OreOperator(out)

    def apply(self, table: "SequenceTable", n: int) -> int:
        """Evaluate sum P_k(n) * table[n + k]."""
        top = n + self.order
        if n < 0 or top > table.n_max:
            raise TableTooShortError(
                f"need indices up to {top}, table ends at {table.n_max}"
            )
        return sum(P(n) * table.a(n + k) for k, P in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        parts = [f"({list(p.coeffs)})*S^{k}" for k, p in sorted(self.terms.items())]
        return "OreOperator(" + " + ".join(parts) + ")"


def ore_multiply(f: OreOperator, g: OreOperator) -> OreOperator:
    return f * g


def apply_operator(op: OreOperator, table: "SequenceTable", n: int) -> int:
    return op.apply(table, n)


R_POLY = IntPolynomial([107, 264, 250, 108, 18])


def _binomial_quartic(shift: int) -> IntPolynomial:
    # (n + shift)^4
    base = IntPolynomial([shift, 1])
    return base * base * base * base


def l2_operator() -> OreOperator:
    """Order-2 annihilator: 729(n+1)^4 - 3R(n) S + (n+2)^4 S^2."""
    return OreOperator(
        {
            0: 729 * _binomial_quartic(1),
            1: -3 * R_POLY,
            2: _binomial_quartic(2),
        }
    )


def l3_operator() -> OreOperator:
    """Order-3 annihilator with the specialized quartic coefficients."""
    return OreOperator(
        {
            0: -19683 * _binomial_quartic(1),
            1: 81 * IntPolynomial([251, 552, 466, 180, 27]),
            2: -3 * IntPolynomial([891, 1448, 898, 252, 27]),
            3: _binomial_quartic(3),
        }
    )


def shift_minus_27() -> OreOperator:
    return OreOperator({1: IntPolynomial([1]), 0: IntPolynomial([-27])})


class SequenceTable:
    """A_0..A_n_max as exact integers, with B_n = (-1)^n A_n derived."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def a(self, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise TableTooShortError(f"index {n} beyond table end {self.n_max}")
        return self.values[n]

    def b(self, n: int) -> int:
        v = self.a(n)
        return v if n % 2 == 0 else -v

    def __len__(self):
        return len(self.values)


_table: list[int] = [1, 9]


def a_seq(n_max: int) -> SequenceTable:
    """Integer table A_0..A_n_max from the order-2 recurrence."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    while len(_table) <= n_max:
        n = len(_table) - 2
        num = 3 * R_POLY(n) * _table[n + 1] - 729 * (n + 1) ** 4 * _table[n]
        den = (n + 2) ** 4
        q, r = divmod(num, den)
        if r != 0:
            raise NonIntegralStepError(f"division by (n+2)^4 failed at n = {n}")
        _table.append(q)
    return SequenceTable(_table[: n_max + 1])


def a_seq_hypergeometric(n_max: int) -> list[int]:
    """Ground truth for small n: 27^n times the z^n coefficient of the cube
    of the series with z^k coefficient ((1/3)_k / k!)^2."""
    base = [Fraction(1)]
    for k in range(n_max):
        ratio = (Fraction(1, 3) + k) / (k + 1)
        base.append(base[-1] * ratio * ratio)
    square = [
        sum(base[i] * base[n - i] for i in range(n + 1)) for n in range(n_max + 1)
    ]
    cube = [
        sum(base[i] * square[n - i] for i in range(n + 1)) for n in range(n_max + 1)
    ]
    out = []
    for n, c in enumerate(cube):
        value = 27**n * c
        if value.denominator != 1:
            raise NonIntegralStepError(f"hypergeometric coefficient {n} not integral")
        out.append(value.numerator)
    return out
