"""Dense truncated Laurent series over exact rationals.

A TruncatedSeries stores coefficients for exponents min_exp .. prec-1.
Exponents below min_exp are known to be zero; exponents at prec and above are
unknown.  Every operation computes the largest precision bound that is sound
given its inputs, so precision is never silently invented.

Multiplication has two interchangeable kernels: a schoolbook convolution that
works for any rational coefficients, and a Kronecker-substitution kernel for
integer coefficients that packs each operand into one big integer and lets the
bignum multiply do the convolution.  Both are bit-exact; the fast kernel is
validated against the schoolbook one in the test suite.
"""

from __future__ import annotations

from fractions import Fraction

from .rationals import normalize

try:  # GMP-backed bignum multiply when available; pure ints otherwise
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = None


class NonUnitLeadingCoefficientError(ArithmeticError):
    """Inversion requires a nonzero leading coefficient."""


class NotUnitOneError(ArithmeticError):
    """log_unit requires constant term exactly 1 and no lower terms."""


class HasConstantTermError(ArithmeticError):
    """exp_series requires the argument to vanish at order zero."""


class InnerNotPositiveValuationError(ArithmeticError):
    """Composition requires the inner series to start at exponent >= 1."""


class OutOfPrecisionError(LookupError):
    """Coefficient requested outside the known exponent window."""


# Below this output length the packing overhead beats the bignum gain.
_KRONECKER_CUTOFF = 48


def _all_int(cs) -> bool:
    return all(isinstance(c, int) for c in cs)


def _pack(cs, width_bytes: int) -> int:
    """Pack signed ints into one integer, width_bytes bytes per slot."""
    pos = bytearray(len(cs) * width_bytes)
    neg = bytearray(len(cs) * width_bytes)
    for i, c in enumerate(cs):
        if c > 0:
            b = c.to_bytes((c.bit_length() + 7) // 8, "little")
            off = i * width_bytes
            pos[off : off + len(b)] = b
        elif c < 0:
            c = -c
            b = c.to_bytes((c.bit_length() + 7) // 8, "little")
            off = i * width_bytes
            neg[off : off + len(b)] = b
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kron_mul(xs, ys, n_out: int):
    """First n_out coefficients of xs * ys via Kronecker substitution."""
    bx = max((abs(c).bit_length() for c in xs), default=0)
    by = max((abs(c).bit_length() for c in ys), default=0)
    if bx == 0 or by == 0:
        return [0] * n_out
    # Slot width: product digit bound plus sign bit and carry margin.
    w = bx + by + min(len(xs), len(ys)).bit_length() + 2
    width_bytes = (w + 7) // 8
    wbits = 8 * width_bytes
    a, b = _pack(xs, width_bytes), _pack(ys, width_bytes)
    v = int(_mpz(a) * _mpz(b)) if _mpz is not None else a * b
    negate = v < 0
    if negate:
        v = -v
    nbytes = max((v.bit_length() + 7) // 8, n_out * width_bytes) + width_bytes
    data = v.to_bytes(nbytes, "little")
    half = 1 << (wbits - 1)
    full = 1 << wbits
    out = []
    carry = 0
    for k in range(n_out):
        d = int.from_bytes(data[k * width_bytes : (k + 1) * width_bytes], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(-d if negate else d)
    return out


def _conv(xs, ys, n_out: int):
    """Truncated schoolbook convolution, any exact-rational coefficients."""
    out = [0] * n_out
    if len(xs) > len(ys):
        xs, ys = ys, xs
    for i, x in enumerate(xs):
        if i >= n_out:
            break
        if not x:
            continue
        jmax = min(len(ys), n_out - i)
        for j in range(jmax):
            y = ys[j]
            if y:
                out[i + j] += x * y
    return out


def _mul_lists(xs, ys, n_out: int):
    if n_out <= 0:
        return []
    if n_out >= _KRONECKER_CUTOFF and _all_int(xs) and _all_int(ys):
        return _kron_mul(xs[:n_out], ys[:n_out], n_out)
    return [normalize(c) if isinstance(c, Fraction) else c for c in _conv(xs, ys, n_out)]


def _pow_lists(xs, k: int, n_out: int):
    """xs**k truncated to n_out coefficients, binary exponentiation."""
    acc = None
    base = xs[:n_out]
    while k:
        if k & 1:
            acc = base[:] if acc is None else _mul_lists(acc, base, n_out)
        k >>= 1
        if k:
            base = _mul_lists(base, base, n_out)
    return acc if acc is not None else [1] + [0] * (n_out - 1)


class TruncatedSeries:
    """Laurent series with exact coefficients and an explicit precision bound."""

    __slots__ = ("min_exp", "prec", "coeffs")

    def __init__(self, min_exp: int, coeffs, prec: int | None = None):
        coeffs = tuple(normalize(c) for c in coeffs)
        if prec is None:
            prec = min_exp + len(coeffs)
        if prec - min_exp != len(coeffs):
            raise ValueError(
                f"coefficient count {len(coeffs)} != prec - min_exp = {prec - min_exp}"
            )
        if prec <= min_exp:
            raise ValueError("need prec > min_exp")
        self.min_exp = min_exp
        self.prec = prec
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, prec: int, min_exp: int = 0):
        return cls(min_exp, [0] * (prec - min_exp), prec)

    @classmethod
    def one(cls, prec: int):
        return cls(0, [1] + [0] * (prec - 1), prec)

    @classmethod
    def constant(cls, value, prec: int):
        return cls(0, [value] + [0] * (prec - 1), prec)

    @classmethod
    def monomial(cls, exponent: int, prec: int, value=1):
        if prec <= exponent:
            raise ValueError("prec must exceed the monomial exponent")
        return cls(exponent, [value] + [0] * (prec - exponent - 1), prec)

    # -- basic access ------------------------------------------------------

    def coeff(self, n: int):
        """Stored coefficient of q^n; never fabricates values outside the window."""
        if n < self.min_exp or n >= self.prec:
            raise OutOfPrecisionError(
                f"exponent {n} outside known window [{self.min_exp}, {self.prec})"
            )
        return self.coeffs[n - self.min_exp]

    def _at(self, n: int):
        # Coefficient with known-zero semantics below min_exp; caller must
        # guarantee n < prec.
        if n < self.min_exp:
            return 0
        return self.coeffs[n - self.min_exp]

    @property
    def rel_prec(self) -> int:
        return self.prec - self.min_exp

    def is_integral(self) -> bool:
        return _all_int(self.coeffs)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by q^k (exact reindexing)."""
        return TruncatedSeries(self.min_exp + k, self.coeffs, self.prec + k)

    def truncated(self, new_prec: int) -> "TruncatedSeries":
        """Drop knowledge above new_prec."""
        if new_prec > self.prec:
            raise ValueError("cannot raise precision by truncation")
        if new_prec <= self.min_exp:
            raise ValueError("truncation would leave no coefficients")
        return TruncatedSeries(self.min_exp, self.coeffs[: new_prec - self.min_exp], new_prec)

    def trim(self) -> "TruncatedSeries":
        """Advance min_exp past stored leading zeros (lossless)."""
        i = 0
        top = len(self.coeffs) - 1
        while i < top and self.coeffs[i] == 0:
            i += 1
        if i == 0:
            return self
        return TruncatedSeries(self.min_exp + i, self.coeffs[i:], self.prec)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._add_scalar(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        min_exp = min(self.min_exp, other.min_exp)
        prec = min(self.prec, other.prec)
        if prec <= min_exp:
            raise ValueError("operands share no known exponent range")
        coeffs = [self._at(n) + other._at(n) for n in range(min_exp, prec)]
        return TruncatedSeries(min_exp, coeffs, prec)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._add_scalar(-other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncatedSeries(self.min_exp, [-c for c in self.coeffs], self.prec)

    def _add_scalar(self, value):
        if self.prec <= 0:
            raise OutOfPrecisionError("constant term lies outside the known window")
        min_exp = min(self.min_exp, 0)
        coeffs = [self._at(n) for n in range(min_exp, self.prec)]
        coeffs[-min_exp] += value
        return TruncatedSeries(min_exp, coeffs, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.min_exp, [c * other for c in self.coeffs], self.prec)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        min_exp = self.min_exp + other.min_exp
        prec = min(self.prec + other.min_exp, other.prec + self.min_exp)
        n_out = prec - min_exp
        coeffs = _mul_lists(list(self.coeffs), list(other.coeffs), n_out)
        return TruncatedSeries(min_exp, coeffs, prec)

    __rmul__ = __mul__

    def mul(self, other):
        return self * other

    def add(self, other):
        return self + other

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            return self * (1 / other)
        return NotImplemented

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs a nonzero leading coefficient."""
        a = self.trim()
        if a.coeffs[0] == 0:
            raise NonUnitLeadingCoefficientError("leading coefficient is zero")
        n = a.rel_prec
        a0 = a.coeffs[0]
        inv0 = normalize(Fraction(1) / a0)
        out = [inv0] + [0] * (n - 1)
        cs = a.coeffs
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                c = cs[j]
                if c:
                    acc += c * out[k - j]
            out[k] = normalize(-acc * inv0) if acc else 0
        return TruncatedSeries(-a.min_exp, out, -a.min_exp + n)

    def pow_int(self, k: int) -> "TruncatedSeries":
        """Integer power; binary exponentiation, negative k via invert."""
        if k == 0:
            return TruncatedSeries.one(self.rel_prec)
        if k < 0:
            return self.invert().pow_int(-k)
        n = self.rel_prec
        out = _pow_lists(list(self.coeffs), k, n)
        return TruncatedSeries(k * self.min_exp, out, k * self.min_exp + n)

    def __pow__(self, k: int):
        return self.pow_int(k)

    # -- transcendental-style operations ------------------------------------

    def log_unit(self) -> "TruncatedSeries":
        """log of a unit power series (constant term 1); constant term 0."""
        for n in range(self.min_exp, min(0, self.prec)):
            if self._at(n) != 0:
                raise NotUnitOneError(f"nonzero coefficient at exponent {n}")
        if self.prec < 1 or self._at(0) != 1:
            raise NotUnitOneError("constant term must be exactly 1")
        n_out = self.prec
        a = [self._at(i) for i in range(n_out)]
        out = [0] * n_out
        for n in range(1, n_out):
            acc = 0
            for k in range(1, n):
                lk = out[k]
                if lk:
                    c = a[n - k]
                    if c:
                        acc += k * lk * c
            out[n] = normalize(a[n] - Fraction(acc, n)) if acc else a[n]
        return TruncatedSeries(0, out, n_out)

    def exp_series(self) -> "TruncatedSeries":
        """exp of a series with no constant term; constant term 1."""
        for n in range(self.min_exp, min(1, self.prec)):
            if self._at(n) != 0:
                raise HasConstantTermError(f"nonzero coefficient at exponent {n}")
        n_out = self.prec
        if n_out < 1:
            raise HasConstantTermError("window does not reach the constant term")
        a = [self._at(i) for i in range(n_out)]
        out = [1] + [0] * (n_out - 1)
        for n in range(1, n_out):
            acc = 0
            for k in range(1, n + 1):
                c = a[k]
                if c:
                    e = out[n - k]
                    if e:
                        acc += k * c * e
            out[n] = normalize(Fraction(acc, n)) if acc else 0
        return TruncatedSeries(0, out, n_out)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(q)), Horner-evaluated from the top coefficient."""
        if self.min_exp < 0:
            raise ValueError("outer series must be a power series (min_exp >= 0)")
        g = inner.trim()
        if g.min_exp < 1:
            raise InnerNotPositiveValuationError(
                "inner series must have positive valuation"
            )
        prec = min(g.prec, self.prec * g.min_exp)
        if prec < 1:
            raise ValueError("composition has empty sound range")
        g_rel = [g._at(n) for n in range(prec)]
        acc = [self.coeffs[-1]] + [0] * (prec - 1)
        for k in range(self.prec - 2, -1, -1):
            acc = _mul_lists(acc, g_rel, prec)
            fk = self._at(k)
            if fk:
                acc[0] += fk
        return TruncatedSeries(0, acc, prec)

    def differentiate(self) -> "TruncatedSeries":
        """Termwise d/dq; the precision bound drops by one."""
        coeffs = [n * c for n, c in zip(range(self.min_exp, self.prec), self.coeffs)]
        return TruncatedSeries(self.min_exp - 1, coeffs, self.prec - 1)

    # -- substitution operators ---------------------------------------------

    def v_substitute(self, p: int) -> "TruncatedSeries":
        """q -> q^p: exponent n maps to pn."""
        if p < 1:
            raise ValueError("substitution stride must be positive")
        min_exp = p * self.min_exp
        prec = p * (self.prec - 1) + 1
        coeffs = [0] * (prec - min_exp)
        for i, c in enumerate(self.coeffs):
            coeffs[i * p] = c
        return TruncatedSeries(min_exp, coeffs, prec)

    def lambda_extract(self, p: int) -> "TruncatedSeries":
        """Keep exponents divisible by p, reindexed n -> n/p."""
        if p < 1:
            raise ValueError("extraction stride must be positive")
        min_exp = -((-self.min_exp) // p)
        prec = (self.prec - 1) // p + 1
        coeffs = [self.coeffs[e * p - self.min_exp] for e in range(min_exp, prec)]
        return TruncatedSeries(min_exp, coeffs, prec)

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(other, max(self.prec, 1))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        lo = min(self.min_exp, other.min_exp)
        hi = min(self.prec, other.prec)
        return all(self._at(n) == other._at(n) for n in range(lo, hi))

    __hash__ = None

    def __repr__(self):
        return (
            f"TruncatedSeries({self._term_str(6)}, "
            f"min_exp={self.min_exp}, prec={self.prec})"
        )

    def _term_str(self, max_terms: int) -> str:
        parts = []
        shown = 0
        for n in range(self.min_exp, self.prec):
            c = self._at(n)
            if c == 0 and parts:
                continue
            if shown >= max_terms:
                parts.append("...")
                break
            if n == 0:
                parts.append(f"{c}")
            elif n == 1:
                parts.append(f"{c}*q")
            else:
                parts.append(f"{c}*q^{n}")
            shown += 1
        return " + ".join(parts) if parts else "0"


def first_difference(a: TruncatedSeries, b: TruncatedSeries) -> int | None:
    """Smallest exponent in the common known range where a and b differ."""
    lo = min(a.min_exp, b.min_exp)
    hi = min(a.prec, b.prec)
    for n in range(lo, hi):
        if a._at(n) != b._at(n):
            return n
    return None


def eta_like_product(terms, N: int) -> TruncatedSeries:
    """Expand a product of (1 - q^{d n})^e over filtered n >= 1 to precision N.

    Each term is (d, e) or (d, e, (mod, residues)); the optional filter keeps
    only the n with n % mod in residues.  The expansion runs through the
    logarithmic-derivative recurrence k*p_k = sum_j D_j p_{k-j}, which stays in
    integers whenever the product has integer coefficients.
    """
    if N < 1:
        raise ValueError("precision must be at least 1")
    dlog = [0] * N
    for term in terms:
        if len(term) == 2:
            d, e = term
            filt = None
        else:
            d, e, filt = term
        for n in range(1, (N - 1) // d + 1):
            if filt is not None and n % filt[0] not in filt[1]:
                continue
            base = d * n
            w = e * base
            for k in range(base, N, base):
                dlog[k] -= w
    out = [0] * N
    out[0] = 1
    for k in range(1, N):
        acc = 0
        for j in range(1, k + 1):
            dj = dlog[j]
            if dj:
                c = out[k - j]
                if c:
                    acc += dj * c
        if isinstance(acc, int):
            q, r = divmod(acc, k)
            out[k] = q if r == 0 else Fraction(acc, k)
        else:
            out[k] = normalize(acc / k)
    return TruncatedSeries(0, out, N)
