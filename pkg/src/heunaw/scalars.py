"""Scalar kernel: exact rationals and arbitrary-precision complex floats.

Exact values are gmpy2 ``mpq`` rationals (always gcd-reduced, positive
denominator).  Half-integer powers of the base parameters never appear:
callers parameterize with square roots (s = q^{1/2}, e_j = eps_j^{1/2}),
so every exact computation stays inside Q.

Floating values are ``BigComplex``: a pair of mpmath floats carrying an
explicit precision in bits.  Operations run at the max precision of the
operands.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

from .errors import DivisionByZero, ParseError

#: The exact scalar type used throughout the exact modules.
QQ = mpq

ZERO = mpq(0)
ONE = mpq(1)

MIN_PRECISION = 64
DEFAULT_PRECISION = 256


def qq(x) -> mpq:
    """Coerce an int, string or rational to an exact scalar."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return mpq(x)


def parse_scalar(text: str) -> mpq:
    """Parse the text form "±num/den" (den omitted when 1)."""
    t = text.strip()
    try:
        if "/" in t:
            num_s, den_s = t.split("/")
            num, den = mpz(num_s.strip()), mpz(den_s.strip())
            if den == 0:
                raise DivisionByZero(f"zero denominator in scalar {text!r}")
            return mpq(num, den)
        return mpq(mpz(t))
    except ValueError as exc:
        raise ParseError(f"malformed exact scalar {text!r}") from exc


def format_scalar(x: mpq) -> str:
    return str(mpq(x))


def scalar_arith(a: mpq, b: mpq, op: str) -> mpq:
    """Named-op arithmetic used by the CLI layer; raises DivisionByZero."""
    a, b = mpq(a), mpq(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZero("division by zero")
        return a / b
    if op == "neg":
        return -a
    if op == "eq":
        return mpq(1) if a == b else mpq(0)
    raise ValueError(f"unknown op {op!r}")


def pow_int(a, k: int):
    """a**k by repeated squaring; works for mpq and BigComplex."""
    if k == 0:
        return mpq(1) if isinstance(a, mpq) else BigComplex.from_int(1, a.precision)
    if k < 0:
        if isinstance(a, mpq):
            if a == 0:
                raise DivisionByZero("0 raised to a negative power")
            return pow_int(mpq(1) / a, -k)
        return pow_int(a.inverse(), -k)
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else result * base
        base = base * base
        k >>= 1
    return result


def rational_sqrt(x: mpq):
    """Exact square root of a rational, or None when it is not rational."""
    x = mpq(x)
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = gmpy2.isqrt(num), gmpy2.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return mpq(rn, rd)
    return None


# ---------------------------------------------------------------------------
# BigComplex
# ---------------------------------------------------------------------------

def _mpc(value, prec):
    with mpmath.workprec(prec):
        return mpmath.mpc(value)


@dataclass(frozen=True)
class BigComplex:
    """Arbitrary-precision complex number with explicit precision in bits."""

    real: mpmath.mpf
    imag: mpmath.mpf
    precision: int

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise ValueError(f"precision must be >= {MIN_PRECISION} bits")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_int(n: int, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        with mpmath.workprec(precision):
            return BigComplex(mpmath.mpf(n), mpmath.mpf(0), precision)

    @staticmethod
    def from_exact(x: mpq, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        x = mpq(x)
        with mpmath.workprec(precision):
            r = mpmath.mpf(int(x.numerator)) / mpmath.mpf(int(x.denominator))
            return BigComplex(r, mpmath.mpf(0), precision)

    @staticmethod
    def from_str(text: str, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        with mpmath.workprec(precision):
            return BigComplex(mpmath.mpf(text), mpmath.mpf(0), precision)

    @staticmethod
    def from_mpc(value, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        with mpmath.workprec(precision):
            v = mpmath.mpc(value)
            return BigComplex(v.real, v.imag, precision)

    # -- helpers -------------------------------------------------------------

    @property
    def mpc(self):
        return mpmath.mpc(self.real, self.imag)

    def _binary(self, other, fn):
        if isinstance(other, (int, mpq)):
            other = (BigComplex.from_int(other, self.precision)
                     if isinstance(other, int)
                     else BigComplex.from_exact(other, self.precision))
        prec = max(self.precision, other.precision)
        with mpmath.workprec(prec):
            v = fn(self.mpc, other.mpc)
            v = mpmath.mpc(v)
            return BigComplex(v.real, v.imag, prec)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        def div(a, b):
            if b == 0:
                raise DivisionByZero("division by zero BigComplex")
            return a / b
        return self._binary(other, div)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        with mpmath.workprec(self.precision):
            return BigComplex(-self.real, -self.imag, self.precision)

    def inverse(self) -> "BigComplex":
        if self.real == 0 and self.imag == 0:
            raise DivisionByZero("inverse of zero BigComplex")
        with mpmath.workprec(self.precision):
            v = mpmath.mpc(1) / self.mpc
            return BigComplex(v.real, v.imag, self.precision)

    def sqrt(self) -> "BigComplex":
        """Principal square root."""
        with mpmath.workprec(self.precision):
            v = mpmath.sqrt(self.mpc)
            v = mpmath.mpc(v)
            return BigComplex(v.real, v.imag, self.precision)

    def abs(self):
        with mpmath.workprec(self.precision):
            return mpmath.fabs(self.mpc)

    def __eq__(self, other):
        if not isinstance(other, BigComplex):
            return NotImplemented
        return self.real == other.real and self.imag == other.imag

    def __repr__(self):
        return f"BigComplex({self.real!r}, {self.imag!r}, prec={self.precision})"
