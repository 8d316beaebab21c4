"""Univariate polynomials and rational functions over exact rationals.

Rational functions are kept normalized at all times: numerator and
denominator coprime, denominator monic.  Identity checks throughout the
package then reduce to structural equality of normalized forms.

Polynomial gcd goes through the subresultant (fraction-free) route over
integers after clearing denominators, which avoids the coefficient
blowup of naive Euclid over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import gcd as zgcd
from gmpy2 import lcm as zlcm
from gmpy2 import mpq, mpz

from .errors import (HigherOrderPole, NotAPole, PoleAtPoint, ZeroDenominator,
                     ZeroScale)
from .scalars import QQ, qq

# ---------------------------------------------------------------------------
# Polynomial
# ---------------------------------------------------------------------------


def _trim(coeffs):
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial; coeffs[k] is the z^k coefficient, no trailing zeros."""

    coeffs: tuple

    @staticmethod
    def new(coeffs: Sequence) -> "Polynomial":
        return Polynomial(_trim([qq(c) for c in coeffs]))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def const(c) -> "Polynomial":
        return Polynomial.new([c])

    @staticmethod
    def monomial(k: int, c=1) -> "Polynomial":
        return Polynomial.new([0] * k + [qq(c)])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> mpq:
        if not self.coeffs:
            return mpq(0)
        return self.coeffs[-1]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(_trim(out))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial(())
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Polynomial(_trim(out))

    def scale(self, c) -> "Polynomial":
        c = qq(c)
        if c == 0:
            return Polynomial(())
        return Polynomial(tuple(x * c for x in self.coeffs))

    def shift_arg(self, c) -> "Polynomial":
        """Return z -> p(c*z)."""
        c = qq(c)
        out, power = [], mpq(1)
        for coeff in self.coeffs:
            out.append(coeff * power)
            power *= c
        return Polynomial(_trim(out))

    def reverse(self, degree: int | None = None) -> "Polynomial":
        """Coefficient reversal: z^degree * p(1/z)."""
        d = self.degree() if degree is None else degree
        out = [mpq(0)] * (d + 1)
        for i, c in enumerate(self.coeffs):
            out[d - i] = c
        return Polynomial(_trim(out))

    def __call__(self, z0) -> mpq:
        z0 = qq(z0)
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(_trim([c * i for i, c in enumerate(self.coeffs)][1:]))

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return Polynomial(tuple(c / lead for c in self.coeffs))

    def divmod(self, other: "Polynomial"):
        """Exact field division with remainder."""
        if other.is_zero():
            raise ZeroDenominator("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(()), self
        quot = [mpq(0)] * (dq + 1)
        dlead = other.coeffs[-1]
        dlen = len(other.coeffs)
        for i in range(dq, -1, -1):
            c = rem[i + dlen - 1] / dlead
            quot[i] = c
            if c != 0:
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] -= c * oc
        return Polynomial(_trim(quot)), Polynomial(_trim(rem))

    def deflate(self, z0) -> "Polynomial":
        """Synthetic division by (z - z0); requires p(z0) == 0."""
        z0 = qq(z0)
        out = [mpq(0)] * max(len(self.coeffs) - 1, 0)
        acc = mpq(0)
        for i in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * z0 + self.coeffs[i]
            out[i - 1] = acc
        if acc * z0 + (self.coeffs[0] if self.coeffs else mpq(0)) != 0:
            raise ValueError("deflation point is not a root")
        return Polynomial(_trim(out))

    def to_text(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*{var}")
            else:
                parts.append(f"{c}*{var}^{i}")
        return " + ".join(parts)


X = Polynomial.monomial(1)
P_ONE = Polynomial.const(1)


# ---------------------------------------------------------------------------
# integer subresultant gcd
# ---------------------------------------------------------------------------


def _to_int_primitive(p: Polynomial):
    """Clear denominators and divide out integer content; list of mpz."""
    if p.is_zero():
        return []
    den = mpz(1)
    for c in p.coeffs:
        den = zlcm(den, c.denominator)
    ints = [mpz(c.numerator * (den // c.denominator)) for c in p.coeffs]
    content = mpz(0)
    for c in ints:
        content = zgcd(content, c)
    return [c // content for c in ints]


def _int_pseudo_rem(a, b):
    """Pseudo-remainder of integer coefficient lists (dense, mpz)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        la = a[-1]
        a = [c * lb for c in a]
        for j in range(db + 1):
            a[da - db + j] -= la * b[j]
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd via a primitive pseudo-remainder sequence over mpz.

    Each remainder is divided by its own integer content, so every
    division is exact regardless of how the pseudo-remainder was scaled.
    """
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    a, b = _to_int_primitive(p), _to_int_primitive(q)
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _int_pseudo_rem(a, b)
        if not r:
            res = b
            break
        if len(r) == 1:
            return P_ONE
        content = mpz(0)
        for c in r:
            content = zgcd(content, c)
        a, b = b, [c // content for c in r]
    return Polynomial(_trim([mpq(c) for c in res])).monic()


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """Normalized ratio of polynomials: coprime, monic denominator."""

    num: Polynomial
    den: Polynomial

    @staticmethod
    def new(num: Polynomial, den: Polynomial) -> "RationalFunction":
        if den.is_zero():
            raise ZeroDenominator("zero denominator rational function")
        if num.is_zero():
            return RationalFunction(Polynomial(()), P_ONE)
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
        lead = den.leading()
        if lead != 1:
            num = num.scale(mpq(1) / lead)
            den = den.scale(mpq(1) / lead)
        return RationalFunction(num, den)

    @staticmethod
    def from_poly(p: Polynomial) -> "RationalFunction":
        return RationalFunction(p, P_ONE)

    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction(Polynomial.new([c]), P_ONE)

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction(Polynomial(()), P_ONE)

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("not a constant rational function")
        if self.num.is_zero():
            return mpq(0)
        return self.num.coeffs[0] / self.den.coeffs[0]

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        g = poly_gcd(self.den, other.den)
        if g.degree() > 0:
            d1, _ = self.den.divmod(g)
            d2, _ = other.den.divmod(g)
        else:
            d1, d2 = self.den, other.den
        num = self.num * d2 + other.num * d1
        den = self.den * d2
        return RationalFunction.new(num, den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero()
        # cross-reduce before the full products to keep degrees small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.degree() <= 0 else self.num.divmod(g1)[0]
        d2 = other.den if g1.degree() <= 0 else other.den.divmod(g1)[0]
        n2 = other.num if g2.degree() <= 0 else other.num.divmod(g2)[0]
        d1 = self.den if g2.degree() <= 0 else self.den.divmod(g2)[0]
        return RationalFunction.new(n1 * n2, d1 * d2)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDenominator("division by the zero rational function")
        return self * RationalFunction.new(other.den, other.num)

    def scale(self, c) -> "RationalFunction":
        c = qq(c)
        if c == 0:
            return RationalFunction.zero()
        return RationalFunction(self.num.scale(c), self.den)

    # -- substitutions --------------------------------------------------------------

    def scale_arg(self, c) -> "RationalFunction":
        """z -> f(c*z)."""
        c = qq(c)
        if c == 0:
            raise ZeroScale("argument scale must be nonzero")
        return RationalFunction.new(self.num.shift_arg(c), self.den.shift_arg(c))

    def invert_arg(self) -> "RationalFunction":
        """z -> f(1/z), powers of z cleared."""
        d = max(self.num.degree(), self.den.degree(), 0)
        return RationalFunction.new(self.num.reverse(d), self.den.reverse(d))

    # -- evaluation -------------------------------------------------------------------

    def __call__(self, z0) -> mpq:
        z0 = qq(z0)
        dv = self.den(z0)
        if dv == 0:
            raise PoleAtPoint(f"pole at z = {z0}")
        return self.num(z0) / dv

    def eval_complex(self, z, precision: int):
        """Evaluate numerically; z is a BigComplex."""
        from .scalars import BigComplex
        num = BigComplex.from_int(0, precision)
        for c in reversed(self.num.coeffs):
            num = num * z + BigComplex.from_exact(c, precision)
        den = BigComplex.from_int(0, precision)
        for c in reversed(self.den.coeffs):
            den = den * z + BigComplex.from_exact(c, precision)
        return num / den

    def residue_at_simple_root(self, z0) -> mpq:
        """Residue at a simple pole z0 of the normalized form."""
        z0 = qq(z0)
        if self.den(z0) != 0:
            raise NotAPole(f"denominator does not vanish at z = {z0}")
        dprime = self.den.derivative()(z0)
        if dprime == 0:
            raise HigherOrderPole(f"higher-order pole at z = {z0}", node=z0)
        return self.num(z0) / dprime

    def to_text(self, var: str = "z") -> str:
        if self.den.degree() == 0 and self.den.coeffs and self.den.coeffs[0] == 1:
            return f"({self.num.to_text(var)})"
        return f"({self.num.to_text(var)})/({self.den.to_text(var)})"


RF_ZERO = RationalFunction.zero()
RF_Z = RationalFunction.from_poly(X)
