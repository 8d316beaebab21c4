"""Askey-Wilson pole grids and partial-fraction extraction in x = z + 1/z.

Two geometric pole series live on the grid: X nodes x_n = a q^n + 1/(a q^n)
and Y nodes y_n = b q^n + 1/(b q^n), with q = s^2.  Negative indices are
legitimate nodes (y_{-1} shows up in operator images) so candidate scans
run over |n| <= range on both series.

Pole identification is by trial evaluation at candidate z values; there is
no root finding.  Anything off the candidate set is a verification failure
to report, not to solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from gmpy2 import mpq

from .errors import (BoundaryPole, DegenerateGrid, HigherOrderPole,
                     NotSymmetric, UnexpectedPole)
from .ratfun import P_ONE, Polynomial, RationalFunction, X
from .scalars import format_scalar, pow_int, qq, rational_sqrt

SERIES = ("X", "Y")


@dataclass(frozen=True)
class GridParams:
    """Base parameters; all half-integer powers enter through s and e_j."""

    s: mpq                     # q^{1/2}
    a: mpq                     # alpha
    b: mpq                     # beta
    e: tuple | None = None     # eps_j^{1/2}, 8 values, optional
    range: int = 8             # largest index |n| the run will touch
    one_series: bool = False   # beta = q^{1/2} specialization: the Y series
                               # is self-reciprocal, so its pair-collision
                               # check is waived

    @staticmethod
    def new(s, a, b, e=None, range: int = 8,
            one_series: bool = False) -> "GridParams":
        g = GridParams(qq(s), qq(a), qq(b),
                       None if e is None else tuple(qq(x) for x in e),
                       int(range), one_series)
        g.validate()
        return g

    @property
    def q(self) -> mpq:
        return self.s * self.s

    def validate(self) -> None:
        s, a, b = self.s, self.a, self.b
        q = s * s
        if q == 0 or q == 1 or q == -1:
            raise DegenerateGrid("q = s^2 must avoid {0, 1, -1}")
        if a == 0 or b == 0:
            raise DegenerateGrid("alpha and beta must be nonzero")
        if a == b:
            raise DegenerateGrid("alpha != beta is required")
        if self.e is not None and len(self.e) != 8:
            raise DegenerateGrid("e must hold exactly 8 square roots")
        span = 2 * self.range + 2
        qk = pow_int(q, -span)
        for k in range(-span, span + 1):
            for v in (a * qk, b * qk):
                if v == 1 or v == -1:
                    raise DegenerateGrid(
                        f"grid node at z = +/-1 (k = {k}); parameters degenerate")
            collision = [a * a * qk, (a / b) * qk, a * b * qk]
            if not self.one_series:
                collision.append(b * b * qk)
            for v in collision:
                if v == 1:
                    raise DegenerateGrid(
                        f"node collision within range (k = {k})")
            qk *= q
        if self.e is not None:
            prod = mpq(1)
            for ej in self.e:
                if ej == 0:
                    raise DegenerateGrid("e_j must be nonzero")
                prod *= ej
            if a * b != q * prod:
                raise DegenerateGrid(
                    "alpha*beta = q * prod(e_j) must hold when e is given")

    # -- nodes ----------------------------------------------------------------

    def z_node(self, series: str, n: int) -> mpq:
        base = self.a if series == "X" else self.b
        return base * pow_int(self.q, n)

    def x_node(self, series: str, n: int) -> mpq:
        z = self.z_node(series, n)
        return z + 1 / z

    def swapped(self) -> "GridParams":
        """Grid with alpha and beta exchanged (X and Y series swapped)."""
        return GridParams(self.s, self.b, self.a, self.e, self.range,
                          self.one_series)


def x_node(g: GridParams, series: str, n: int) -> mpq:
    return g.x_node(series, n)


def elementary_at(x0) -> RationalFunction:
    """1/(x - x0) composed with x(z) = z + 1/z, i.e. z/(z^2 - x0 z + 1)."""
    x0 = qq(x0)
    return RationalFunction(X, Polynomial.new([1, -x0, 1]))


def double_at(x0) -> RationalFunction:
    """1/(x - x0)^2 as a function of z."""
    x0 = qq(x0)
    d = Polynomial.new([1, -x0, 1])
    return RationalFunction.new(X * X, d * d)


def elementary(g: GridParams, series: str, n: int) -> RationalFunction:
    return elementary_at(g.x_node(series, n))


def x_of_z() -> RationalFunction:
    return RationalFunction(Polynomial.new([1, 0, 1]), X)


def is_x_symmetric(f: RationalFunction) -> bool:
    return f.invert_arg() == f


# ---------------------------------------------------------------------------
# Partial fractions in x
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialFractionForm:
    """constant + sum residue/(x - node) (+ optional double-pole terms).

    ``terms`` maps (series, index) to the x-residue; indices may be
    negative (off the raising window but still on the geometric series).
    ``extra_terms`` holds poles at explicitly allowed off-grid x values.
    """

    terms: Mapping[tuple, mpq]
    constant: mpq
    double_terms: Mapping[tuple, mpq] = field(default_factory=dict)
    extra_terms: tuple = ()   # ((x_value, residue), ...)

    def pole_keys(self):
        return set(self.terms) | set(self.double_terms) | {
            ("extra", x0) for x0, _ in self.extra_terms}

    def to_ratfun(self, g: GridParams) -> RationalFunction:
        out = RationalFunction.const(self.constant)
        for (series, n), xi in sorted(self.terms.items()):
            out = out + elementary(g, series, n).scale(xi)
        for (series, n), c in sorted(self.double_terms.items()):
            out = out + double_at(g.x_node(series, n)).scale(c)
        for x0, xi in self.extra_terms:
            out = out + elementary_at(x0).scale(xi)
        return out

    def to_record(self) -> dict:
        return {
            "terms": [[series, n, format_scalar(xi)]
                      for (series, n), xi in sorted(self.terms.items())],
            "double_terms": [[series, n, format_scalar(c)]
                             for (series, n), c in sorted(self.double_terms.items())],
            "extra_terms": [[format_scalar(x0), format_scalar(xi)]
                            for x0, xi in self.extra_terms],
            "constant": format_scalar(self.constant),
        }


def pf_from_residues(residues: Mapping[tuple, mpq], constant=0) -> PartialFractionForm:
    return PartialFractionForm(
        {k: qq(v) for k, v in residues.items() if qq(v) != 0}, qq(constant))


def _z_preimage(x0: mpq):
    """Rational z with z + 1/z = x0, if one exists."""
    x0 = qq(x0)
    disc = x0 * x0 - 4
    r = rational_sqrt(disc) if disc >= 0 else None
    if r is None:
        return None
    return (x0 + r) / 2


def _double_pole_coefficient(f: RationalFunction, z0: mpq) -> mpq:
    """x-coefficient c of c/(x-x0)^2 at a double z-pole z0 (and 1/z0)."""
    k = f.den.deflate(z0).deflate(z0)
    kz = k(z0)
    if kz == 0:
        raise HigherOrderPole(f"pole of order > 2 at z = {z0}", node=z0)
    lead = f.num(z0) / kz                    # coeff of (z - z0)^{-2}
    h0 = (z0 * z0 - 1) / (z0 * z0)           # d(x)/du leading factor
    return lead * h0 * h0


def partial_fractions_x(f: RationalFunction, g: GridParams,
                        allow_extra: Sequence = (),
                        allow_double_at: Sequence = ()) -> PartialFractionForm:
    """Decompose an x-symmetric f into constant + sum xi/(x - node).

    Every pole must sit on a grid candidate (|n| <= g.range, either series)
    or on an x value listed in ``allow_extra``.  Double poles are accepted
    only at nodes listed in ``allow_double_at`` (keys (series, n)).
    """
    if f.is_zero():
        return PartialFractionForm({}, mpq(0))
    if not is_x_symmetric(f):
        raise NotSymmetric("input is not symmetric under z -> 1/z")
    if f.den(qq(1)) == 0 or f.den(qq(-1)) == 0:
        raise BoundaryPole("pole at z = +/-1 (x = +/-2); x is not locally "
                           "invertible there")

    candidates = []
    for series in SERIES:
        for n in range(-g.range, g.range + 1):
            candidates.append(((series, n), g.z_node(series, n),
                               g.x_node(series, n)))
    for x0 in allow_extra:
        x0 = qq(x0)
        z0 = _z_preimage(x0)
        if z0 is None:
            raise UnexpectedPole(
                f"extra node x = {x0} has no rational z preimage")
        candidates.append((("extra", x0), z0, x0))

    allow_double = set(allow_double_at)
    rem = f
    terms, doubles, extras = {}, {}, []
    claimed = set()
    for key, z0, x0 in candidates:
        if z0 in claimed or 1 / z0 in claimed:
            continue   # reciprocal partner of an already-handled pole pair
        claimed.add(z0)
        if rem.den(z0) != 0:
            continue
        if rem.den.derivative()(z0) == 0:
            if key not in allow_double:
                raise HigherOrderPole(
                    f"second-order pole at node {key} (z = {z0})", node=key)
            c = _double_pole_coefficient(rem, z0)
            doubles[key] = c
            rem = rem - double_at(x0).scale(c)
        if rem.den(z0) == 0:
            if rem.den.derivative()(z0) == 0:
                raise HigherOrderPole(
                    f"pole of order > 2 at node {key} (z = {z0})", node=key)
            r = rem.residue_at_simple_root(z0)
            xi = r * (z0 * z0 - 1) / (z0 * z0)
            if key[0] == "extra":
                extras.append((x0, xi))
            else:
                terms[key] = xi
            rem = rem - elementary_at(x0).scale(xi)

    if rem.den.degree() > 0:
        scan = [(str(key), format_scalar(z0), rem.den(z0) == 0)
                for key, z0, _ in candidates]
        raise UnexpectedPole(
            f"poles remain off the candidate set: denominator {rem.den.to_text()}",
            scan=scan)

    form = PartialFractionForm(
        {k: v for k, v in terms.items() if v != 0},
        rem.constant_value(),
        {k: v for k, v in doubles.items() if v != 0},
        tuple((x0, xi) for x0, xi in extras if xi != 0))
    if form.to_ratfun(g) != f:
        raise UnexpectedPole("reconstruction check failed after extraction")
    return form
