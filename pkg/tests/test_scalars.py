"""Exact scalar layer and arbitrary-precision complex arithmetic."""

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from heunaw.errors import DivisionByZero, ParseError
from heunaw.scalars import (BigComplex, format_scalar, parse_scalar, pow_int,
                            qq, rational_sqrt, scalar_arith)

rationals = st.builds(mpq, st.integers(-60, 60), st.integers(1, 30))
nonzero_rationals = rationals.filter(lambda x: x != 0)


def test_parse_basic():
    assert parse_scalar("3/2") == mpq(3, 2)
    assert parse_scalar("-7") == mpq(-7)
    assert parse_scalar(" 4 / 6 ") == mpq(2, 3)


@pytest.mark.parametrize("bad", ["2//3", "", "a/b", "1.5", "3/2/5"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ParseError):
        parse_scalar(bad)


def test_parse_rejects_zero_denominator():
    with pytest.raises(DivisionByZero):
        parse_scalar("1/0")


@given(rationals)
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(rationals, rationals, rationals)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(rationals, nonzero_rationals)
def test_scalar_arith_div_mul_inverse(x, y):
    assert scalar_arith(scalar_arith(x, y, "div"), y, "mul") == x


def test_scalar_arith_div_by_zero():
    with pytest.raises(DivisionByZero):
        scalar_arith(mpq(1), mpq(0), "div")


@given(nonzero_rationals, st.integers(-12, 12))
def test_pow_int_matches_repeated_product(x, k):
    expected = mpq(1)
    for _ in range(abs(k)):
        expected *= x
    if k < 0:
        expected = 1 / expected
    assert pow_int(x, k) == expected


@given(rationals)
def test_rational_sqrt_of_square(x):
    r = rational_sqrt(x * x)
    assert r == abs(x)


def test_rational_sqrt_irrational():
    assert rational_sqrt(mpq(2)) is None
    assert rational_sqrt(mpq(-4)) is None


def test_qq_coercions():
    assert qq(3) == mpq(3)
    assert qq("5/7") == mpq(5, 7)
    assert qq(mpq(1, 2)) == mpq(1, 2)


# -- BigComplex ---------------------------------------------------------------


def test_bigcomplex_precision_floor():
    with pytest.raises(ValueError):
        BigComplex.from_int(1, 16)


def test_bigcomplex_exact_conversion_precision():
    x = BigComplex.from_exact(mpq(1, 3), 256)
    with mpmath.workprec(300):
        err = abs(x.mpc - mpmath.mpf(1) / 3)
        assert err < mpmath.mpf(2) ** -250


def test_bigcomplex_negation_keeps_precision():
    # negation must not round through the 53-bit global context
    x = BigComplex.from_exact(mpq(1, 3), 256)
    y = -x
    with mpmath.workprec(300):
        err = abs(y.mpc + mpmath.mpf(1) / 3)
        assert err < mpmath.mpf(2) ** -250


def test_bigcomplex_arithmetic_and_inverse():
    a = BigComplex.from_exact(mpq(3, 7), 192)
    b = BigComplex.from_exact(mpq(-2, 5), 192)
    c = (a + b) * a - b / a
    with mpmath.workprec(256):
        ref = (mpmath.mpf(3) / 7 - mpmath.mpf(2) / 5) * (mpmath.mpf(3) / 7) \
            + (mpmath.mpf(2) / 5) / (mpmath.mpf(3) / 7)
        assert abs(c.mpc - ref) < mpmath.mpf(2) ** -180


def test_bigcomplex_division_by_zero():
    z = BigComplex.from_int(0, 64)
    with pytest.raises(DivisionByZero):
        z.inverse()
    with pytest.raises(DivisionByZero):
        BigComplex.from_int(1, 64) / z


def test_bigcomplex_sqrt_principal():
    z = BigComplex.from_exact(mpq(9, 4), 128)
    r = z.sqrt()
    with mpmath.workprec(160):
        assert abs(r.mpc - mpmath.mpf(3) / 2) < mpmath.mpf(2) ** -120


@settings(max_examples=25)
@given(st.integers(-50, 50), st.integers(1, 50),
       st.integers(-50, 50), st.integers(1, 50))
def test_bigcomplex_matches_exact_field_ops(n1, d1, n2, d2):
    x, y = mpq(n1, d1), mpq(n2, d2)
    bx = BigComplex.from_exact(x, 128)
    by = BigComplex.from_exact(y, 128)
    ref = BigComplex.from_exact(x * y + x - y, 128)
    got = bx * by + bx - by
    with mpmath.workprec(160):
        assert abs(got.mpc - ref.mpc) < mpmath.mpf(2) ** -120
