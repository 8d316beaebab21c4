"""Exact polynomial and rational-function arithmetic."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from heunaw.errors import PoleAtPoint, ZeroDenominator
from heunaw.ratfun import Polynomial, RationalFunction, poly_gcd

coeff = st.builds(mpq, st.integers(-9, 9), st.integers(1, 6))
polys = st.lists(coeff, min_size=0, max_size=5).map(Polynomial.new)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def ratfuns():
    return st.tuples(polys, nonzero_polys).map(
        lambda t: RationalFunction.new(t[0], t[1]))


points = st.builds(mpq, st.integers(-12, 12), st.integers(1, 7))


# -- polynomials --------------------------------------------------------------


def test_polynomial_trims_leading_zeros():
    p = Polynomial.new([1, 2, 0, 0])
    assert p.degree() == 1
    assert Polynomial.new([0, 0]).is_zero()


@given(polys, polys, points)
def test_poly_ring_ops_commute_with_evaluation(p, q, z):
    assert (p + q)(z) == p(z) + q(z)
    assert (p * q)(z) == p(z) * q(z)
    assert (p - q)(z) == p(z) - q(z)


@given(polys, nonzero_polys)
def test_poly_divmod_identity(p, q):
    quot, rem = p.divmod(q)
    assert quot * q + rem == p
    assert rem.is_zero() or rem.degree() < q.degree()


@given(nonzero_polys, nonzero_polys, nonzero_polys)
@settings(max_examples=50)
def test_poly_gcd_divides_both(p, q, r):
    g = poly_gcd(p * r, q * r)
    _, rem1 = (p * r).divmod(g)
    _, rem2 = (q * r).divmod(g)
    assert rem1.is_zero() and rem2.is_zero()
    # the common factor r must divide the gcd
    _, rem3 = g.divmod(poly_gcd(g, r))
    assert rem3.is_zero()


def test_poly_deflate():
    p = Polynomial.new([-6, 5, -1])       # -(z-2)(z-3)
    assert p.deflate(mpq(2))(mpq(3)) == 0 or p.deflate(mpq(3))(mpq(2)) == 0
    assert p.deflate(mpq(2)).degree() == 1


def test_poly_shift_and_reverse():
    p = Polynomial.new([1, 2, 3])
    # shift_arg is the dilation z -> p(c z)
    assert p.shift_arg(mpq(2))(mpq(3)) == p(mpq(6))
    assert p.reverse()(mpq(2)) == p(mpq(1, 2)) * 4


# -- rational functions -------------------------------------------------------


def test_rf_rejects_zero_denominator():
    with pytest.raises(ZeroDenominator):
        RationalFunction.new(Polynomial.const(1), Polynomial.zero())


def test_rf_normalized_equality():
    a = RationalFunction.new(Polynomial.new([0, 2]), Polynomial.new([2, 0, 2]))
    b = RationalFunction.new(Polynomial.new([0, 3]), Polynomial.new([3, 0, 3]))
    assert a == b
    c = RationalFunction.new(Polynomial.new([-1, 0, 1]),   # (z-1)(z+1)
                             Polynomial.new([-1, 1]))      # (z-1)
    assert c == RationalFunction.from_poly(Polynomial.new([1, 1]))


@given(ratfuns(), ratfuns(), points)
@settings(max_examples=60)
def test_rf_field_ops_commute_with_evaluation(f, g, z):
    try:
        fz, gz = f(z), g(z)
    except PoleAtPoint:
        return
    assert (f + g)(z) == fz + gz
    assert (f * g)(z) == fz * gz
    assert (f - g)(z) == fz - gz


@given(ratfuns())
def test_rf_invert_arg_involution(f):
    assert f.invert_arg().invert_arg() == f


@given(ratfuns(), points.filter(lambda c: c != 0))
def test_rf_scale_arg_composition(f, c):
    assert f.scale_arg(c).scale_arg(1 / c) == f


@given(ratfuns())
def test_rf_additive_inverse(f):
    assert (f - f).is_zero()
    assert f + RationalFunction.zero() == f


def test_rf_division():
    f = RationalFunction.new(Polynomial.new([1, 1]), Polynomial.new([2]))
    assert f / f == RationalFunction.const(1)
    with pytest.raises(ZeroDenominator):
        f / RationalFunction.zero()


# -- residues -----------------------------------------------------------------


def test_residue_simple_pole_exact():
    # f = 5/(z-2) + 1/(z+1): residue at 2 is 5
    f = (RationalFunction.new(Polynomial.const(5), Polynomial.new([-2, 1]))
         + RationalFunction.new(Polynomial.const(1), Polynomial.new([1, 1])))
    assert f.residue_at_simple_root(mpq(2)) == 5
    assert f.residue_at_simple_root(mpq(-1)) == 1


@given(points, points, points.filter(lambda z: z != 0))
@settings(max_examples=40)
def test_residue_matches_shrinking_h_oracle(r1, z0, dz):
    # brute-force oracle: (z - z0) f(z) evaluated ever closer to the pole
    if r1 == 0:
        return
    other = z0 + dz
    f = (RationalFunction.new(Polynomial.const(r1), Polynomial.new([-z0, 1]))
         + RationalFunction.new(Polynomial.const(3), Polynomial.new([-other, 1])))
    got = f.residue_at_simple_root(z0)
    h = mpq(1, 10**8)
    probe = f(z0 + h) * h
    assert abs(probe - got) < mpq(1, 10**5)
    assert got == r1


def test_eval_complex_matches_exact():
    import mpmath
    from heunaw.scalars import BigComplex
    f = RationalFunction.new(Polynomial.new([1, 0, 1]), Polynomial.new([0, 1]))
    z = BigComplex.from_exact(mpq(3, 2), 256)
    v = f.eval_complex(z, 256)
    with mpmath.workprec(280):
        ref = mpmath.mpf(3) / 2 + mpmath.mpf(2) / 3
        assert abs(v.mpc - ref) < mpmath.mpf(2) ** -240
