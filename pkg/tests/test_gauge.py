"""Gauge conjugation and the two operator-identification results."""

import pytest
from gmpy2 import mpq

from heunaw.errors import (CoincidenceFailed, InvariantViolation,
                           RelationFailed, ZeroGauge)
from heunaw.gauge import (PSI_INV_W_PSI, PSI_W_PSI_INV, build_takemura_hat,
                          conjugate, gauge_ratio_takemura,
                          verify_takemura_coincidence, verify_w2_w1_relation,
                          w2w1_gauge_ratio, w2w1_partner_grid)
from heunaw.grid import elementary, partial_fractions_x
from heunaw.operators import EpsilonParams, build_W2, verify_raising
from heunaw.randparams import (random_eta_w2, random_grid,
                               random_w1_epsilon_grid)
from heunaw.ratfun import Polynomial, RationalFunction


def test_identity_gauge_is_identity(rng):
    g = random_grid(rng, range_=5)
    w = build_W2(g, random_eta_w2(rng, g))
    one = RationalFunction.const(1)
    assert conjugate(w, one, PSI_INV_W_PSI) == w
    assert conjugate(w, one, PSI_W_PSI_INV) == w


def test_conjugation_involution(rng):
    g = random_grid(rng, range_=5)
    w = build_W2(g, random_eta_w2(rng, g))
    ratio = gauge_ratio_takemura(g)
    back = conjugate(conjugate(w, ratio, PSI_INV_W_PSI), ratio, PSI_W_PSI_INV)
    assert back == w


def test_conjugation_preserves_diagonal(rng):
    g = random_grid(rng, range_=5)
    w = build_W2(g, random_eta_w2(rng, g))
    hat = conjugate(w, gauge_ratio_takemura(g), PSI_INV_W_PSI)
    assert hat.a_zero == w.a_zero


def test_zero_gauge_rejected(rng):
    g = random_grid(rng, range_=5)
    w = build_W2(g, random_eta_w2(rng, g))
    with pytest.raises(ZeroGauge):
        conjugate(w, RationalFunction.zero(), PSI_INV_W_PSI)


def test_gauged_numerator_structure(rng):
    # the clearing gauge leaves a degree-8 polynomial over
    # (1 - z^2)(1 - q z^2)
    g = random_grid(rng, range_=5)
    w = build_W2(g, random_eta_w2(rng, g))
    hat = conjugate(w, gauge_ratio_takemura(g), PSI_INV_W_PSI)
    target_den = Polynomial.new([1, 0, -1]) * Polynomial.new([1, 0, -g.q])
    prod = hat.a_plus * RationalFunction.from_poly(target_den)
    assert prod.den.degree() == 0
    assert prod.num.degree() <= 8


# -- Takemura coincidence -----------------------------------------------------


def test_takemura_coincidence_exact(rng):
    for _ in range(5):
        g = random_grid(rng, range_=5, with_e=True)
        p = EpsilonParams.new(list(g.e), c0=mpq(2, 9))
        rep = verify_takemura_coincidence(g, p)
        assert rep.passed and not rep.diffs


def test_takemura_c4_vanishes_at_unit_eps():
    from heunaw.operators import sum_prod_half
    assert sum_prod_half([mpq(1)] * 8, sign=-1) == 0


def test_takemura_coincidence_negative_control(rng, monkeypatch):
    # a mismatched constant must be isolated in the diagonal coefficient
    import heunaw.gauge as gauge_mod
    g = random_grid(rng, range_=5, with_e=True)
    p = EpsilonParams.new(list(g.e), c0=mpq(2, 9))
    hat = build_takemura_hat(g, EpsilonParams.new(list(g.e), c0=mpq(1, 9)))
    gauged = conjugate(build_W2(g, p), gauge_ratio_takemura(g),
                       PSI_INV_W_PSI)
    diffs = gauged.coefficient_diff(hat)
    assert set(diffs) == {"a_zero"}

    orig = gauge_mod.build_takemura_hat

    def crooked(gg, pp):
        return orig(gg, EpsilonParams(pp.e, pp.c0 + 1, pp.eta0))

    monkeypatch.setattr(gauge_mod, "build_takemura_hat", crooked)
    with pytest.raises(CoincidenceFailed) as excinfo:
        gauge_mod.verify_takemura_coincidence(g, p)
    assert set(excinfo.value.diffs) == {"a_zero"}


def test_ungauging_takemura_recovers_raising_pattern(rng):
    # the product-form operator itself moves images off the elementary
    # family (its images acquire polynomial parts in x), but conjugating
    # back through the clearing gauge restores the five-term pattern
    g = random_grid(rng, range_=6, with_e=True)
    p = EpsilonParams.new(list(g.e))
    hat = build_takemura_hat(g, p)
    w = conjugate(hat, gauge_ratio_takemura(g), PSI_W_PSI_INV)
    report = verify_raising(w, g, "two_series", 3, m_max=3, rng=rng)
    assert report.passed


# -- one-/two-series relation -------------------------------------------------


def test_w2w1_partner_parameters(rng):
    g, p = random_w1_epsilon_grid(rng, range_=4)
    g2, p2 = w2w1_partner_grid(g, p)
    eps8 = p.e[7] ** 2
    assert g2.a == g.a / eps8
    assert g2.b == g.b
    assert p2.e[7] == 1 / p.e[7]
    assert p2.c0 == p.c0 / eps8


def test_w2w1_unique_interpretation(rng):
    seen = set()
    for _ in range(10):
        g, p = random_w1_epsilon_grid(rng, range_=4)
        rep = verify_w2_w1_relation(g, p)
        assert rep.passed
        seen.add(rep.detail["interpretation"])
    assert seen == {"ungauged|psi_W_psi_inv"}


def test_w2w1_fixed_point_at_unit_eps8(rng):
    # eps_8 = 1 makes the substitution trivial: W2 = psi W1 psi^{-1}
    for _ in range(20):
        g, p = random_w1_epsilon_grid(rng, range_=4)
        if p.e[7] ** 2 != 1:
            continue
        rep = verify_w2_w1_relation(g, p)
        assert rep.passed
        return
    # synthesize one if the draw never hit eps_8 = 1
    from heunaw.grid import GridParams
    e = [mpq(1, 2), mpq(2, 3), mpq(3, 5), mpq(4, 7),
         mpq(5, 6), mpq(2, 5), mpq(3, 4), mpq(1)]
    prod = mpq(1)
    for ej in e:
        prod *= ej
    g = GridParams.new(mpq(1, 2), mpq(1, 2) * prod, mpq(1, 2),
                       range=4, one_series=True)
    rep = verify_w2_w1_relation(g, EpsilonParams.new(e))
    assert rep.passed


def test_w2w1_requires_one_series_parametrization(rng):
    g = random_grid(rng, range_=4, with_e=True)
    p = EpsilonParams.new(list(g.e))
    if g.a != g.s * p.prod_e() or g.b != g.s:
        with pytest.raises(InvariantViolation):
            verify_w2_w1_relation(g, p)


def test_w2w1_gauge_ratio_is_anisotropic(rng):
    # the tilde ratio is a genuine gauge: not constant, nonzero
    g, p = random_w1_epsilon_grid(rng, range_=4)
    ratio = w2w1_gauge_ratio(g, p)
    assert not ratio.is_zero()
    assert not ratio.is_constant()


def test_w2w1_strict_failure_raises(rng):
    g, p = random_w1_epsilon_grid(rng, range_=4)
    # corrupt c0 on one side only: every interpretation then differs in
    # the diagonal coefficient
    bad = EpsilonParams(p.e, p.c0 + 1, p.eta0)
    w2_side_ok = verify_w2_w1_relation(g, p).passed
    assert w2_side_ok
    # build the relation by hand with mismatched c0
    from heunaw.gauge import conjugate as conj, w2w1_gauge_ratio as ratio_of
    from heunaw.operators import build_W1, build_W2
    eps8 = p.e[7] ** 2
    rhs = conj(build_W1(g, bad), ratio_of(g, p),
               PSI_W_PSI_INV).scale(1 / eps8)
    g2, p2 = w2w1_partner_grid(g, p)
    lhs = build_W2(g2, p2)
    diffs = lhs.coefficient_diff(rhs)
    assert set(diffs) == {"a_zero"}
