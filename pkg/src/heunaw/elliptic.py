"""Truncated theta products, the elliptic difference-operator coefficients,
and the two numerical p -> 0 limit checks.

All float work runs through BigComplex / mpmath at an explicit precision.
The exact one-/two-series operators provide the reference values, so the
truncated theta side is the only approximation in the comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from gmpy2 import mpq

from .errors import (InvalidParameters, NearPole, NoConvergence, NotConstant,
                     ZeroArgument)
from .grid import GridParams
from .operators import EpsilonParams
from .scalars import DEFAULT_PRECISION, BigComplex, qq

DEFAULT_T = mpq(1, 3)


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaContext:
    """Truncation context: |p|^K must sit below the rounding noise."""

    p: BigComplex
    truncation_order: int
    precision: int

    def __post_init__(self):
        ap = self.p.abs()
        if ap >= 1:
            raise InvalidParameters("need |p| < 1")
        if ap > 0:
            bound = mpmath.mpf(2) ** (-(self.precision + 16))
            if ap ** self.truncation_order >= bound:
                raise InvalidParameters(
                    f"truncation order {self.truncation_order} too small "
                    f"for precision {self.precision}")

    @staticmethod
    def new(p: BigComplex, precision: int = DEFAULT_PRECISION) -> "ThetaContext":
        ap = p.abs()
        if ap == 0:
            return ThetaContext(p, 1, precision)
        k = int(math.ceil(-(precision + 17) * math.log(2)
                          / math.log(float(ap)))) + 1
        return ThetaContext(p, max(k, 1), precision)


def theta(z: BigComplex, ctx: ThetaContext) -> BigComplex:
    """prod_{k=0}^{K-1} (1 - p^{k+1}/z)(1 - p^k z)."""
    if z.abs() == 0:
        raise ZeroArgument("theta argument must be nonzero")
    prec = ctx.precision + 32
    with mpmath.workprec(prec):
        zv = z.mpc
        pv = ctx.p.mpc
        acc = mpmath.mpc(1)
        pk = mpmath.mpc(1)
        for _ in range(ctx.truncation_order):
            acc *= (1 - pv * pk / zv) * (1 - pk * zv)
            pk *= pv
        return BigComplex.from_mpc(acc, ctx.precision)


# ---------------------------------------------------------------------------
# elliptic operator coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EllipticParams:
    """The eight a_s together with t, q and the nome p.

    The derived constants follow the coefficient display:
    L_0 = L_1 = 1, L_2 = t q^{-2} p^{-1} prod a_s, L_3 = p^2 / L_2,
    c = (1, -1, p^{-1/2}, -p^{1/2}); p is taken real positive so the
    square root is unambiguous.
    """

    a: tuple            # 8 BigComplex
    t: BigComplex
    q: BigComplex
    p: BigComplex
    precision: int = DEFAULT_PRECISION
    sqrt_prod_a: BigComplex | None = None   # prod a_s^{1/2}; principal
                                            # branch per factor if omitted

    def __post_init__(self):
        if len(self.a) != 8:
            raise InvalidParameters("need exactly 8 shift parameters a_s")

    def theta_context(self) -> ThetaContext:
        return ThetaContext.new(self.p, self.precision)

    def derived(self):
        """(L_0..L_3, c_0..c_3) as mpmath numbers at working precision.

        L_2 = t q^{-2} p^{-1} prod a_s^{1/2} and L_3 = p^2 / L_2.  The
        evaluation point c = p^{-1/2} carries the weight L_3 and the
        point c = -p^{1/2} the weight L_2: this is the only assignment
        for which the divergence of the diagonal coefficient is the
        displayed 1/p term (the half-integer powers of p cancel between
        the two points), and it is what the limit checks validate.
        """
        with mpmath.workprec(self.precision + 32):
            pv, tv, qv = self.p.mpc, self.t.mpc, self.q.mpc
            if self.sqrt_prod_a is not None:
                spa = self.sqrt_prod_a.mpc
            else:
                spa = mpmath.mpc(1)
                for av in self.a:
                    spa *= mpmath.sqrt(av.mpc)
            l2 = tv * spa / (qv * qv * pv)
            ls = (mpmath.mpc(1), mpmath.mpc(1), pv * pv / l2, l2)
            rp = mpmath.sqrt(pv)
            cs = (mpmath.mpc(1), mpmath.mpc(-1), 1 / rp, -rp)
            return ls, cs


def _theta_raw(zv, pv, order):
    acc = mpmath.mpc(1)
    pk = mpmath.mpc(1)
    for _ in range(order):
        acc *= (1 - pv * pk / zv) * (1 - pk * zv)
        pk *= pv
    return acc


def rvd_coefficients(z: BigComplex, ep: EllipticParams):
    """(A^+, A^-, A^0) of the elliptic operator at the point z."""
    ctx = ep.theta_context()
    prec = ep.precision
    floor = mpmath.mpf(2) ** (-prec // 2)
    with mpmath.workprec(prec + 32):
        zv, pv, qv, tv = z.mpc, ep.p.mpc, ep.q.mpc, ep.t.mpc
        order = ctx.truncation_order
        th = lambda w: _theta_raw(w, pv, order)

        def a_plus_at(zz):
            den = th(zz * zz) * th(qv * zz * zz)
            if mpmath.fabs(den) < floor:
                raise NearPole(f"theta denominator ~ 0 at z = {zz}")
            num = mpmath.mpc(1)
            for av in ep.a:
                num *= th(av.mpc * zz)
            return num / den

        ap = a_plus_at(zv)
        am = a_plus_at(1 / zv)

        ls, cs = ep.derived()
        rq = mpmath.sqrt(qv)
        pref = th(tv) * th(tv / qv)
        if mpmath.fabs(pref) < floor:
            raise NearPole("theta(t) theta(t/q) ~ 0")
        a0 = mpmath.mpc(0)
        for lj, cj in zip(ls, cs):
            w = cj / rq
            den = th(w * zv) * th(w / zv)
            if mpmath.fabs(den) < floor:
                raise NearPole(f"theta pole in the diagonal term at z = {zv}")
            term = lj / pref * th(w * tv * zv) * th(w * tv / zv) / den
            for av in ep.a:
                term *= th(w * av.mpc)
            a0 += term
        a0 /= 2
        return (BigComplex.from_mpc(ap, prec), BigComplex.from_mpc(am, prec),
                BigComplex.from_mpc(a0, prec))


# ---------------------------------------------------------------------------
# limit checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    label: str
    passed: bool
    order: float | None
    per_p: tuple            # ((p_text, value_text), ...) max error / spread
    constants: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"label": self.label, "passed": self.passed,
                "order": None if self.order is None else f"{self.order:.4f}",
                "per_p": [list(row) for row in self.per_p],
                "constants": dict(self.constants),
                "detail": dict(self.detail)}


def _nstr(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 10)


def _fit_order(p_values, errors) -> float:
    """Least-squares slope of log(error) against log(p)."""
    xs = [math.log(float(p)) for p in p_values]
    ys = [math.log(max(float(e), 1e-300)) for e in errors]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


DEFAULT_SAMPLE_Z = (mpq(7, 5), mpq(9, 7), mpq(13, 8), mpq(11, 6), mpq(17, 9))


def _check_p_list(p_list):
    ps = [qq(p) for p in p_list]
    if len(ps) < 2 or any(p <= 0 for p in ps):
        raise InvalidParameters("need at least two positive p values")
    if any(ps[i + 1] >= ps[i] for i in range(len(ps) - 1)):
        raise InvalidParameters("p values must decrease strictly")
    return ps


def limit_check_takemura(g: GridParams, eps: EpsilonParams, p_list,
                         sample_z=DEFAULT_SAMPLE_Z, t=DEFAULT_T,
                         precision: int = DEFAULT_PRECISION,
                         strict: bool = True) -> ConvergenceReport:
    """Check that the elliptic coefficients with a_s = q^{1/2} eps_{s+1}
    converge, as p -> 0, to the gauged two-series operator.

    The divergent part of the diagonal coefficient is
    D/p with D = t prod(a_s^{1/2}) / ((1-t)(1-t/q) q^2); here
    prod(a_s^{1/2}) = q^2 prod(e_j) exactly.  The additive constant the
    limit leaves free is the intercept of a linear fit in p to the mean
    discrepancy over sample_z (fitting at a single p would absorb the
    first-order error term there and bias the measured order).
    """
    from .gauge import build_takemura_hat

    ps = _check_p_list(p_list)
    t = qq(t)
    s, q = g.s, g.q
    if t == 0 or t == 1 or t == q:
        raise InvalidParameters("t must avoid {0, 1, q}")
    a_exact = [s * ej * ej for ej in eps.e]       # q^{1/2} eps_{j+1}
    prod_sqrt = q * q * eps.prod_e()              # prod a_s^{1/2}, exact
    d_coeff = t * prod_sqrt / ((1 - t) * (1 - t / q) * q * q)

    hat = build_takemura_hat(g, eps)
    zs = [qq(z) for z in sample_z]
    exact_a1 = [hat.a_plus.eval_complex(BigComplex.from_exact(z, precision),
                                        precision) for z in zs]
    exact_a1_inv = [hat.a_minus.eval_complex(
        BigComplex.from_exact(z, precision), precision) for z in zs]
    exact_a0 = [hat.a_zero.eval_complex(BigComplex.from_exact(z, precision),
                                        precision) for z in zs]

    tb = BigComplex.from_exact(t, precision)
    qb = BigComplex.from_exact(q, precision)
    db = BigComplex.from_exact(d_coeff, precision)

    table = {}
    for p in ps:
        pb = BigComplex.from_exact(p, precision)
        ep = EllipticParams(tuple(BigComplex.from_exact(av, precision)
                                  for av in a_exact), tb, qb, pb, precision,
                            BigComplex.from_exact(prod_sqrt, precision))
        row = []
        for z in zs:
            zb = BigComplex.from_exact(z, precision)
            aplus, aminus, azero = rvd_coefficients(zb, ep)
            row.append((aplus, aminus, azero - db / pb))
        table[p] = row

    with mpmath.workprec(precision + 32):
        # mean diagonal discrepancy at each p, then intercept of its
        # least-squares linear model in p
        means = []
        for p in ps:
            resid = [row[2].mpc - ea.mpc
                     for row, ea in zip(table[p], exact_a0)]
            means.append(sum(resid) / len(resid))
        pvs = [mpmath.mpf(int(p.numerator)) / mpmath.mpf(int(p.denominator))
               for p in ps]
        n = len(pvs)
        mp_ = sum(pvs) / n
        mr = sum(means) / n
        sxx = sum((pv - mp_) ** 2 for pv in pvs)
        slope = sum((pv - mp_) * (r - mr)
                    for pv, r in zip(pvs, means)) / sxx
        c0_hat = mr - slope * mp_

    errors = []
    for p in ps:
        worst = mpmath.mpf(0)
        for j, z in enumerate(zs):
            aplus, aminus, a0sub = table[p][j]
            worst = max(worst, (aplus - exact_a1[j]).abs())
            worst = max(worst, (aminus - exact_a1_inv[j]).abs())
            with mpmath.workprec(precision + 32):
                worst = max(worst, mpmath.fabs(
                    a0sub.mpc - exact_a0[j].mpc - c0_hat))
        errors.append(worst)

    decreasing = all(errors[i + 1] < errors[i] for i in range(len(errors) - 1))
    order = _fit_order([float(p) for p in ps], errors)
    passed = decreasing and 0.8 <= order <= 1.2
    report = ConvergenceReport(
        "takemura_limit", passed, order,
        tuple((str(p), _nstr(e)) for p, e in zip(ps, errors)),
        constants={"c0_hat": mpmath.nstr(c0_hat, 10),
                   "divergent_coefficient": str(d_coeff)},
        detail={"decreasing": decreasing})
    if strict and not passed:
        raise NoConvergence(f"elliptic limit errors do not shrink at first "
                            f"order (order = {order:.3f})")
    return report


def classical_parameters(a_free, s, p, precision: int = DEFAULT_PRECISION):
    """Fill in a_6, a_7 from the constraint family
    a_0..a_5 a_6^2 = q^{3/2} and a_0..a_7 = q p."""
    if len(a_free) != 6:
        raise InvalidParameters("need the six free parameters a_0..a_5")
    with mpmath.workprec(precision + 32):
        sv = BigComplex.from_exact(qq(s), precision).mpc
        qv = sv * sv
        prod6 = mpmath.mpc(1)
        for av in a_free:
            prod6 *= BigComplex.from_exact(qq(av), precision).mpc
        a6 = mpmath.sqrt(sv ** 3 / prod6)
        pv = BigComplex.from_exact(qq(p), precision).mpc
        a7 = qv * pv / (prod6 * a6)
        out = [BigComplex.from_exact(qq(av), precision) for av in a_free]
        out.append(BigComplex.from_mpc(a6, precision))
        out.append(BigComplex.from_mpc(a7, precision))
        return tuple(out)


def limit_check_classical(a_free, s, p_list, sample_z=DEFAULT_SAMPLE_Z,
                          t=DEFAULT_T, precision: int = DEFAULT_PRECISION,
                          strict: bool = True) -> ConvergenceReport:
    """Structural p -> 0 check of the second constrained limit.

    (i) q^{-1} p A^+(z;p) is Cauchy in p at each sample z;
    (ii) q^{-1} p (A^+ + A^- + A^0)(z;p) minus the displayed divergent
         term t (a_0 a_1 a_2 a_3 a_4)^2 / (q^4 (q - t)(1 - t) p) tends to
         a z-independent constant, with cross-z spread shrinking like p.
    """
    ps = _check_p_list(p_list)
    t, s = qq(t), qq(s)
    q = s * s
    zs = [qq(z) for z in sample_z]
    tb = BigComplex.from_exact(t, precision)
    qb = BigComplex.from_exact(q, precision)

    fplus = {}     # p -> list over z of q^{-1} p A^+
    combo = {}     # p -> list over z of the subtracted combination
    for p in ps:
        a = classical_parameters(a_free, s, p, precision)
        pb = BigComplex.from_exact(p, precision)
        ep = EllipticParams(a, tb, qb, pb, precision)
        with mpmath.workprec(precision + 32):
            prod5 = mpmath.mpc(1)
            for av in a[:5]:
                prod5 *= av.mpc
            qv, tv, pv = qb.mpc, tb.mpc, pb.mpc
            divergent = tv * prod5 * prod5 / (qv ** 4 * (qv - tv)
                                              * (1 - tv) * pv)
            frow, crow = [], []
            for z in zs:
                zb = BigComplex.from_exact(z, precision)
                aplus, aminus, azero = rvd_coefficients(zb, ep)
                scale = pv / qv
                frow.append(scale * aplus.mpc)
                crow.append(scale * (aplus.mpc + aminus.mpc + azero.mpc)
                            - divergent)
            fplus[p] = frow
            combo[p] = crow

    with mpmath.workprec(precision + 32):
        cauchy = []
        for i in range(len(ps) - 1):
            d = max(mpmath.fabs(x - y)
                    for x, y in zip(fplus[ps[i]], fplus[ps[i + 1]]))
            cauchy.append(d)
        spreads = []
        for p in ps:
            mean = sum(combo[p]) / len(combo[p])
            spreads.append(max(mpmath.fabs(x - mean) for x in combo[p]))
        gamma = sum(combo[ps[-1]]) / len(combo[ps[-1]])

    cauchy_ok = all(cauchy[i + 1] < cauchy[i] for i in range(len(cauchy) - 1))
    spread_ok = all(spreads[i + 1] < spreads[i]
                    for i in range(len(spreads) - 1))
    spread_order = _fit_order([float(p) for p in ps], spreads)
    passed = cauchy_ok and spread_ok and 0.8 <= spread_order <= 1.2
    report = ConvergenceReport(
        "classical_limit", passed, spread_order,
        tuple((str(p), _nstr(sp)) for p, sp in zip(ps, spreads)),
        constants={"gamma_hat": mpmath.nstr(gamma, 10)},
        detail={"cauchy": [_nstr(d) for d in cauchy],
                "cauchy_decreasing": cauchy_ok})
    if strict and not passed:
        if not cauchy_ok:
            raise NoConvergence("shift coefficient is not Cauchy in p")
        raise NotConstant(f"cross-z spread does not shrink like p "
                          f"(order = {spread_order:.3f})")
    return report
