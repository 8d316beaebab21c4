"""Exact construction and verification of rational q-Heun operators on
Askey-Wilson grids, with numerical theta-product limit checks."""

from .errors import HeunError
from .grid import (GridParams, PartialFractionForm, elementary,
                   partial_fractions_x, x_node)
from .operators import (EpsilonParams, EtaParams, QDifferenceOperator,
                        WAWCoefficients, build_generic_W, build_W1, build_W2,
                        build_W_AW, eta_from_epsilon,
                        extract_waw_coefficients, verify_raising,
                        waw_dependent_coefficients, xi_hat_closed_form)
from .gauge import (conjugate, gauge_ratio_takemura, build_takemura_hat,
                    verify_takemura_coincidence, verify_w2_w1_relation)
from .elliptic import (EllipticParams, ThetaContext, limit_check_classical,
                       limit_check_takemura, rvd_coefficients, theta)
from .ratfun import Polynomial, RationalFunction
from .scalars import QQ, BigComplex, parse_scalar, qq

__version__ = "0.1.0"

__all__ = [
    "HeunError", "GridParams", "PartialFractionForm", "elementary",
    "partial_fractions_x", "x_node", "EpsilonParams", "EtaParams",
    "QDifferenceOperator", "WAWCoefficients", "build_generic_W", "build_W1",
    "build_W2", "build_W_AW", "eta_from_epsilon", "extract_waw_coefficients",
    "verify_raising", "waw_dependent_coefficients", "xi_hat_closed_form",
    "conjugate", "gauge_ratio_takemura", "build_takemura_hat",
    "verify_takemura_coincidence", "verify_w2_w1_relation", "EllipticParams",
    "ThetaContext", "limit_check_classical", "limit_check_takemura",
    "rvd_coefficients", "theta", "Polynomial", "RationalFunction", "QQ",
    "BigComplex", "parse_scalar", "qq", "__version__",
]
