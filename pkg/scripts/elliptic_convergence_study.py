#!/usr/bin/env python3
"""Convergence study for the two p -> 0 limits of the elliptic coefficients.

Prints a table of the per-p errors for the product-form limit (expected
empirical order ~ 1) and the cross-z spread for the constrained
classical limit (measured order ~ 1/2, a recorded discrepancy), over a
configurable nome ladder.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent
                       / "src"))

from gmpy2 import mpq  # noqa: E402

from heunaw.elliptic import (limit_check_classical,  # noqa: E402
                             limit_check_takemura)
from heunaw.grid import GridParams  # noqa: E402
from heunaw.operators import EpsilonParams  # noqa: E402
from heunaw.scalars import parse_scalar  # noqa: E402

DEFAULT_E = ["1/2", "2/3", "3/5", "4/7", "5/6", "2/5", "3/4", "5/7"]


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--s", default="1/2", help="q^{1/2}")
    parser.add_argument("--e", nargs=8, default=DEFAULT_E,
                        help="the eight eps^{1/2} values")
    parser.add_argument("--p", nargs="+",
                        default=["1/1000", "1/10000", "1/100000"],
                        help="strictly decreasing nome ladder")
    parser.add_argument("--precision", type=int, default=256)
    parser.add_argument("--t", default="1/3")
    return parser.parse_args(argv)


def show(report):
    print(f"  order = {report.order:.4f}   "
          f"passed = {report.passed}")
    for p, err in report.per_p:
        print(f"    p = {p:>12s}   {err}")
    for key, val in report.constants.items():
        print(f"    {key} = {val}")


def main(argv=None) -> int:
    args = parse_args(argv)
    s = parse_scalar(args.s)
    e = [parse_scalar(x) for x in args.e]
    ps = [parse_scalar(x) for x in args.p]
    t = parse_scalar(args.t)

    prod = mpq(1)
    for ej in e:
        prod *= ej
    g = GridParams.new(s, s * prod, s, range=4, one_series=True)
    eps = EpsilonParams.new(e, c0=mpq(2, 7))

    print("product-form limit (max coefficient error per p):")
    rep1 = limit_check_takemura(g, eps, ps, t=t,
                                precision=args.precision, strict=False)
    show(rep1)

    print("\nconstrained classical limit (cross-z spread per p):")
    rep2 = limit_check_classical([ej for ej in e[:6]], s, ps, t=t,
                                 precision=args.precision, strict=False)
    show(rep2)
    print("    cauchy steps =", ", ".join(rep2.detail["cauchy"]))

    return 0 if rep1.passed else 1


if __name__ == "__main__":
    sys.exit(main())
