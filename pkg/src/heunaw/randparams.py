"""Seeded random exact parameters for verification campaigns.

Small-height rationals are drawn and rejected against the grid
non-degeneracy predicate; recording the seed makes every run
reproducible.
"""

from __future__ import annotations

import random

from gmpy2 import mpq

from .errors import DegenerateGrid
from .grid import GridParams
from .operators import EpsilonParams, EtaParams, eta_from_epsilon
from .scalars import pow_int


def _small_rational(rng: random.Random, allow_negative: bool = True) -> mpq:
    num = rng.randint(1, 9)
    den = rng.randint(1, 9)
    sign = rng.choice([-1, 1]) if allow_negative else 1
    return mpq(sign * num, den)


def random_grid(rng: random.Random, range_: int = 8,
                with_e: bool = False, max_tries: int = 2000) -> GridParams:
    """Draw a non-degenerate grid; with_e adds 8 square-root parameters
    with e_8 chosen so that alpha*beta = q * prod(e_j)."""
    for _ in range(max_tries):
        s = _small_rational(rng)
        a = _small_rational(rng)
        b = _small_rational(rng)
        if abs(s) == 1 or s == 0 or a == 0 or b == 0:
            continue
        e = None
        if with_e:
            e = [_small_rational(rng) for _ in range(7)]
            q = s * s
            prod7 = mpq(1)
            for ej in e:
                prod7 *= ej
            e.append(a * b / (q * prod7))
            if e[-1] == 0:
                continue
        try:
            return GridParams.new(s, a, b, e=e, range=range_)
        except DegenerateGrid:
            continue
    raise DegenerateGrid("could not draw a non-degenerate grid")


def random_w1_grid(rng: random.Random, range_: int = 8) -> GridParams:
    """Grid with beta = q^{1/2}, the one-series specialization."""
    for _ in range(2000):
        s = _small_rational(rng)
        a = _small_rational(rng)
        if abs(s) == 1 or s == 0 or a == 0:
            continue
        try:
            return GridParams.new(s, a, s, range=range_, one_series=True)
        except DegenerateGrid:
            continue
    raise DegenerateGrid("could not draw a one-series grid")


def random_w1_epsilon_grid(rng: random.Random, range_: int = 8):
    """(grid, EpsilonParams) with alpha = q^{1/2} prod(e_j), beta = q^{1/2}."""
    for _ in range(2000):
        s = _small_rational(rng)
        if abs(s) == 1 or s == 0:
            continue
        e = [_small_rational(rng) for _ in range(8)]
        prod = mpq(1)
        for ej in e:
            prod *= ej
        a = s * prod
        if a == 0:
            continue
        try:
            g = GridParams.new(s, a, s, range=range_, one_series=True)
        except DegenerateGrid:
            continue
        return g, EpsilonParams.new(e)
    raise DegenerateGrid("could not draw a one-series eps grid")


def random_eta_w1(rng: random.Random, g: GridParams) -> EtaParams:
    eta = [_small_rational(rng) for _ in range(8)]
    while eta[0] == 0:
        eta[0] = _small_rational(rng)
    eta.append(g.a * g.a * pow_int(g.q, 3) * eta[0])
    return EtaParams.new(eta, which="W1")


def random_eta_w2(rng: random.Random, g: GridParams) -> EtaParams:
    eta = [_small_rational(rng) for _ in range(8)]
    while eta[0] == 0:
        eta[0] = _small_rational(rng)
    eta.append(g.q * g.q * g.a * g.a * g.b * g.b * eta[0])
    return EtaParams.new(eta, which="W2")


def random_epsilon_for_grid(rng: random.Random, g: GridParams) -> EpsilonParams:
    """Eps parameters consistent with the grid's alpha*beta constraint."""
    if g.e is None:
        raise DegenerateGrid("grid carries no e parameters")
    return EpsilonParams.new(g.e)


def random_residue(rng: random.Random) -> mpq:
    return mpq(rng.randint(-9, 9), rng.randint(1, 9))
