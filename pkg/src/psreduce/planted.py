"""Random second-order equations with a known rational first integral.

Given I(x, y, y'), the equation y'' = -(I_x + y' I_y)/I_{y'} has I as a first
integral, and S = I_y/I_{y'}, R = -I_{y'} is a pair satisfying the three
compatibility equations.  Used for synthetic benchmarks and residual tests.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .frontend import SOODE, render, render_ode
from .poly import XYZ, X, Y, YP, Poly
from .ratfun import RatFun
from .soode import SRPair


@dataclass(frozen=True)
class Planted:
    ode: SOODE
    invariant: RatFun
    pair: SRPair

    @property
    def text(self) -> str:
        return render_ode(self.ode)


def _random_poly(rng: random.Random, deg: int, nonzero: bool = False, nvars: int = 2) -> Poly:
    while True:
        terms = {}
        for _ in range(rng.randint(1, 3)):
            e = [0, 0, 0]
            for _ in range(rng.randint(0, deg)):
                e[rng.randrange(nvars)] += 1
            terms[tuple(e)] = mpq(rng.choice([-3, -2, -1, 1, 2, 3]))
        p = XYZ.from_dict(terms)
        if p or not nonzero:
            return p


def planted_invariant(rng: random.Random) -> RatFun:
    """I = (A y' + B)/C with A, B, C small polynomials in x, y; I_{y'} != 0."""
    A = _random_poly(rng, 1, nonzero=True)
    B = _random_poly(rng, 2)
    C = _random_poly(rng, 1, nonzero=True) if rng.random() < 0.5 else XYZ.one()
    return RatFun(A * XYZ.var(YP) + B, C)


def from_invariant(I: RatFun) -> Planted:
    Ix, Iy, Ip = I.diff(X), I.diff(Y), I.diff(YP)
    yp = RatFun(XYZ.var(YP))
    phi = -(Ix + yp * Iy) / Ip
    ode = SOODE(phi.num, phi.den, f"y'' = {render(phi)}")
    return Planted(ode, I, SRPair(Iy / Ip, -Ip, phi))


def planted_soode(rng: random.Random) -> Planted:
    return from_invariant(planted_invariant(rng))
