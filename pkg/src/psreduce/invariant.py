"""First integrals from a verified (S, R) pair and the reduced first-order ODE.

The invariant I has gradient
    I_x = R (phi + S y'),  I_y = -R S,  I_{y'} = -R,
and is recovered by three nested quadratures: in x, then in y for what the
x-integral misses, then in y'.  Each later integrand is independent of the
variables already integrated over, which is asserted before integrating.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq

from .elem import ElemInvariant
from .errors import InternalError
from .frontend import SOODE, render_poly
from .gcd import gcd
from .integrate import integrate_rational
from .poly import Poly, Ring, X, XYZ, Y, YP
from .ratfun import RatFun
from .soode import SRPair

C_RING = Ring(("x", "y", "y'", "C1"))
C1 = 3


def gradient_of(pair: SRPair) -> tuple[RatFun, RatFun, RatFun]:
    R, S = pair.R, pair.S
    yp = RatFun(XYZ.var(YP))
    return R * (pair.phi + S * yp), -(R * S), -R


def is_closed(grad: tuple[RatFun, RatFun, RatFun]) -> bool:
    """Mixed partials agree, so the 1-form is closed."""
    gx, gy, gp = grad
    return not (gx.diff(Y) - gy.diff(X)) and not (gx.diff(YP) - gp.diff(X)) \
        and not (gy.diff(YP) - gp.diff(Y))


def integrate_gradient(grad: tuple[RatFun, ...], nvars: int = 3) -> ElemInvariant:
    """Potential of a closed rational 1-form, integrating x, then y, then y'."""
    total = ElemInvariant()
    for v in range(nvars):
        rest = grad[v] - total.diff(v) if v else grad[v]
        for w in range(v):
            if rest.num.has_var(w) or rest.den.has_var(w):
                raise InternalError(f"integrand for variable {v} still depends on variable {w}")
        if rest:
            total = total + integrate_rational(rest, v)
    return total.canonical()


def matches_gradient(inv: ElemInvariant, grad: tuple[RatFun, ...]) -> bool:
    return all(not (inv.diff(i) - g) for i, g in enumerate(grad))


def build_invariant(pair: SRPair, normalize: bool = True) -> ElemInvariant:
    """The invariant of a verified pair, scaled to the canonical normalization."""
    grad = gradient_of(pair)
    if not is_closed(grad):
        raise InternalError("gradient of the pair is not closed; was the pair verified?")
    raw = integrate_gradient(grad)
    if not matches_gradient(raw, grad):
        raise InternalError("nested quadrature does not reproduce the gradient")
    return raw.normalized() if normalize else raw


# -- reduced ODE ------------------------------------------------------------------

def _lift(p: Poly) -> Poly:
    return p.to_ring(C_RING)


def _strip_common(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    g = gcd(a, b)
    if not g.is_const():
        a, b = a.exquo(g), b.exquo(g)
    if b.lc() < 0:
        a, b = -a, -b
    return a, b


def _paren(s: str, p: Poly) -> str:
    if len(p) == 1:
        exps, c = next(iter(p))
        if c > 0 and (c == 1 or not any(exps)):
            return s
    return f"({s})"


def _square_part(n: int) -> int:
    """Largest k with k^2 dividing n."""
    k, f = 1, 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            k *= f
        f += 1
    return k


def _tidy_quadratic(b: Poly, a: Poly, disc: Poly) -> tuple[Poly, Poly, Poly]:
    """Rewrite (-b +/- sqrt(disc))/a with integer square content pulled out and cancelled."""
    c = disc.content()
    k = _square_part(int(c.numerator)) if c.denominator == 1 else 1
    g = k
    for q in (b, a):
        if q:
            g = math.gcd(g, int(q.content().numerator))
    r = mpq(k, g)  # sqrt(disc)/g = r * sqrt(disc/k^2)
    b, a, disc = b * mpq(1, g), a * mpq(1, g), disc * (r * r / (k * k))
    if a.lc() < 0:
        b, a = -b, -a
    return b, a, disc


@dataclass(frozen=True)
class ReducedODE:
    """I(x, y, y') = C1, optionally solved for y' (one or two branches).

    Explicit branches are y' = (-b +/- sqrt(disc)) / (2 a) in the quadratic
    case and y' = num/den in the linear case; polynomials live in x, y, C1.
    """
    invariant: ElemInvariant
    kind: str = "implicit"  # implicit | linear | quadratic
    num: Poly | None = None
    den: Poly | None = None
    disc: Poly | None = None

    def relation(self) -> str:
        return f"{self.invariant} = C1"

    def explicit(self) -> list[str]:
        if self.kind == "linear":
            n, d = self.num, self.den
            if d.is_const() and d.const_value() == 1:
                return [f"y' = {render_poly(n)}"]
            return [f"y' = {_paren(render_poly(n), n)}/{_paren(render_poly(d), d)}"]
        if self.kind == "quadratic":
            b, a, disc = self.num, self.den, self.disc
            root = f"sqrt({render_poly(disc)})"
            if not b:
                if a.is_const() and a.const_value() == 1:
                    return [f"y' = {root}", f"y' = -{root}"]
                return [f"y' = {root}/{_paren(render_poly(a), a)}",
                        f"y' = -{root}/{_paren(render_poly(a), a)}"]
            nb = render_poly(-b)
            if a.is_const() and a.const_value() == 1:
                return [f"y' = {nb} + {root}", f"y' = {nb} - {root}"]
            den = _paren(render_poly(a), a)
            return [f"y' = ({nb} + {root})/{den}", f"y' = ({nb} - {root})/{den}"]
        return []

    def branches(self, c1):
        """Float evaluators y'(x, y) of the explicit branches for a numeric C1."""
        if self.kind == "linear":
            n, d = self.num.float_fn(), self.den.float_fn()
            return [lambda x, y: n(x, y, 0.0, c1) / d(x, y, 0.0, c1)]
        if self.kind == "quadratic":
            b, a, disc = self.num.float_fn(), self.den.float_fn(), self.disc.float_fn()
            return [lambda x, y, s=s: (-b(x, y, 0.0, c1) + s * math.sqrt(disc(x, y, 0.0, c1)))
                    / a(x, y, 0.0, c1) for s in (1.0, -1.0)]
        return []

    def __str__(self) -> str:
        lines = [self.relation()] + self.explicit()
        return "\n".join(lines)


def reduce(soode: SOODE, inv: ElemInvariant) -> ReducedODE:
    """Solve I = C1 for y' when I is rational of degree <= 2 in y'."""
    if not inv.is_rational():
        return ReducedODE(inv)
    n, d = _lift(inv.z0.num), _lift(inv.z0.den)
    E = n - d * C_RING.var(C1)
    cs = E.coeffs_in(YP)
    top = max(cs) if cs else 0
    if top == 1:
        num, den = _strip_common(-cs.get(0, C_RING.zero()), cs[1])
        return ReducedODE(inv, "linear", num, den)
    if top == 2:
        a2, b2, c2 = cs[2], cs.get(1, C_RING.zero()), cs.get(0, C_RING.zero())
        if not b2:
            # y' = +/- sqrt(-c/a): keep sqrt(-c a)/a to stay polynomial under the root
            disc = -(c2 * a2)
            if a2.lc() < 0:
                a2 = -a2
            return ReducedODE(inv, "quadratic", C_RING.zero(), a2, disc)
        b, a, disc = _tidy_quadratic(b2, a2 * 2, b2 * b2 - a2 * c2 * 4)
        return ReducedODE(inv, "quadratic", b, a, disc)
    return ReducedODE(inv)
