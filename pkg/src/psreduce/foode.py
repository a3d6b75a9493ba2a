"""Integrating factors of y' = M(x, y)/N(x, y) from Darboux polynomials.

With D = N d/dx + M d/dy, an integrating factor R = prod f_i^{n_i} built from
Darboux polynomials f_i (D[f_i] = g_i f_i) must satisfy
    sum n_i g_i = -(N_x + M_y),
which is linear in the exponents.  The first integral W then has
W_x = R M and W_y = -R N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .darboux import DarbouxPoly, darboux_polynomials, power_product, solve_exponents
from .elem import ElemInvariant
from .errors import NoElementaryFactorAtThisDegree, UnsupportedIntegral
from .frontend import FOODE
from .invariant import integrate_gradient, matches_gradient
from .limits import Deadline, Limits
from .poly import Poly, X, Y
from .ratfun import RatFun


def derivation(foode: FOODE):
    M, N = foode.M, foode.N
    return lambda f: N * f.diff(X) + M * f.diff(Y)


def divergence(foode: FOODE) -> Poly:
    return foode.N.diff(X) + foode.M.diff(Y)


@dataclass(frozen=True)
class IntegratingFactor1:
    factors: tuple[tuple[DarbouxPoly, mpq], ...]

    @property
    def integral(self) -> bool:
        return all(n.denominator == 1 for _, n in self.factors)

    def log_derivative_residual(self, foode: FOODE) -> Poly:
        """sum n_i g_i + N_x + M_y, which vanishes for an integrating factor."""
        out = divergence(foode)
        for d, n in self.factors:
            out = out + d.cofactor * n
        return out

    def as_ratfun(self) -> RatFun:
        if not self.integral:
            raise UnsupportedIntegral("integrating factor has non-integer exponents")
        return power_product([d.f for d, _ in self.factors], [n for _, n in self.factors])

    def exactness_residual(self, foode: FOODE) -> RatFun:
        """(R N)_x + (R M)_y for a rational R."""
        R = self.as_ratfun()
        return (R * foode.N).diff(X) + (R * foode.M).diff(Y)

    def __str__(self) -> str:
        from .frontend import render_poly
        parts = []
        for d, n in self.factors:
            if n == 0:
                continue
            base = f"({render_poly(d.f)})" if len(d.f) > 1 else render_poly(d.f)
            if n == 1:
                parts.append(base)
            elif n.denominator == 1:
                parts.append(f"{base}^{n.numerator}")
            else:
                parts.append(f"{base}^({n})")
        return "*".join(parts) or "1"


def cofactor_degree(foode: FOODE) -> int:
    return max(foode.M.total_degree(), foode.N.total_degree()) - 1


def find_darboux(foode: FOODE, deg: int, limits: Limits | None = None,
                 deadline: Deadline | None = None) -> list[DarbouxPoly]:
    """Darboux polynomials in x, y of total degree <= deg (constants excluded)."""
    if deg < 1:
        raise ValueError("degree must be at least 1")
    return darboux_polynomials(derivation(foode), deg, max(cofactor_degree(foode), 0), 2,
                               limits, deadline)


def find_integrating_factor(foode: FOODE, darboux: Sequence[DarbouxPoly]) -> IntegratingFactor1:
    """Exponents n_i with sum n_i g_i = -(N_x + M_y); small integer solutions preferred."""
    rhs = -divergence(foode)
    if not rhs:
        return IntegratingFactor1(())
    if not darboux:
        raise NoElementaryFactorAtThisDegree("no Darboux polynomials to combine")
    sols = solve_exponents([d.cofactor for d in darboux], rhs)
    if not sols:
        raise NoElementaryFactorAtThisDegree("exponent system is inconsistent")
    # integer exponents first, then the smallest ones: y' = y/x gets 1/(x y), not 1/y^2
    best = min(sols, key=lambda n: (any(q.denominator != 1 for q in n),
                                    max(abs(q) for q in n), sum(1 for q in n if q)))
    factor = IntegratingFactor1(tuple((d, n) for d, n in zip(darboux, best) if n != 0))
    if factor.log_derivative_residual(foode):
        raise NoElementaryFactorAtThisDegree("exponent solution failed verification")
    return factor


def first_integral(foode: FOODE, R: IntegratingFactor1) -> ElemInvariant:
    """W with W_x = R M and W_y = -R N, normalized; raises UnsupportedIntegral."""
    r = R.as_ratfun()
    grad = (r * foode.M, -(r * foode.N), RatFun(foode.M.ring.zero()))
    W = integrate_gradient(grad, nvars=2)
    if not matches_gradient(W, grad):
        raise UnsupportedIntegral("quadrature does not reproduce the gradient")
    return W.normalized()


reduce_foode = first_integral


def solve_first_order(foode: FOODE, max_degree: int = 2, limits: Limits | None = None
                      ) -> tuple[list[DarbouxPoly], IntegratingFactor1, ElemInvariant]:
    """Raise the Darboux degree until an integrating factor with an elementary W appears."""
    limits = limits or Limits()
    deadline = limits.deadline()
    last: Exception | None = None
    for deg in range(1, max_degree + 1):
        darb = find_darboux(foode, deg, limits, deadline)
        try:
            R = find_integrating_factor(foode, darb)
            return darb, R, first_integral(foode, R)
        except (NoElementaryFactorAtThisDegree, UnsupportedIntegral) as e:
            last = e
    raise NoElementaryFactorAtThisDegree(
        f"no integrating factor up to degree {max_degree}" + (f" ({last})" if last else ""))
