"""Partial derivatives and the total-derivative operators D and script D."""
from __future__ import annotations

from .poly import Poly, X, Y, YP, XYZ
from .ratfun import RatFun, as_ratfun

VARIABLE_INDEX = {"x": X, "y": Y, "y1": YP, "y'": YP}


def _index(v) -> int:
    if isinstance(v, int):
        return v
    return VARIABLE_INDEX[v]


def partial(f, v):
    """Exact partial derivative of a Poly or RatFun with respect to x, y or y'."""
    i = _index(v)
    if isinstance(f, Poly):
        return f.diff(i)
    return as_ratfun(f).diff(i)


def scaled_D(f: Poly, M: Poly, N: Poly) -> Poly:
    """N * D[f] for a polynomial f, which is again a polynomial.

    With phi = M/N this is N f_x + N y' f_y + M f_{y'}.
    """
    yp = XYZ.var(YP)
    return N * (f.diff(X) + yp * f.diff(Y)) + M * f.diff(YP)


def total_D(f, phi: RatFun) -> RatFun:
    """D[f] = f_x + y' f_y + phi f_{y'}."""
    phi = as_ratfun(phi)
    M, N = phi.num, phi.den
    if isinstance(f, Poly):
        return RatFun(scaled_D(f, M, N), N)
    f = as_ratfun(f)
    n, d = f.num, f.den
    if d.is_const():
        return RatFun(scaled_D(n, M, N), N * d)
    return RatFun(d * scaled_D(n, M, N) - n * scaled_D(d, M, N), N * d * d)


def script_D(f: Poly, S_d: Poly, M: Poly, N: Poly) -> Poly:
    """(S_d N^2) D[f] for polynomial f; the result is a polynomial."""
    return S_d * N * scaled_D(f, M, N)


def phi_parts(M: Poly, N: Poly) -> tuple[Poly, Poly]:
    """Numerators of phi_y and phi_{y'} over the common denominator N^2."""
    return (M.diff(Y) * N - M * N.diff(Y), M.diff(YP) * N - M * N.diff(YP))
