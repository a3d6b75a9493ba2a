"""Restricted integration of rational functions with respect to one variable.

The integrand is viewed as a univariate rational function in v whose
coefficients live in K = Q(other two variables).  Hermite reduction removes
the repeated part of the denominator; the remaining log part is accepted when
every residue is a rational constant (Rothstein-Trager with exact gcds) and
otherwise when a quadratic factor with conjugate complex roots yields an
arctangent with rational data.  Anything else raises UnsupportedIntegral with
the part already integrated and the remainder.

Antiderivatives are determined up to functions of the other variables, so
log arguments may be rescaled by such functions.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import is_square, isqrt, mpq

from .elem import ElemInvariant
from .errors import UnsupportedIntegral
from .gcd import lcm, partial_factor
from .poly import Poly, XYZ
from .ratfun import RatFun, as_ratfun

UPoly = list  # dense coefficients in K, index = power of v

_ZERO = RatFun(XYZ.zero())
_ONE = RatFun(XYZ.one())


# -- K[v] arithmetic -----------------------------------------------------------------

def _trim(a: UPoly) -> UPoly:
    while a and not a[-1]:
        a.pop()
    return a


def _deg(a: UPoly) -> int:
    return len(a) - 1


def _add(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else _ZERO) + (b[i] if i < len(b) else _ZERO) for i in range(n)])


def _neg(a: UPoly) -> UPoly:
    return [-c for c in a]


def _sub(a: UPoly, b: UPoly) -> UPoly:
    return _add(a, _neg(b))


def _scale(a: UPoly, c: RatFun) -> UPoly:
    return _trim([x * c for x in a]) if c else []


def _mul(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _divmod(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    inv = b[-1].inverse()
    while r and len(r) >= len(b):
        c = r[-1] * inv
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = r[i + k] - c * y
        r.pop()
        _trim(r)
    return _trim(q), r


def _exquo(a: UPoly, b: UPoly) -> UPoly:
    q, r = _divmod(a, b)
    if r:
        raise ArithmeticError("inexact division in K[v]")
    return q


def _monic(a: UPoly) -> UPoly:
    return _scale(a, a[-1].inverse()) if a else a


def _gcd(a: UPoly, b: UPoly) -> UPoly:
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a)


def _xgcd(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    """(s, g) with s a = g mod b and g = gcd(a, b) monic."""
    r0, r1 = a, b
    s0, s1 = [_ONE], []
    while r1:
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1))
    inv = r0[-1].inverse()
    return _scale(s0, inv), _scale(r0, inv)


def _solve_bezout(a: UPoly, b: UPoly, c: UPoly) -> tuple[UPoly, UPoly]:
    """s, t with s a + t b = c and deg s < deg b (requires gcd(a, b) | c)."""
    s, g = _xgcd(a, b)
    q, r = _divmod(c, g)
    if r:
        raise ArithmeticError("gcd does not divide the right-hand side")
    s = _divmod(_mul(s, q), b)[1]
    t = _exquo(_sub(c, _mul(s, a)), b)
    return s, t


def _diff(a: UPoly) -> UPoly:
    return _trim([a[i] * i for i in range(1, len(a))])


def _from_poly(p: Poly, v: int) -> UPoly:
    cs = p.coeffs_in(v)
    if not cs:
        return []
    out = [_ZERO] * (max(cs) + 1)
    for k, c in cs.items():
        out[k] = RatFun(c)
    return _trim(out)


def _to_ratfun(a: UPoly, v: int) -> RatFun:
    out = _ZERO
    xv = RatFun(XYZ.var(v))
    for c in reversed(a):
        out = out * xv + c
    return out


def _to_poly(a: UPoly, v: int) -> Poly:
    """Primitive polynomial proportional (over K) to a."""
    den = XYZ.one()
    for c in a:
        if c:
            den = lcm(den, c.den)
    xv = XYZ.var(v)
    out = XYZ.zero()
    for k, c in enumerate(a):
        if c:
            out = out + (c.num * den.exquo(c.den)) * xv ** k
    return out.primitive()


def _eval_other(a: UPoly, point: Sequence) -> list[complex]:
    return [complex(float(c.evaluate(point))) if c else 0j for c in a]


# -- Hermite reduction -----------------------------------------------------------------

def _hermite(A: UPoly, D: UPoly) -> tuple[list[tuple[UPoly, UPoly]], UPoly, UPoly]:
    """Rational part pieces [(B, Dm)] with sum d/dv(B/Dm), plus A_s/D_s with D_s squarefree."""
    pieces = []
    Dp = _diff(D)
    Dm = _gcd(D, Dp)
    Ds = _exquo(D, Dm)
    while _deg(Dm) > 0:
        Dm2 = _gcd(Dm, _diff(Dm))
        Dms = _exquo(Dm, Dm2)
        coef = _neg(_exquo(_mul(Ds, _diff(Dm)), Dm))
        B, C = _solve_bezout(coef, Dms, A)
        A = _sub(C, _exquo(_mul(_diff(B), Ds), Dms))
        pieces.append((B, Dm))
        Dm = Dm2
    return pieces, A, Ds


# -- log part ------------------------------------------------------------------------

_rng = random.Random(20240917)


def _sample_point(polys: Sequence[UPoly], v: int) -> list:
    """A rational point for the other variables keeping every leading coefficient nonzero."""
    for _ in range(50):
        point = [mpq(_rng.randint(-97, 97), _rng.randint(1, 13)) for _ in range(3)]
        ok = True
        for a in polys:
            if not a:
                continue
            lc = a[-1]
            try:
                if lc.evaluate(point) == 0:
                    ok = False
            except ZeroDivisionError:
                ok = False
        if ok:
            return point
    raise UnsupportedIntegral("no regular sample point for residue detection")


def _residue_candidates(A: UPoly, D: UPoly, v: int) -> list[mpq]:
    """Rational numbers that look like residues of A/D at two random specializations."""
    Dp = _diff(D)
    found = None
    for _ in range(2):
        point = _sample_point([D, Dp], v)
        d = _eval_other(D, point)
        a = _eval_other(A, point)
        dp = _eval_other(Dp, point)
        roots = np.roots(list(reversed(d)))
        cands = set()
        for r in roots:
            num = np.polyval(list(reversed(a)), r) if a else 0
            den = np.polyval(list(reversed(dp)), r)
            if den == 0:
                continue
            c = complex(num / den)
            if abs(c.imag) > 1e-6 * max(1.0, abs(c)):
                continue
            q = Fraction(c.real).limit_denominator(10 ** 4)
            if abs(float(q) - c.real) < 1e-6 * max(1.0, abs(c.real)):
                cands.add(mpq(q.numerator, q.denominator))
        found = cands if found is None else found & cands
    return sorted(found or ())


def _poly_sqrt(p: Poly) -> Poly | None:
    c, factors = partial_factor(p)
    c = mpq(c)
    if c < 0 or not (is_square(c.numerator) and is_square(c.denominator)):
        return None
    out = XYZ.const(mpq(isqrt(c.numerator), isqrt(c.denominator)))
    for f, m in factors:
        if m % 2:
            return None
        out = out * f ** (m // 2)
    return out


def _ratfun_sqrt(f: RatFun) -> RatFun | None:
    n, d = _poly_sqrt(f.num), _poly_sqrt(f.den)
    if n is None or d is None:
        return None
    return RatFun(n, d)


def _atan_part(A: UPoly, D: UPoly, v: int):
    """Integrate A/D with D quadratic in v and non-real conjugate roots; None if not rational data."""
    if _deg(D) != 2 or _deg(A) > 1:
        return None
    c, b, a = D
    p = A[1] if len(A) > 1 else _ZERO
    q = A[0] if A else _ZERO
    logs = []
    k_log = p / (a * 2)
    if k_log:
        if not k_log.is_const():
            return None
        logs.append((k_log.const_value(), _to_poly(D, v)))
    k = q - p * b / (a * 2)
    if not k:
        return logs, []
    disc = a * c * 4 - b * b
    s = _ratfun_sqrt(disc)
    if s is None:
        return None
    coef = k * 2 / s
    if not coef.is_const():
        return None
    arg = (RatFun(XYZ.var(v)) * a * 2 + b) / s
    return logs, [(coef.const_value(), arg.num, arg.den)]


def _log_part(A: UPoly, D: UPoly, v: int):
    """Log and atan terms of A/D, D squarefree and deg A < deg D."""
    logs: list[tuple[mpq, Poly]] = []
    atans: list[tuple[mpq, Poly, Poly]] = []
    rest_num, rest_den = A, D
    Dp = _diff(D)
    for c in _residue_candidates(A, D, v):
        if c == 0:
            continue
        g = _gcd(_sub(A, _scale(Dp, RatFun.const(c))), D)
        if _deg(g) > 0:
            logs.append((c, g))
    if logs:
        # remainder A/D - sum c g'/g, over the cofactor of the extracted factors
        total = _to_ratfun(A, v) / _to_ratfun(D, v)
        for c, g in logs:
            total = total - RatFun.const(c) * _to_ratfun(_diff(g), v) / _to_ratfun(g, v)
        rest_num, rest_den = _from_poly(total.num, v), _from_poly(total.den, v)
    out_logs = [(c, _to_poly(g, v)) for c, g in logs]
    if not rest_num:
        return out_logs, atans
    # remaining factors have non-rational residues; factor the reduced denominator,
    # since the remainder may have cancelled some of D's factors
    num_r = _to_ratfun(rest_num, v) / _to_ratfun(rest_den, v)
    pieces = [f for f, _ in partial_factor(num_r.den)[1] if f.has_var(v)]
    if len(pieces) == 1:
        parts = [(num_r, pieces[0])]
    else:
        parts = _partial_fractions(num_r, pieces, v)
    for frac, piece in parts:
        res = _atan_part(_from_poly(frac.num, v), _from_poly(frac.den, v), v)
        if res is None:
            return None
        out_logs.extend(res[0])
        atans.extend(res[1])
    return out_logs, atans


def _partial_fractions(f: RatFun, pieces: Sequence[Poly], v: int) -> list[tuple[RatFun, Poly]]:
    """f = sum N_i / piece_i over K for pairwise coprime pieces with product = den(f) up to K."""
    D = _from_poly(f.den, v)
    A = _from_poly(f.num, v)
    out = []
    for p in pieces:
        P = _from_poly(p, v)
        other = _exquo(_monic(D), _monic(P)) if _deg(P) < _deg(D) else [_ONE]
        # A/D = N/P + M/other with N other + M P = A * (P other)/D
        scale = (_to_ratfun(_mul(_monic(P), other), v) / _to_ratfun(D, v))
        rhs = _scale(A, scale)
        N, _ = _solve_bezout(other, _monic(P), rhs)
        N = _divmod(N, _monic(P))[1]
        out.append((_to_ratfun(N, v) / _to_ratfun(_monic(P), v), p))
    return out


# -- public ----------------------------------------------------------------------------

def hermite_reduce(f, v: int) -> tuple[RatFun, RatFun]:
    """(g, h) with f = dg/dv + h and the denominator of h squarefree in v."""
    f = as_ratfun(f)
    if not f or (not f.num.has_var(v) and not f.den.has_var(v)):
        return _ZERO, f
    pieces, As, Ds = _hermite(_from_poly(f.num, v), _from_poly(f.den, v))
    g = _ZERO
    for B, Dm in pieces:
        g = g + _to_ratfun(B, v) / _to_ratfun(Dm, v)
    return g, _to_ratfun(As, v) / _to_ratfun(Ds, v)


def integrate_rational(f, v: int) -> ElemInvariant:
    """Antiderivative of a rational function with respect to variable index v.

    The result F satisfies dF/dv = f exactly; UnsupportedIntegral carries the
    partial antiderivative and the unintegrated remainder otherwise.
    """
    f = as_ratfun(f)
    if not f:
        return ElemInvariant()
    if not f.num.has_var(v) and not f.den.has_var(v):
        return ElemInvariant(f * RatFun(XYZ.var(v)))
    A, D = _from_poly(f.num, v), _from_poly(f.den, v)
    pieces, As, Ds = _hermite(A, D)
    z0 = _ZERO
    for B, Dm in pieces:
        z0 = z0 + _to_ratfun(B, v) / _to_ratfun(Dm, v)
    Q, Rm = _divmod(As, Ds)
    xv = RatFun(XYZ.var(v))
    for k, c in enumerate(Q):
        if c:
            z0 = z0 + c * xv ** (k + 1) / (k + 1)
    if not Rm:
        return ElemInvariant(z0)
    res = _log_part(Rm, Ds, v)
    if res is None:
        remainder = _to_ratfun(Rm, v) / _to_ratfun(Ds, v)
        raise UnsupportedIntegral("log part needs non-rational constants",
                                  partial=ElemInvariant(z0), remainder=remainder)
    logs, atans = res
    F = ElemInvariant(z0, tuple(logs), tuple(atans)).canonical()
    return F
