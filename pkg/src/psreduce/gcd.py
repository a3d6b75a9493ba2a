"""Multivariate gcd by recursive content/primitive-part reduction.

The univariate step is the subresultant polynomial remainder sequence over
the coefficient ring Q[other variables].  Also home to the light-weight
factoring helpers used elsewhere: squarefree decomposition and coprime
refinement.  There is no full multivariate factorization.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .poly import ONE, Poly


def gcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient."""
    if not a and not b:
        raise ZeroDivisionError("gcd of two zero polynomials")
    if not a:
        return b.primitive()
    if not b:
        return a.primitive()
    return _gcd(a, b).primitive()


def gcd_list(polys: Iterable[Poly]) -> Poly:
    g = None
    for p in polys:
        if not p:
            continue
        g = p if g is None else _gcd(g, p)
        if g.is_const():
            return g.ring.one()
    if g is None:
        raise ZeroDivisionError("gcd of zero polynomials")
    return g.primitive()


def content_in(p: Poly, v: int) -> Poly:
    """gcd of the coefficients of p viewed as a polynomial in variable v."""
    g = None
    for c in sorted(p.coeffs_in(v).values(), key=len):
        g = c if g is None else _gcd(g, c)
        if g.is_const():
            return p.ring.one()
    return g.primitive()


def _gcd(a: Poly, b: Poly) -> Poly:
    ring = a.ring
    if a.is_const() or b.is_const():
        return ring.one()
    ma, mb = a.monomial_content(), b.monomial_content()
    mg = ring.mgcd(ma, mb)
    if ma:
        a = a.div_monomial(ma)
    if mb:
        b = b.div_monomial(mb)
    g = _gcd_no_monomial(a, b)
    return g.mul_term(mg, ONE) if mg else g


def _gcd_no_monomial(a: Poly, b: Poly) -> Poly:
    ring = a.ring
    if a.is_const() or b.is_const():
        return ring.one()
    if a == b:
        return a
    if len(a) <= len(b):
        if a.total_degree() <= b.total_degree() and a.divides_into(b):
            return a
    elif b.total_degree() <= a.total_degree() and b.divides_into(a):
        return b
    va, vb = set(a.variables()), set(b.variables())
    common = va & vb
    if not common:
        return ring.one()
    for v in sorted(va - vb):
        return _gcd(content_in(a, v), b)
    for v in sorted(vb - va):
        return _gcd(a, content_in(b, v))
    v = min(common, key=lambda i: (max(a.degree(i), b.degree(i)), -i))
    ca, cb = content_in(a, v), content_in(b, v)
    pa = a if ca.is_const() else a.exquo(ca)
    pb = b if cb.is_const() else b.exquo(cb)
    c = _gcd(ca, cb)
    h = _prs_gcd(pa, pb, v)
    return h if c.is_const() else c * h


def _dense(p: Poly, v: int) -> list[Poly]:
    cs = p.coeffs_in(v)
    zero = p.ring.zero()
    return [cs.get(i, zero) for i in range(max(cs) + 1)]


def _strip(r: list[Poly]) -> list[Poly]:
    while r and not r[-1]:
        r.pop()
    return r


def prem(a: Sequence[Poly], b: Sequence[Poly]) -> list[Poly]:
    """Pseudo-remainder of dense univariate polynomials (lowest degree first)."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    lcb = b[-1]
    r = list(a)
    e = da - db + 1
    for i in range(da, db - 1, -1):
        c = r[i]
        r = [x * lcb for x in r]
        if c:
            off = i - db
            for j, bj in enumerate(b):
                if bj:
                    r[off + j] = r[off + j] - c * bj
        e -= 1
        r.pop()
    if e:
        f = lcb ** e
        r = [x * f for x in r]
    return _strip(r)


def _prs_gcd(a: Poly, b: Poly, v: int) -> Poly:
    """gcd of two polynomials primitive in v via the subresultant PRS."""
    ring = a.ring
    A, B = _dense(a, v), _dense(b, v)
    if len(A) < len(B):
        A, B = B, A
    one = ring.one()
    g = h = one
    while True:
        delta = len(A) - len(B)
        R = prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return one
        A = B
        div = g * h ** delta
        B = [r.exquo(div) for r in R] if not div.is_const() else [r * (ONE / div.const_value()) for r in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g ** delta).exquo(h ** (delta - 1))
    res = Poly.from_coeffs_in(ring, v, {i: c for i, c in enumerate(B) if c})
    cont = content_in(res, v)
    return res if cont.is_const() else res.exquo(cont)


def lcm(a: Poly, b: Poly) -> Poly:
    return (a * b).exquo(gcd(a, b)).primitive()


def squarefree(p: Poly, v: int | None = None) -> list[tuple[Poly, int]]:
    """Yun's algorithm for p primitive in v; returns [(factor, multiplicity)]."""
    if p.is_const():
        return []
    if v is None:
        v = p.variables()[0]
    dp = p.diff(v)
    a = gcd(p, dp)
    b = p.exquo(a)
    c = dp.exquo(a)
    d = c - b.diff(v)
    out = []
    i = 1
    while not b.is_const():
        ai = gcd(b, d)
        b = b.exquo(ai)
        c = d.exquo(ai)
        d = c - b.diff(v)
        if not ai.is_const():
            out.append((ai.primitive(), i))
        i += 1
    return out


def coprime_refine(pairs: Iterable[tuple[Poly, int]]) -> list[tuple[Poly, int]]:
    """Rewrite a product of powers as a product of pairwise coprime powers."""
    work = [(f.primitive(), m) for f, m in pairs if not f.is_const()]
    changed = True
    while changed:
        changed = False
        merged: dict[Poly, int] = {}
        for f, m in work:
            merged[f] = merged.get(f, 0) + m
        work = list(merged.items())
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                (f, m), (g, n) = work[i], work[j]
                d = gcd(f, g)
                if d.is_const():
                    continue
                rest = [w for k, w in enumerate(work) if k not in (i, j)]
                new = [(d, m + n), (f.exquo(d), m), (g.exquo(d), n)]
                work = rest + [(p.primitive(), k) for p, k in new if not p.is_const()]
                changed = True
                break
            if changed:
                break
    return sorted(work, key=lambda t: (t[0].lm(), len(t[0])))


def partial_factor(p: Poly) -> tuple[object, list[tuple[Poly, int]]]:
    """Split p into a rational constant and pairwise coprime primitive factors.

    Monomial factors, contents with respect to each variable, and squarefree
    parts are separated; what remains is not guaranteed irreducible.
    """
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    ring = p.ring
    pieces: list[tuple[Poly, int]] = []
    m = p.monomial_content()
    for i, e in enumerate(ring.unpack(m)):
        if e:
            pieces.append((ring.var(i), e))
    q = p.div_monomial(m) if m else p

    def split(f: Poly, mult: int) -> None:
        if f.is_const():
            return
        for v in f.variables():
            c = content_in(f, v)
            if not c.is_const():
                split(c, mult)
                split(f.exquo(c), mult)
                return
        vs = f.variables()
        v = min(vs, key=lambda i: (f.degree(i), i))
        for a, k in squarefree(f.primitive(), v):
            pieces.append((a, k * mult))

    split(q, 1)
    factors = coprime_refine(pieces)
    prod = ring.one()
    for f, k in factors:
        prod = prod * f ** k
    const = p.exquo(prod)
    return const.const_value(), factors
