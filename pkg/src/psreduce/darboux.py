"""Darboux (eigen)polynomials of a polynomial derivation and exponent systems.

A polynomial f is a Darboux polynomial of a derivation L when L[f] = g f for a
polynomial cofactor g.  Products of powers of Darboux polynomials have
logarithmic derivative sum n_i g_i, so integrating factors built from them
reduce to a linear system in the exponents n_i.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from gmpy2 import mpq

from .algsys import AlgSystem, ansatz_monomials, collect_system, linear_family, make_unknowns, solve_poly
from .errors import EmptySolution, LimitExceeded
from .gcd import coprime_refine, lcm, partial_factor
from .limits import Deadline, Limits
from .poly import ONE, ZERO, Poly, Ring, XYZ
from .ratfun import RatFun

log = logging.getLogger(__name__)

Derivation = Callable[[Poly], Poly]


@dataclass(frozen=True)
class DarbouxPoly:
    f: Poly
    cofactor: Poly

    def check(self, op: Derivation) -> bool:
        return op(self.f) == self.cofactor * self.f


def cofactor(op: Derivation, f: Poly) -> Poly | None:
    """g with op(f) = g f, or None when f does not divide op(f)."""
    if f.is_const():
        return None
    try:
        return op(f).exquo(f)
    except ArithmeticError:
        return None


def darboux_polynomials(op: Derivation, deg: int, cof_deg: int, nvars: int = 3,
                        limits: Limits | None = None, deadline: Deadline | None = None,
                        ) -> list[DarbouxPoly]:
    """Darboux polynomials of total degree <= deg by undetermined coefficients.

    The unknown f and cofactor g enter bilinearly through op(f) - g f = 0.  The
    projective freedom of f is fixed by setting its leading coefficient to 1,
    one branch per choice of leading monomial.  Every factor returned by
    partial factorization of a solution is itself Darboux and is included.
    """
    limits = limits or Limits()
    deadline = deadline or limits.deadline()
    fmonos = ansatz_monomials(deg, "total", nvars)
    gmonos = ansatz_monomials(max(cof_deg, 0), "total", nvars)
    ring, (af, ag) = make_unknowns(("f", deg, fmonos), ("g", cof_deg, gmonos))
    f, g = af.poly(ring), ag.poly(ring)
    system = collect_system(op(f) - g * f, ring)
    found: dict[Poly, None] = {}
    idx = list(af.indices)
    for k in range(len(idx) - 1, 0, -1):  # k = 0 would make f constant
        deadline.check()
        gauge = {idx[k]: ONE}
        gauge.update({h: ZERO for h in idx[k + 1:]})
        eqs = [e.subs(gauge) for e in system.equations]
        eqs = [e for e in eqs if e]
        if any(e.is_const() for e in eqs):
            continue
        try:
            sols = solve_poly(AlgSystem(ring, eqs), limits, deadline=deadline)
        except LimitExceeded as e:
            if e.kind == "timeout":
                raise
            log.info("darboux gauge %d skipped: %s", k, e)
            continue
        for br in sols:
            values = dict(br.values)
            values.update(gauge)
            p = af.instantiate(values)
            if p.is_const():
                continue
            for q, _ in partial_factor(p)[1]:
                found[q.primitive()] = None
    out = []
    for q in sorted(found, key=lambda p: (p.total_degree(), p.lm(), len(p))):
        c = cofactor(op, q)
        if c is not None:
            out.append(DarbouxPoly(q, c))
    return out


def candidate_factors(polys: Sequence[Poly], op: Derivation) -> list[DarbouxPoly]:
    """Coprime factors of the given polynomials that happen to be Darboux for op."""
    pieces = []
    for p in polys:
        if p and not p.is_const():
            pieces.extend(partial_factor(p)[1])
    out = []
    for f, _ in coprime_refine(pieces):
        c = cofactor(op, f)
        if c is not None:
            out.append(DarbouxPoly(f, c))
    return out


def merge_darboux(*groups: Sequence[DarbouxPoly]) -> list[DarbouxPoly]:
    seen: dict[Poly, DarbouxPoly] = {}
    for grp in groups:
        for d in grp:
            seen.setdefault(d.f.primitive(), d)
    return sorted(seen.values(), key=lambda d: (d.f.total_degree(), d.f.lm(), len(d.f)))


def _ratfun_rows(terms: Sequence[RatFun], target: RatFun) -> list[Poly]:
    """Polynomial numerators of sum_i n_i terms[i] - target over a common denominator."""
    den = target.den
    for t in terms:
        den = lcm(den, t.den)
    out = [t.num * den.exquo(t.den) for t in terms]
    out.append(target.num * den.exquo(target.den))
    return out


def exponent_system(cofactors: Sequence[Poly], rhs: Poly,
                    extra: Sequence[tuple[Sequence[RatFun], RatFun]] = ()) -> tuple[Ring, AlgSystem]:
    """Linear system for exponents n_i with sum n_i g_i = rhs.

    Each extra entry (A, B) adds the rational identity sum n_i A_i = B.
    """
    k = len(cofactors)
    ring = Ring([f"n{i}" for i in range(k)], order="lex")
    eqs: list[Poly] = []
    rows = [(list(cofactors), rhs)]
    for A, B in extra:
        polys = _ratfun_rows(A, B)
        rows.append((polys[:-1], polys[-1]))
    for lhs, r in rows:
        expr = Poly(XYZ, {}) - r
        for i, g in enumerate(lhs):
            if g:
                expr = expr + g * ring.var(i)
        eqs.extend(collect_system(expr, ring).equations)
    return ring, AlgSystem(ring, eqs)


def solve_exponents(cofactors: Sequence[Poly], rhs: Poly,
                    extra: Sequence[tuple[Sequence[RatFun], RatFun]] = (),
                    integral: bool = False, max_free: int = 3) -> list[list[mpq]]:
    """Representative exponent vectors of the solution family (empty if inconsistent).

    The particular solution has every free exponent at 0; each of the first
    max_free free exponents is then moved to +1 and -1 in turn.
    """
    if not cofactors:
        return []
    k = len(cofactors)
    _, system = exponent_system(cofactors, rhs, extra)
    try:
        sol, free = linear_family(system)
    except EmptySolution:
        return []
    settings = [{}]
    for f in free[:max_free]:
        settings += [{f: ONE}, {f: -ONE}]
    out = []
    for fixed in settings:
        n = []
        for i in range(k):
            if i in sol:
                v = sol[i].get(-1, ZERO) + sum(c * fixed.get(j, ZERO) for j, c in sol[i].items() if j >= 0)
            else:
                v = fixed.get(i, ZERO)
            n.append(mpq(v))
        if integral and any(q.denominator != 1 for q in n):
            continue
        if n not in out:
            out.append(n)
    return out


def power_product(factors: Sequence[Poly], exps: Sequence) -> RatFun:
    """prod f_i^{n_i} for integer exponents."""
    num, den = XYZ.one(), XYZ.one()
    for f, n in zip(factors, exps):
        n = int(n)
        if n > 0:
            num = num * f ** n
        elif n < 0:
            den = den * f ** (-n)
    return RatFun(num, den)
