"""Search for the (S, R) pair of a second-order ODE y'' = M/N.

S solves the Riccati-type compatibility condition
    D[S] + phi_y - S phi_{y'} - S^2 = 0,
R solves D[R] + R (S + phi_{y'}) = 0 together with
    R_y - R_{y'} S - S_{y'} R = 0,
where D = d/dx + y' d/dy + phi d/dy' and phi = M/N.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .algsys import AlgSystem, ansatz_monomials, collect_system, make_unknowns, solve_poly
from .calculus import phi_parts, scaled_D, script_D, total_D
from .darboux import candidate_factors, darboux_polynomials, merge_darboux, power_product, solve_exponents
from .errors import LimitExceeded, NothingFound
from .frontend import SOODE
from .limits import Deadline, Limits
from .poly import ONE, ZERO, Poly, Y, YP
from .ratfun import RatFun

log = logging.getLogger(__name__)

ANSATZ_SHAPE = "box"


@dataclass(frozen=True)
class SRPair:
    S: RatFun
    R: RatFun
    phi: RatFun
    degree: int = 0
    strategy: str = ""

    def complexity(self) -> int:
        return self.S.complexity() + self.R.complexity()


# -- residuals -----------------------------------------------------------------

def residual_S(S: RatFun, phi: RatFun) -> RatFun:
    return total_D(S, phi) + phi.diff(Y) - S * phi.diff(YP) - S * S


def residual_R(R: RatFun, S: RatFun, phi: RatFun) -> RatFun:
    return total_D(R, phi) + R * (S + phi.diff(YP))


def residual_RS(R: RatFun, S: RatFun) -> RatFun:
    return R.diff(Y) - R.diff(YP) * S - S.diff(YP) * R


def residuals(pair: SRPair) -> tuple[RatFun, RatFun, RatFun]:
    return (residual_S(pair.S, pair.phi), residual_R(pair.R, pair.S, pair.phi),
            residual_RS(pair.R, pair.S))


def check_DRS(pair: SRPair) -> bool:
    """D[R S] + R phi_y == 0 exactly (implied by the first two conditions)."""
    return not (total_D(pair.R * pair.S, pair.phi) + pair.R * pair.phi.diff(Y))


def is_verified(pair: SRPair) -> bool:
    return bool(pair.R) and all(not r for r in residuals(pair))


# -- S ---------------------------------------------------------------------------

def s_equation(Sn: Poly, Sd: Poly, M: Poly, N: Poly) -> Poly:
    """Numerator of the S condition multiplied by S_d^2 N^2 (polynomial identity)."""
    phy, phyp = phi_parts(M, N)
    return (N * (Sd * scaled_D(Sn, M, N) - Sn * scaled_D(Sd, M, N))
            + Sd * Sd * phy - Sn * Sd * phyp - Sn * Sn * N * N)


def _gauge_branches(ansatz):
    """Fix the leading nonzero coefficient of an ansatz to 1, one branch per choice."""
    idx = list(ansatz.indices)
    for g in range(len(idx) - 1, -1, -1):
        subs = {idx[g]: ONE}
        subs.update({h: ZERO for h in idx[g + 1:]})
        yield g, subs


def _solve_branch(sub: AlgSystem, limits: Limits, deadline: Deadline, reject=None):
    """solve_poly on one gauge branch; a Groebner cap only loses that branch."""
    try:
        return solve_poly(sub, limits, reject=reject, deadline=deadline).branches
    except LimitExceeded as e:
        if e.kind == "timeout":
            raise
        log.info("gauge branch dropped: %s", e)
        return []


def find_S(soode: SOODE, deg: int, limits: Limits | None = None,
           deadline: Deadline | None = None) -> list[RatFun]:
    """All verified S with numerator and denominator inside the degree-deg ansatz."""
    limits = limits or Limits()
    deadline = deadline or limits.deadline()
    M, N = soode.M, soode.N
    phi = soode.phi
    monos = ansatz_monomials(deg, ANSATZ_SHAPE)
    ring, (an, ad) = make_unknowns(("a", deg, monos), ("b", deg, monos))
    Sn, Sd = an.poly(ring), ad.poly(ring)
    system = collect_system(s_equation(Sn, Sd, M, N), ring)
    found: dict[RatFun, None] = {}
    for g, gauge in _gauge_branches(ad):
        deadline.check()
        eqs = [e.subs(gauge) for e in system.equations]
        sub = AlgSystem(ring, [e for e in eqs if e])
        sols = _solve_branch(sub, limits, deadline)
        for br in sols:
            values = dict(br.values)
            values.update(gauge)
            n, d = an.instantiate(values), ad.instantiate(values)
            if not d:
                continue
            S = RatFun(n, d)
            if S in found:
                continue
            if residual_S(S, phi):
                continue
            found[S] = None
    return sorted(found, key=lambda s: (s.complexity(), str(s)))


# -- R ---------------------------------------------------------------------------

def r_rhs(S: RatFun, M: Poly, N: Poly) -> Poly:
    """Required logarithmic script-D derivative of R: -S_n N^2 - S_d (N M_{y'} - M N_{y'})."""
    _, phyp = phi_parts(M, N)
    return -(S.num * N * N + S.den * phyp)


def r_equation(Rn: Poly, Rd: Poly, S: RatFun, M: Poly, N: Poly) -> Poly:
    """Numerator of D[R] + R (S + phi_{y'}) multiplied by R_d^2 S_d N^2."""
    Sd = S.den
    return (Sd * N * (Rd * scaled_D(Rn, M, N) - Rn * scaled_D(Rd, M, N))
            - Rn * Rd * r_rhs(S, M, N))


def normalize_R(R: RatFun) -> RatFun:
    """Scale R so that the leading coefficients of numerator and denominator agree."""
    return R * (R.den.lc() / R.num.lc())


def _cofactor_degree(S: RatFun, M: Poly, N: Poly) -> int:
    return S.den.total_degree() + N.total_degree() + max(N.total_degree() + 1, M.total_degree()) - 1


def _darboux_R(soode: SOODE, S: RatFun, deg: int, limits: Limits, deadline: Deadline,
               max_unknowns: int = 120) -> list[RatFun]:
    M, N = soode.M, soode.N
    op = lambda f: script_D(f, S.den, M, N)
    rhs = r_rhs(S, M, N)
    S_yp = S.diff(YP)
    out = []

    def attempt(darb) -> None:
        if not darb:
            return
        fs = [d.f for d in darb]
        # the y/y' identity is linear in the exponents as well
        A = [RatFun(f.diff(Y) * S.den - f.diff(YP) * S.num, f * S.den) for f in fs]
        for n in solve_exponents([d.cofactor for d in darb], rhs, [(A, S_yp)], integral=True):
            out.append(power_product(fs, n))

    cands = candidate_factors([S.num, S.den, M, N], op)
    attempt(cands)
    if out:
        return out
    cof = _cofactor_degree(S, M, N)
    n_unknowns = len(ansatz_monomials(deg, "total")) + len(ansatz_monomials(cof, "total"))
    if n_unknowns <= max_unknowns:
        deadline.check()
        extra = darboux_polynomials(op, deg, cof, 3, limits, deadline)
        attempt(merge_darboux(cands, extra))
    return out


def _direct_R(soode: SOODE, S: RatFun, deg: int, limits: Limits, deadline: Deadline) -> list[RatFun]:
    M, N = soode.M, soode.N
    monos = ansatz_monomials(deg, "total")
    ring, (an, ad) = make_unknowns(("c", deg, monos), ("d", deg, monos))
    system = collect_system(r_equation(an.poly(ring), ad.poly(ring), S, M, N), ring)
    reject = lambda v: not an.instantiate(v) or not ad.instantiate(v)
    out = []
    for g, gauge in _gauge_branches(ad):
        deadline.check()
        eqs = [e.subs(gauge) for e in system.equations]
        for br in _solve_branch(AlgSystem(ring, [e for e in eqs if e]), limits, deadline, reject):
            values = dict(br.values)
            values.update(gauge)
            n, d = an.instantiate(values), ad.instantiate(values)
            if n and d:
                out.append(RatFun(n, d))
    return out


def find_R(soode: SOODE, S: RatFun, deg: int, limits: Limits | None = None,
           deadline: Deadline | None = None) -> list[RatFun]:
    """Verified R for a given S: Darboux route first, then a direct ansatz."""
    return list(_find_R_tagged(soode, S, deg, limits, deadline))


def _find_R_tagged(soode, S, deg, limits, deadline) -> dict[RatFun, str]:
    limits = limits or Limits()
    deadline = deadline or limits.deadline()
    phi = soode.phi
    found: dict[RatFun, str] = {}
    for strategy, fn in (("darboux", _darboux_R), ("ansatz", _direct_R)):
        for R in fn(soode, S, deg, limits, deadline):
            R = normalize_R(R)
            if R in found or residual_R(R, S, phi) or residual_RS(R, S):
                continue
            found[R] = strategy
        if found:
            break
    return {r: found[r] for r in sorted(found, key=lambda r: (r.complexity(), str(r)))}


# -- search ------------------------------------------------------------------------

def degree_schedule(limits: Limits) -> list[tuple[int, int]]:
    """(S degree, R degree) per deepening level: S capped at s_degree, R at least r_degree."""
    out = []
    for d in range(1, limits.max_degree + 1):
        step = (min(d, limits.s_degree), min(max(d, limits.r_degree), limits.max_degree))
        if step not in out:
            out.append(step)
    return out


def _search_level(soode, ds, dr, limits, deadline, r_budget, s_cache, pairs) -> None:
    phi = soode.phi
    if ds not in s_cache:
        s_cache[ds] = find_S(soode, ds, limits, deadline)
    level = max(ds, dr)
    for S in s_cache[ds]:
        try:
            Rs = _find_R_tagged(soode, S, dr, limits, deadline.sub(r_budget))
        except LimitExceeded:
            if deadline.expired():
                raise
            log.info("R search for S = %s ran out of its budget", S)
            continue
        for R, how in Rs.items():
            pair = SRPair(S, R, phi, level, how)
            if (S, R) not in pairs and is_verified(pair) and check_DRS(pair):
                pairs[(S, R)] = pair


def search(soode: SOODE, limits: Limits | None = None, deadline: Deadline | None = None) -> list[SRPair]:
    """Iterative deepening over the degree schedule; raises NothingFound when exhausted.

    Pairs are ranked by total monomial count of S and R, ties by rendering.
    """
    limits = limits or Limits()
    deadline = deadline or limits.deadline()
    r_budget = limits.stage_timeout / 4
    pairs: dict[tuple[RatFun, RatFun], SRPair] = {}
    s_cache: dict[int, list[RatFun]] = {}
    for ds, dr in degree_schedule(limits):
        try:
            _search_level(soode, ds, dr, limits, deadline, r_budget, s_cache, pairs)
        except LimitExceeded:
            if not pairs:
                raise
            # deepening past the first productive degree is optional; keep what verified
            log.warning("search stopped at degree (%d, %d): stage timeout; "
                        "returning the %d pairs found so far", ds, dr, len(pairs))
            break
        if pairs and not limits.all_degrees:
            break
    if not pairs:
        raise NothingFound(f"no verified (S, R) pair up to degree {limits.max_degree}")
    return sorted(pairs.values(), key=lambda p: (p.complexity(), str(p.S), str(p.R)))
