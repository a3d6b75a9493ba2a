"""Polynomial systems in unknown ansatz coefficients.

Ansatz polynomials in x, y, y' carry coefficients that are polynomials in a
separate ring of unknowns.  Substituting them into a differential identity and
reading off the coefficient of every (x, y, y') monomial gives an
:class:`AlgSystem`, which is solved exactly over Q.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import isqrt, mpq

from .errors import EmptySolution, InternalError, LimitExceeded
from .gcd import partial_factor
from .limits import NO_DEADLINE, Deadline, Limits
from .poly import ONE, ZERO, Poly, Ring, XYZ
from .ratfun import RatFun

log = logging.getLogger(__name__)


# -- ansatz ------------------------------------------------------------------

def ansatz_monomials(degree: int, shape: str = "total", nvars: int = 3) -> list[tuple[int, ...]]:
    """Monomials in canonical (ascending) order.

    shape="total" bounds i+j+k; shape="box" bounds each exponent separately.
    """
    if shape == "total":
        exps = [e for e in itertools.product(range(degree + 1), repeat=nvars) if sum(e) <= degree]
    elif shape == "box":
        exps = list(itertools.product(range(degree + 1), repeat=nvars))
    else:
        raise ValueError(f"unknown ansatz shape {shape!r}")
    if nvars < 3:
        exps = [tuple(e) + (0,) * (3 - nvars) for e in exps]
    return sorted(exps, key=XYZ.pack)


@dataclass(frozen=True)
class AnsatzPoly:
    """sum_m u_m * m over the given monomials; u_m are unknowns offset..offset+len-1."""
    degree: int
    monomials: tuple[tuple[int, int, int], ...]
    offset: int
    prefix: str = "a"

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(f"{self.prefix}{i}" for i in range(len(self.monomials)))

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + len(self.monomials))

    def poly(self, uring: Ring) -> Poly:
        terms = {}
        for idx, exps in zip(self.indices, self.monomials):
            terms[XYZ.pack(exps)] = uring.var(idx)
        return Poly(XYZ, terms)

    def instantiate(self, values: dict[int, object]) -> Poly:
        return XYZ.from_dict({e: values.get(i, ZERO) for i, e in zip(self.indices, self.monomials)})


def make_unknowns(*specs: tuple[str, int, Sequence[tuple[int, int, int]]]) -> tuple[Ring, list[AnsatzPoly]]:
    """Build the unknown ring for several ansatz polynomials: specs are (prefix, degree, monomials)."""
    names: list[str] = []
    out = []
    for prefix, degree, monos in specs:
        a = AnsatzPoly(degree, tuple(monos), len(names), prefix)
        names.extend(a.symbols)
        out.append(a)
    return Ring(names, order="lex"), out


# -- systems -------------------------------------------------------------------

@dataclass
class AlgSystem:
    ring: Ring
    equations: list[Poly]
    kinds: list[str] = field(default_factory=list)

    def __post_init__(self):
        for e in self.equations:
            if e.ring is not self.ring:
                raise InternalError("equation over a foreign ring")
        if not self.kinds:
            self.kinds = ["linear" if e.total_degree() <= 1 else "nonlinear" for e in self.equations]

    @property
    def unknowns(self) -> tuple[str, ...]:
        return self.ring.names

    def is_linear(self) -> bool:
        return all(k == "linear" for k in self.kinds)

    def residuals(self, values: dict[int, object]) -> list:
        point = [values.get(i, ZERO) for i in range(self.ring.nvars)]
        return [e.evaluate(point) for e in self.equations]

    def satisfied_by(self, values: dict[int, object]) -> bool:
        return all(r == 0 for r in self.residuals(values))


@dataclass
class Branch:
    values: dict[int, object]
    free: tuple[int, ...] = ()


@dataclass
class SolutionSet:
    unknowns: tuple[str, ...]
    branches: list[Branch]
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)


def collect_system(residual, ring: Ring) -> AlgSystem:
    """One equation per (x, y, y') monomial: its unknown-polynomial coefficient must vanish."""
    if isinstance(residual, RatFun):
        raise InternalError("pass the cleared numerator, not a RatFun with unknowns")
    if isinstance(residual, tuple):
        num, den = residual
        for c in den.terms.values():
            if isinstance(c, Poly) and not c.is_const():
                raise InternalError("residual denominator contains unknowns")
        residual = num
    eqs = []
    seen = set()
    for c in residual.terms.values():
        if not isinstance(c, Poly):
            c = ring.const(c)
        if c and c not in seen:
            seen.add(c)
            eqs.append(c)
    return AlgSystem(ring, eqs)


# -- linear algebra ------------------------------------------------------------

def _rref(rows: list[dict[int, object]], nvars: int):
    """Exact reduced row echelon form; rows map var -> coeff, key -1 is the constant."""
    pivots: list[tuple[int, dict]] = []
    for row in rows:
        r = dict(row)
        for pv, prow in pivots:
            c = r.get(pv)
            if c:
                for k, v in prow.items():
                    nv = r.get(k, ZERO) - c * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        vars_ = [k for k in r if k >= 0]
        if not vars_:
            if r.get(-1):
                raise EmptySolution("inconsistent linear system")
            continue
        pv = min(vars_)
        inv = ONE / r[pv]
        r = {k: v * inv for k, v in r.items()}
        for i, (qv, qrow) in enumerate(pivots):
            c = qrow.get(pv)
            if c:
                for k, v in r.items():
                    nv = qrow.get(k, ZERO) - c * v
                    if nv:
                        qrow[k] = nv
                    else:
                        qrow.pop(k, None)
        pivots.append((pv, r))
    return pivots


def _linear_rows(eqs: Iterable[Poly]) -> list[dict[int, object]]:
    rows = []
    for e in eqs:
        ring = e.ring
        row = {}
        for m, c in e.terms.items():
            if m == 0:
                row[-1] = c
            else:
                exps = ring.unpack(m)
                if sum(exps) != 1:
                    raise InternalError("nonlinear equation passed to linear solver")
                row[exps.index(1)] = c
        rows.append(row)
    return rows


def solve_linear(sys: AlgSystem, reject: Callable[[dict], bool] | None = None) -> SolutionSet:
    """Exact RREF solution; free unknowns are set to 0 (or 1 if 0 is rejected)."""
    n = sys.ring.nvars
    pivots = _rref(_linear_rows(sys.equations), n)
    pivot_vars = {pv for pv, _ in pivots}
    free = tuple(i for i in range(n) if i not in pivot_vars)
    for fill in (ZERO, ONE):
        values = {i: fill for i in free}
        for pv, row in pivots:
            v = -row.get(-1, ZERO)
            for k, c in row.items():
                if k >= 0 and k != pv:
                    v -= c * values[k]
            values[pv] = v
        if reject is None or not reject(values) or not free:
            break
    if reject is not None and reject(values):
        return SolutionSet(sys.unknowns, [])
    return SolutionSet(sys.unknowns, [Branch(values, free)])


def linear_family(sys: AlgSystem) -> tuple[dict[int, dict[int, object]], tuple[int, ...]]:
    """Full parametric solution: pivot var -> {free var or -1: coeff}; raises EmptySolution."""
    n = sys.ring.nvars
    pivots = _rref(_linear_rows(sys.equations), n)
    pivot_vars = {pv for pv, _ in pivots}
    free = tuple(i for i in range(n) if i not in pivot_vars)
    sol = {}
    for pv, row in pivots:
        sol[pv] = {k: -c for k, c in row.items() if k != pv}
    return sol, free


# -- Groebner bases --------------------------------------------------------------

def _monic(terms: dict) -> dict:
    lc = terms[max(terms)]
    if lc == 1:
        return terms
    inv = ONE / lc
    return {m: c * inv for m, c in terms.items()}


def _reduce(f: dict, G: list[dict], lms: list[int], ring: Ring, full: bool = True) -> dict:
    """Remainder of f modulo G (G monic)."""
    divides = ring.divides
    f = dict(f)
    r: dict = {}
    while f:
        m = max(f)
        for g, gm in zip(G, lms):
            if divides(gm, m):
                c = f.pop(m)
                dm = m - gm
                for k, v in g.items():
                    if k == gm:
                        continue
                    k2 = k + dm
                    nv = f.get(k2, ZERO) - c * v
                    if nv:
                        f[k2] = nv
                    else:
                        f.pop(k2, None)
                break
        else:
            if not full:
                f.update(r)
                return f
            r[m] = f.pop(m)
    return r


def groebner(polys: Sequence[Poly], limits: Limits | None = None,
             deadline: Deadline = NO_DEADLINE) -> list[Poly]:
    """Reduced Groebner basis (order of the ring) by Buchberger's algorithm.

    Pairs are selected by smallest lcm degree; Buchberger's product and chain
    criteria (Gebauer-Moeller update) discard useless pairs.
    """
    limits = limits or Limits()
    polys = [p for p in polys if p]
    if not polys:
        return []
    ring = polys[0].ring
    mdeg, divides, mlcm, mgcd = ring.mdeg, ring.divides, ring.mlcm, ring.mgcd
    G: list[dict] = []
    heads: list[int] = []
    active: list[bool] = []
    pairs: list[tuple[int, int, int]] = []  # (lcm, i, j)

    def add(h: dict) -> None:
        nonlocal pairs
        h = _monic(h)
        hm = max(h)
        k = len(G)
        cand = [(mlcm(heads[i], hm), i) for i in range(k) if active[i]]
        keep = []
        for a, (la, i) in enumerate(cand):
            dominated = any(b != a and divides(lb, la) and (lb != la or b < a)
                            for b, (lb, _) in enumerate(cand))
            if not dominated and mgcd(heads[i], hm) != 0:
                keep.append((la, i, k))
        pairs = [(l, i, j) for (l, i, j) in pairs
                 if not (divides(hm, l) and mlcm(heads[i], hm) != l and mlcm(heads[j], hm) != l)]
        pairs.extend(keep)
        for i in range(k):
            if active[i] and divides(hm, heads[i]):
                active[i] = False
        G.append(h)
        heads.append(hm)
        active.append(True)

    def reducers():
        idx = [i for i in range(len(G)) if active[i]]
        return [G[i] for i in idx], [heads[i] for i in idx]

    for p in sorted(polys, key=lambda p: p.lm()):
        h = _reduce(p.terms, *reducers(), ring)
        if h:
            if max(h) == 0:
                return [ring.one()]
            add(h)
    while pairs:
        deadline.check()
        best = min(range(len(pairs)), key=lambda t: (mdeg(pairs[t][0]), pairs[t][0]))
        l, i, j = pairs.pop(best)
        gi, gj = G[i], G[j]
        mi, mj = heads[i], heads[j]
        si, sj = l - mi, l - mj
        s: dict = {}
        for k, v in gi.items():
            if k != mi:
                s[k + si] = v
        for k, v in gj.items():
            if k != mj:
                k2 = k + sj
                nv = s.get(k2, ZERO) - v
                if nv:
                    s[k2] = nv
                else:
                    s.pop(k2, None)
        h = _reduce(s, *reducers(), ring)
        if h:
            if max(h) == 0:
                return [ring.one()]
            if mdeg(max(h)) > limits.gb_max_degree:
                raise LimitExceeded(f"Groebner basis degree cap {limits.gb_max_degree} exceeded", "degree")
            add(h)
            if sum(active) > limits.gb_max_size:
                raise LimitExceeded(f"Groebner basis size cap {limits.gb_max_size} exceeded", "size")
    basis = sorted((G[i] for i in range(len(G)) if active[i]), key=max)
    minimal = []
    for g in basis:
        gm = max(g)
        if not any(divides(max(h), gm) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        gm = max(g)
        tail = {k: v for k, v in g.items() if k != gm}
        tail = _reduce(tail, others, [max(h) for h in others], ring) if tail else {}
        tail[gm] = ONE
        reduced.append(Poly(ring, tail))
    reduced.sort(key=lambda p: p.lm())
    return reduced


def spoly(f: Poly, g: Poly) -> Poly:
    ring = f.ring
    fm, fc = f.lt()
    gm, gc = g.lt()
    l = ring.mlcm(fm, gm)
    return f.mul_term(l - fm, ONE / fc) - g.mul_term(l - gm, ONE / gc)


def reduce_poly(f: Poly, G: Sequence[Poly]) -> Poly:
    gs = [_monic(g.terms) for g in G if g]
    return Poly(f.ring, _reduce(f.terms, gs, [max(g) for g in gs], f.ring))


# -- rational roots ----------------------------------------------------------------

def _divisors(n: int, limit: int = 10 ** 12) -> list[int] | None:
    n = abs(int(n))
    if n > limit:
        return None
    small, large = [], []
    i = 1
    r = int(isqrt(n))
    while i <= r:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Poly, v: int) -> list:
    """Distinct rational roots of a univariate polynomial in variable v."""
    cs = p.coeffs_in(v)
    deg = max(cs)
    coeffs = [cs[k].const_value() if k in cs else ZERO for k in range(deg + 1)]
    roots = []
    low = 0
    while low <= deg and not coeffs[low]:
        low += 1
    if low:
        roots.append(ZERO)
    coeffs = coeffs[low:]
    if len(coeffs) <= 1:
        return roots
    den = 1
    for c in coeffs:
        den = math.lcm(den, int(c.denominator))
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]

    def is_root(q) -> bool:
        acc = ZERO
        for c in reversed(ints):
            acc = acc * q + c
        return acc == 0

    if len(ints) == 2:
        return roots + [mpq(-ints[0], ints[1])]
    ps = _divisors(ints[0])
    qs = _divisors(ints[-1])
    cands = set()
    if ps is not None and qs is not None and len(ps) * len(qs) <= 200000:
        for a in ps:
            for b in qs:
                cands.add(mpq(a, b))
                cands.add(mpq(-a, b))
    else:
        import numpy as np
        from fractions import Fraction
        for z in np.roots([float(c) for c in reversed(ints)]):
            if abs(z.imag) < 1e-6 * max(1.0, abs(z)):
                cands.add(mpq(Fraction(float(z.real)).limit_denominator(10 ** 6)))
    roots += sorted(q for q in cands if is_root(q))
    return roots


# -- nonlinear solver ----------------------------------------------------------------

@dataclass
class _State:
    eqs: list[Poly]
    chain: list[tuple[int, Poly]]
    nonzero: frozenset
    fixed: tuple[int, ...] = ()  # unknowns assigned by the free-variable heuristic


class _Solver:
    def __init__(self, sys: AlgSystem, limits: Limits, deadline: Deadline,
                 reject: Callable[[dict], bool] | None, nonzero: Iterable[int] = ()):
        self.sys = sys
        self.ring = sys.ring
        self.limits = limits
        self.deadline = deadline
        self.reject = reject
        self.results: dict[tuple, Branch] = {}
        self.warnings: list[str] = []
        self.nonzero0 = frozenset(nonzero)
        self.nodes = 0

    def run(self) -> SolutionSet:
        self._solve(_State(list(self.sys.equations), [], self.nonzero0))
        branches = [b for b in self.results.values() if self.sys.satisfied_by(b.values)]
        return SolutionSet(self.sys.unknowns, branches, self.warnings)

    # -- helpers
    def _normalize(self, eqs: list[Poly], nonzero) -> list[Poly] | None:
        ring = self.ring
        out = {}
        for e in eqs:
            if not e:
                continue
            m = e.monomial_content()
            if m:
                exps = ring.unpack(m)
                drop = [e_ if i in nonzero else 0 for i, e_ in enumerate(exps)]
                if any(drop):
                    e = e.div_monomial(ring.pack(drop))
            if e.is_const():
                return None
            e = e.monic()
            out[e] = None
        return sorted(out, key=lambda p: (p.total_degree(), len(p), p.lm()))

    def _substitute(self, st: _State, var: int, expr: Poly) -> _State:
        eqs = [e.subs({var: expr}) if e.has_var(var) else e for e in st.eqs]
        return _State(eqs, st.chain + [(var, expr)], st.nonzero, st.fixed)

    def _finish(self, st: _State) -> bool:
        n = self.ring.nvars
        assigned = {v for v, _ in st.chain}
        free = [i for i in range(n) if i not in assigned]
        ok = False
        for fill in (ZERO, ONE):
            values = {i: (ONE if i in st.nonzero else fill) for i in free}
            for v, expr in reversed(st.chain):
                point = [values.get(i, ZERO) for i in range(n)]
                values[v] = expr.evaluate(point)
            if any(values[i] == 0 for i in st.nonzero):
                continue
            if self.reject is not None and self.reject(values):
                continue
            key = tuple(values[i] for i in range(n))
            if key not in self.results:
                self.results[key] = Branch(values, tuple(sorted(set(free) | set(st.fixed))))
            ok = True
            break
        return ok

    def _branch_values(self, st: _State, var: int, values: Sequence) -> bool:
        found = False
        for val in values:
            child = self._substitute(st, var, self.ring.const(val))
            nz = child.nonzero
            if val == 0 and var in nz:
                continue
            found |= self._solve(child)
        return found

    # -- main recursion
    def _solve(self, st: _State) -> bool:
        self.deadline.check()
        self.nodes += 1
        ring = self.ring
        while True:
            eqs = self._normalize(st.eqs, st.nonzero)
            if eqs is None:
                return False
            st = _State(eqs, st.chain, st.nonzero, st.fixed)
            if not eqs:
                return self._finish(st)
            # linear equations: eliminate one pivot at a time
            lin = [e for e in eqs if e.total_degree() == 1]
            if lin:
                e = lin[0]
                m, c = e.lt()
                var = ring.unpack(m).index(1)
                expr = (e - ring.var(var) * c) * (-ONE / c)
                st = self._substitute(st, var, expr)
                continue
            # univariate equations
            uni = next((e for e in eqs if len(e.variables()) == 1), None)
            if uni is not None:
                var = uni.variables()[0]
                roots = rational_roots(uni, var)
                if not roots:
                    self.warnings.append("IrrationalBranch")
                    return False
                return self._branch_values(st, var, roots)
            # a pure monomial equation: one of its variables vanishes
            mono = [e for e in eqs if len(e) == 1]
            if mono:
                e = min(mono, key=lambda p: len(p.variables()))
                return self._split_vars(st, e.variables(), None)
            # monomial content: u * rest = 0
            for e in eqs:
                mc = e.monomial_content()
                if mc:
                    vars_ = [i for i, k in enumerate(ring.unpack(mc)) if k]
                    return self._split_vars(st, vars_, e.div_monomial(mc))
            # a variable occurring once, linearly with constant coefficient
            elim = self._pure_linear(eqs)
            if elim is not None:
                var, expr = elim
                st = self._substitute(st, var, expr)
                continue
            # factorizable equation
            for e in eqs:
                if len(e) > 40:
                    continue
                _, factors = partial_factor(e)
                if len(factors) > 1:
                    others = [q for q in eqs if q is not e]
                    found = False
                    for f, _ in factors:
                        found |= self._solve(_State(others + [f], st.chain, st.nonzero, st.fixed))
                    return found
            # Groebner basis
            if len(eqs) > 1:
                try:
                    gb = groebner(eqs, self.limits, self.deadline)
                except LimitExceeded as e:
                    if e.kind == "timeout":
                        raise
                    self.warnings.append(str(e))
                    gb = eqs
                if len(gb) == 1 and gb[0].is_const():
                    return False
                gbs = self._normalize(gb, st.nonzero)
                if gbs is None:
                    return False
                if set(gbs) != set(eqs):
                    st = _State(gbs, st.chain, st.nonzero, st.fixed)
                    if any(e.total_degree() == 1 or len(e.variables()) == 1 or len(e) == 1
                           or e.monomial_content() for e in gbs):
                        continue
                    if self._pure_linear(gbs) is not None:
                        continue
            # positive-dimensional: fix the lex-smallest variable heuristically
            present = set()
            for e in st.eqs:
                present.update(e.variables())
            var = max(present)
            for val in (ZERO, ONE):
                if val == 0 and var in st.nonzero:
                    continue
                child = self._substitute(st, var, ring.const(val))
                child.fixed = st.fixed + (var,)
                if self._solve(child):
                    return True
            return False

    def _split_vars(self, st: _State, vars_: list[int], rest: Poly | None) -> bool:
        """Branch: v1 = 0 | v1 != 0, v2 = 0 | ... | all nonzero and rest = 0."""
        found = False
        nz = set(st.nonzero)
        for v in vars_:
            if v in nz:
                continue
            child = self._substitute(_State(st.eqs, st.chain, frozenset(nz), st.fixed), v,
                                     self.ring.zero())
            found |= self._solve(child)
            nz.add(v)
        if rest is not None and not rest.is_const():
            found |= self._solve(_State(st.eqs + [rest], st.chain, frozenset(nz), st.fixed))
        return found

    def _pure_linear(self, eqs: list[Poly]):
        ring = self.ring
        best = None
        for e in eqs:
            for var in e.variables():
                if e.degree(var) != 1:
                    continue
                cs = e.coeffs_in(var)
                c = cs[1]
                if not c.is_const():
                    continue
                rest = cs.get(0, ring.zero())
                if rest.total_degree() > 2:
                    continue
                cost = (len(rest), rest.total_degree())
                if best is None or cost < best[0]:
                    best = (cost, var, rest * (-ONE / c.const_value()))
        if best is None:
            return None
        return best[1], best[2]


def solve_poly(sys: AlgSystem, limits: Limits | None = None, reject: Callable[[dict], bool] | None = None,
               deadline: Deadline | None = None, nonzero: Iterable[int] = ()) -> SolutionSet:
    """All rational solution branches of a polynomial system.

    Linear pivots are eliminated, equations with monomial or content factors
    are split into branches, univariate equations are solved for their rational
    roots, and a lex Groebner basis is computed whenever none of those moves
    apply.  Positive-dimensional components are cut down by fixing free
    unknowns to 0 (or 1).  Every returned branch satisfies every equation.
    """
    limits = limits or Limits()
    deadline = deadline or limits.deadline()
    return _Solver(sys, limits, deadline, reject, nonzero).run()
