"""Sparse multivariate polynomials over exact rationals.

Monomials are packed into a single Python int: one fixed-width field per
variable (variable 0 most significant) and, for graded orders, a leading
total-degree field.  Multiplying monomials is then integer addition and
comparing them is integer comparison.
"""
from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

FIELD_WIDTH = 16
MAX_EXPONENT = (1 << (FIELD_WIDTH - 1)) - 1

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)
MPQ = type(ZERO)


class Ring:
    """Variable names plus the monomial packing layout for one polynomial ring."""

    def __init__(self, names: Sequence[str], order: str = "grlex"):
        if order not in ("grlex", "lex"):
            raise ValueError(f"unknown monomial order {order!r}")
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.order = order
        w = FIELD_WIDTH
        # later variables are more significant: x < y < y' (< C1)
        self.shifts = tuple(w * i for i in range(self.nvars))
        self.graded = order == "grlex"
        nfields = self.nvars + (1 if self.graded else 0)
        self.deg_shift = w * self.nvars
        self.field_mask = (1 << w) - 1
        self.guard = sum(1 << (w * f + w - 1) for f in range(nfields))
        self.gens = tuple(self.pack(tuple(int(i == j) for j in range(self.nvars)))
                          for i in range(self.nvars))
        # multiplying by sum(gens) accumulates every exponent into the top field;
        # partial sums stay below the guard bit, so no field carries into the next
        self._summer = sum(1 << (w * i) for i in range(self.nvars))
        self._top = w * (self.nvars - 1)

    def __repr__(self) -> str:
        return f"Ring({self.names!r}, order={self.order!r})"

    # -- monomials -------------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        m = 0
        total = 0
        for e, s in zip(exps, self.shifts):
            if e < 0:
                raise ValueError("negative exponent")
            if e > MAX_EXPONENT:
                raise OverflowError("exponent too large for packed monomial")
            m |= e << s
            total += e
        if self.graded:
            if total > MAX_EXPONENT:
                raise OverflowError("total degree too large for packed monomial")
            m |= total << self.deg_shift
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        mask = self.field_mask
        return tuple((m >> s) & mask for s in self.shifts)

    def exponent(self, m: int, i: int) -> int:
        return (m >> self.shifts[i]) & self.field_mask

    def mdeg(self, m: int) -> int:
        if self.graded:
            return m >> self.deg_shift
        return ((m * self._summer) >> self._top) & self.field_mask

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial a divides monomial b."""
        g = self.guard
        return ((b | g) - a) & g == g

    def mgcd(self, a: int, b: int) -> int:
        return self.pack(tuple(map(min, self.unpack(a), self.unpack(b))))

    def mlcm(self, a: int, b: int) -> int:
        return self.pack(tuple(map(max, self.unpack(a), self.unpack(b))))

    # -- constructors ----------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {0: ONE})

    def const(self, c) -> "Poly":
        c = _coerce(c)
        return Poly(self, {0: c} if c else {})

    def var(self, i: int) -> "Poly":
        return Poly(self, {self.gens[i]: ONE})

    def monomial(self, exps: Sequence[int], coeff=ONE) -> "Poly":
        coeff = _coerce(coeff)
        return Poly(self, {self.pack(exps): coeff} if coeff else {})

    def from_dict(self, d: Mapping[tuple[int, ...], object]) -> "Poly":
        terms: dict[int, object] = {}
        for exps, c in d.items():
            c = _coerce(c)
            if c:
                m = self.pack(exps)
                c = terms.get(m, ZERO) + c
                if c:
                    terms[m] = c
                else:
                    terms.pop(m, None)
        return Poly(self, terms)


def _coerce(c):
    if isinstance(c, (MPQ, Poly)):
        return c
    return mpq(c)



class Poly:
    """Immutable sparse polynomial: packed monomial -> nonzero coefficient.

    Coefficients are normally ``mpq``; polynomials whose coefficients are
    themselves :class:`Poly` objects (over another ring) are also supported
    for the arithmetic operations, which is how ansatz polynomials with
    unknown coefficients are represented.
    """

    __slots__ = ("ring", "terms", "_hash", "_tdeg")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None
        self._tdeg = None

    # -- basic queries ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and 0 in t)

    def const_value(self):
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], object]]:
        unpack = self.ring.unpack
        for m in sorted(self.terms, reverse=True):
            yield unpack(m), self.terms[m]

    def items(self):
        return self.terms.items()

    def as_dict(self) -> dict[tuple[int, ...], object]:
        unpack = self.ring.unpack
        return {unpack(m): c for m, c in self.terms.items()}

    def lm(self) -> int:
        return max(self.terms)

    def lc(self):
        return self.terms[max(self.terms)] if self.terms else ZERO

    def lt(self) -> tuple[int, object]:
        m = max(self.terms)
        return m, self.terms[m]

    def tc(self):
        """Coefficient of the smallest monomial."""
        return self.terms[min(self.terms)] if self.terms else ZERO

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        if self.ring.graded:
            return max(self.terms) >> self.ring.deg_shift
        if self._tdeg is None:
            mdeg = self.ring.mdeg
            self._tdeg = max(mdeg(m) for m in self.terms)
        return self._tdeg

    def degree(self, i: int) -> int:
        if not self.terms:
            return -1
        s, mask = self.ring.shifts[i], self.ring.field_mask
        return max((m >> s) & mask for m in self.terms)

    def min_degree(self, i: int) -> int:
        if not self.terms:
            return -1
        s, mask = self.ring.shifts[i], self.ring.field_mask
        return min((m >> s) & mask for m in self.terms)

    def variables(self) -> list[int]:
        """Indices of variables that actually occur."""
        acc = 0
        for m in self.terms:
            acc |= m
        return [i for i, s in enumerate(self.ring.shifts)
                if (acc >> s) & self.ring.field_mask]

    def has_var(self, i: int) -> bool:
        s, mask = self.ring.shifts[i], self.ring.field_mask
        return any((m >> s) & mask for m in self.terms)

    # -- equality / hashing ----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, (int, MPQ)):
            return self.is_const() and self.terms.get(0, ZERO) == other
        return NotImplemented

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.ring.names}, {self.as_dict()!r})"

    def __str__(self) -> str:
        from .frontend import render_poly
        return render_poly(self)

    # -- arithmetic --------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                # coefficient-level polynomial used as a scalar
                return Poly(self.ring, {0: other} if other else {})
            return other
        other = _coerce(other)
        return Poly(self.ring, {0: other} if other else {})

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._lift(other)
        if not other.terms:
            return self
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = -c
            else:
                v = v - c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return Poly(self.ring, t)

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly) or other.ring is not self.ring:
            if isinstance(other, Poly):
                c = other
            else:
                c = _coerce(other)
            if not c:
                return Poly(self.ring, {})
            t = {}
            for m, v in self.terms.items():
                v = v * c
                if v:
                    t[m] = v
            return Poly(self.ring, t)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly(self.ring, {})
        if len(a) < len(b):
            a, b = b, a
        if self.total_degree() + other.total_degree() > MAX_EXPONENT:
            raise OverflowError("product degree exceeds packed monomial range")
        t: dict = {}
        get = t.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                v = get(m)
                if v is None:
                    t[m] = ca * cb
                else:
                    t[m] = v + ca * cb
        return Poly(self.ring, {m: c for m, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        if n and self.total_degree() * n > MAX_EXPONENT:
            raise OverflowError("power degree exceeds packed monomial range")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        return self * c

    def mul_term(self, m: int, c) -> "Poly":
        return Poly(self.ring, {k + m: v * c for k, v in self.terms.items()})

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ArithmeticError when other does not divide self."""
        q, r = self.divmod_lt(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides_into(self, other: "Poly") -> bool:
        """True iff self divides other."""
        if not self.terms:
            return not other.terms
        _, r = other.divmod_lt(self, stop_early=True)
        return not r

    def divmod_lt(self, other: "Poly", stop_early: bool = False):
        """Division by leading terms; remainder is zero iff the division is exact."""
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        ring = self.ring
        bm, bc = other.lt()
        if other.is_const():
            return self * (ONE / bc), ring.zero()
        divides = ring.divides
        r = dict(self.terms)
        q: dict = {}
        rest = [(m, c) for m, c in other.terms.items() if m != bm]
        while r:
            m = max(r)
            if not divides(bm, m):
                if stop_early:
                    return None, Poly(ring, r)
                # exact division fails; report the remaining part as remainder
                return Poly(ring, q), Poly(ring, r)
            c = r.pop(m) / bc
            dm = m - bm
            q[dm] = c
            for om, oc in rest:
                k = om + dm
                v = r.get(k, ZERO) - c * oc
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        return Poly(ring, q), Poly(ring, {})

    # -- calculus / substitution ------------------------------------------
    def diff(self, i: int) -> "Poly":
        ring = self.ring
        s, mask = ring.shifts[i], ring.field_mask
        step = ring.gens[i]
        t = {}
        for m, c in self.terms.items():
            e = (m >> s) & mask
            if e:
                t[m - step] = c * e
        return Poly(ring, t)

    def coeffs_in(self, i: int) -> dict[int, "Poly"]:
        """Split as sum_k c_k * v_i^k; returns {k: c_k} with c_k free of v_i."""
        ring = self.ring
        s, mask, step = ring.shifts[i], ring.field_mask, ring.gens[i]
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = (m >> s) & mask
            out.setdefault(e, {})[m - e * step] = c
        return {e: Poly(ring, t) for e, t in out.items()}

    @classmethod
    def from_coeffs_in(cls, ring: Ring, i: int, coeffs: Mapping[int, "Poly"]) -> "Poly":
        step = ring.gens[i]
        t = {}
        for e, p in coeffs.items():
            for m, c in p.terms.items():
                t[m + e * step] = c
        return Poly(ring, t)

    def subs(self, values: Mapping[int, object]) -> "Poly":
        """Substitute scalars or polynomials (same ring) for variables."""
        if not values:
            return self
        ring = self.ring
        mask = ring.field_mask
        items = [(i, ring.shifts[i], ring.gens[i], v) for i, v in values.items()]
        scalar_items = [(s, g, _coerce(v)) for i, s, g, v in items if not isinstance(v, Poly)]
        poly_items = [(s, g, v) for i, s, g, v in items if isinstance(v, Poly)]
        t: dict = {}
        pend: list[tuple[int, object, list]] = []
        for m, c in self.terms.items():
            for s, g, v in scalar_items:
                e = (m >> s) & mask
                if e:
                    c = c * v ** e
                    m -= e * g
            if not c:
                continue
            if poly_items:
                pows = []
                for s, g, v in poly_items:
                    e = (m >> s) & mask
                    if e:
                        pows.append((v, e))
                        m -= e * g
                if pows:
                    pend.append((m, c, pows))
                    continue
            v = t.get(m, ZERO) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        result = Poly(ring, t)
        if pend:
            cache: dict = {}
            acc = result
            for m, c, pows in pend:
                term = Poly(ring, {m: c})
                for v, e in pows:
                    key = (id(v), e)
                    p = cache.get(key)
                    if p is None:
                        p = cache[key] = v ** e
                    term = term * p
                acc = acc + term
            result = acc
        return result

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a full point (one value per variable)."""
        total = None
        unpack = self.ring.unpack
        for m, c in self.terms.items():
            v = c
            for e, p in zip(unpack(m), point):
                if e:
                    v = v * p ** e
            total = v if total is None else total + v
        return ZERO if total is None else total

    def map_coeffs(self, f: Callable) -> "Poly":
        t = {}
        for m, c in self.terms.items():
            v = f(c)
            if v:
                t[m] = v
        return Poly(self.ring, t)

    def to_ring(self, ring: Ring, index_map: Sequence[int] | None = None) -> "Poly":
        """Re-embed into another ring; index_map[i] is the target index of variable i."""
        if index_map is None:
            index_map = range(self.ring.nvars)
        t = {}
        for m, c in self.terms.items():
            exps = [0] * ring.nvars
            for i, e in enumerate(self.ring.unpack(m)):
                if e:
                    exps[index_map[i]] = e
            t[ring.pack(exps)] = c
        return Poly(ring, t)

    def monomial_content(self) -> int:
        """Largest monomial dividing every term (packed)."""
        ring = self.ring
        it = iter(self.terms)
        try:
            g = ring.unpack(next(it))
        except StopIteration:
            return 0
        for m in it:
            g = tuple(map(min, g, ring.unpack(m)))
            if not any(g):
                break
        return ring.pack(g)

    def div_monomial(self, m: int) -> "Poly":
        return Poly(self.ring, {k - m: c for k, c in self.terms.items()})

    def content(self):
        """Positive rational c with self / c integral and primitive."""
        if not self.terms:
            return ZERO
        from gmpy2 import gcd as igcd, lcm as ilcm
        num = 0
        den = 1
        for c in self.terms.values():
            num = igcd(num, c.numerator)
            den = ilcm(den, c.denominator)
        return mpq(num, den)

    def primitive(self) -> "Poly":
        """Integer primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.lc() < 0:
            c = -c
        if c == 1:
            return self
        inv = ONE / c
        return Poly(self.ring, {m: v * inv for m, v in self.terms.items()})

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        lc = self.lc()
        if lc == 1:
            return self
        inv = ONE / lc
        return Poly(self.ring, {m: v * inv for m, v in self.terms.items()})

    def float_fn(self) -> Callable[..., float]:
        """Compile to a plain Python function of the ring variables (floats)."""
        ring = self.ring
        args = [f"v{i}" for i in range(ring.nvars)]
        parts = []
        for m, c in self.terms.items():
            factors = [repr(float(c))]
            for i, e in enumerate(ring.unpack(m)):
                if e == 1:
                    factors.append(args[i])
                elif e:
                    factors.append(f"{args[i]}**{e}")
            parts.append("*".join(factors))
        body = " + ".join(parts) if parts else "0.0"
        return eval(f"lambda {', '.join(args)}: {body}")  # noqa: S307


XYZ = Ring(("x", "y", "y'"))
X, Y, YP = 0, 1, 2


def xyz(d: Mapping[tuple[int, int, int], object]) -> Poly:
    """Shorthand: build a polynomial in x, y, y' from {(i, j, k): coeff}."""
    return XYZ.from_dict(d)


def lin_comb(ring: Ring, pairs: Iterable[tuple[object, Poly]]) -> Poly:
    acc = ring.zero()
    for c, p in pairs:
        acc = acc + p * c
    return acc
