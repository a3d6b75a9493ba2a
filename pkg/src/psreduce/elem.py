"""Invariants of the form z0 + sum c_i log z_i + sum c_j atan(n_j/d_j)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .gcd import gcd, partial_factor
from .poly import ONE, Poly, XYZ
from .ratfun import RatFun, as_ratfun


@dataclass(frozen=True)
class ElemInvariant:
    z0: RatFun = field(default_factory=lambda: RatFun(XYZ.zero()))
    logs: tuple[tuple[object, Poly], ...] = ()
    atans: tuple[tuple[object, Poly, Poly], ...] = ()

    @classmethod
    def rational(cls, f) -> "ElemInvariant":
        return cls(as_ratfun(f))

    def is_rational(self) -> bool:
        return not self.logs and not self.atans

    def diff(self, i: int) -> RatFun:
        """Exact partial derivative; log and atan terms differentiate to rational functions."""
        d = self.z0.diff(i)
        for c, z in self.logs:
            d = d + RatFun(z.diff(i) * c, z)
        for c, n, m in self.atans:
            # d/dv atan(n/m) = (n_v m - n m_v) / (n^2 + m^2)
            d = d + RatFun((n.diff(i) * m - n * m.diff(i)) * c, n * n + m * m)
        return d

    def gradient(self) -> tuple[RatFun, RatFun, RatFun]:
        return self.diff(0), self.diff(1), self.diff(2)

    def __mul__(self, c) -> "ElemInvariant":
        c = mpq(c)
        return ElemInvariant(self.z0 * c,
                             tuple((a * c, z) for a, z in self.logs),
                             tuple((a * c, n, m) for a, n, m in self.atans))

    __rmul__ = __mul__

    def __add__(self, other) -> "ElemInvariant":
        if not isinstance(other, ElemInvariant):
            return ElemInvariant(self.z0 + as_ratfun(other), self.logs, self.atans)
        return ElemInvariant(self.z0 + other.z0, self.logs + other.logs,
                             self.atans + other.atans).canonical()

    def __neg__(self) -> "ElemInvariant":
        return self * -1

    def __sub__(self, other) -> "ElemInvariant":
        return self + (-other if isinstance(other, ElemInvariant) else -as_ratfun(other))

    def canonical(self) -> "ElemInvariant":
        """Merge log terms over a coprime basis of their arguments; drop zero coefficients."""
        acc: dict[Poly, object] = {}
        for c, z in self.logs:
            if not c:
                continue
            _, factors = partial_factor(z)
            for f, k in factors:
                acc[f] = acc.get(f, 0) + c * k
        # arguments sharing factors after the first pass
        items = [(f, c) for f, c in acc.items() if c]
        merged = True
        while merged:
            merged = False
            for i in range(len(items)):
                for j in range(i + 1, len(items)):
                    g = gcd(items[i][0], items[j][0])
                    if not g.is_const():
                        (f1, c1), (f2, c2) = items[i], items[j]
                        rest = [t for k, t in enumerate(items) if k not in (i, j)]
                        new = [(g, c1 + c2), (f1.exquo(g), c1), (f2.exquo(g), c2)]
                        items = rest + [(p.primitive(), c) for p, c in new if not p.is_const() and c]
                        merged = True
                        break
                if merged:
                    break
            table: dict[Poly, object] = {}
            for f, c in items:
                table[f] = table.get(f, 0) + c
            items = [(f, c) for f, c in table.items() if c]
        logs = tuple(sorted(((mpq(c), f) for f, c in items),
                            key=lambda t: (-t[1].lm(), len(t[1]))))
        atans = tuple((mpq(c), n, m) for c, n, m in self.atans if c)
        return ElemInvariant(self.z0, logs, atans)

    def normalized(self) -> "ElemInvariant":
        """Scale so the leading coefficient ratio of z0 (or first log/atan coefficient) is 1."""
        inv = self.canonical()
        if inv.z0:
            s = inv.z0.num.lc() / inv.z0.den.lc()
        elif inv.logs:
            s = inv.logs[0][0]
        elif inv.atans:
            s = inv.atans[0][0]
        else:
            return inv
        return inv * (ONE / s) if s != 1 else inv

    def float_fn(self):
        """Real-valued evaluator; logs use |z| so the result is defined off z = 0."""
        z0 = self.z0.float_fn()
        logs = [(float(c), z.float_fn()) for c, z in self.logs]
        atans = [(float(c), n.float_fn(), m.float_fn()) for c, n, m in self.atans]

        def f(x, y, p):
            v = z0(x, y, p)
            for c, z in logs:
                v += c * math.log(abs(z(x, y, p)))
            for c, n, m in atans:
                v += c * math.atan(n(x, y, p) / m(x, y, p))
            return v
        return f

    def singular_polys(self) -> list[Poly]:
        """Polynomials whose zero sets are singularities of the invariant."""
        out = [self.z0.den] if not self.z0.den.is_const() else []
        out += [z for _, z in self.logs]
        out += [m for _, _, m in self.atans if not m.is_const()]
        return out

    def __str__(self) -> str:
        from .frontend import render
        return render(self)
