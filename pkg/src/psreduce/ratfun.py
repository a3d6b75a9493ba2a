"""Reduced quotients of polynomials."""
from __future__ import annotations

from gmpy2 import gcd as igcd, lcm as ilcm, mpq

from .gcd import gcd
from .poly import ONE, Poly, Ring, XYZ


def _int_normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    # both integral, gcd of contents 1, positive leading coefficient of den
    ring = num.ring
    if not num:
        return num, ring.one()
    n_l = 1
    for c in num.terms.values():
        n_l = ilcm(n_l, c.denominator)
    d_l = 1
    for c in den.terms.values():
        d_l = ilcm(d_l, c.denominator)
    scale = mpq(ilcm(n_l, d_l))
    g = 0
    for c in num.terms.values():
        g = igcd(g, (c * scale).numerator)
    for c in den.terms.values():
        g = igcd(g, (c * scale).numerator)
    scale = scale / g
    if den.lc() < 0:
        scale = -scale
    if scale == 1:
        return num, den
    return num * scale, den * scale


class RatFun:
    """num/den with gcd(num, den) = 1, integral coefficients, lc(den) > 0."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if den is None:
            den = num.ring.one()
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            if not num:
                den = num.ring.one()
            elif not den.is_const():
                g = gcd(num, den)
                if not g.is_const():
                    num = num.exquo(g)
                    den = den.exquo(g)
            num, den = _int_normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, c, ring: Ring = XYZ) -> "RatFun":
        return cls(ring.const(c))

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_poly(self) -> bool:
        return self.den.is_const()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def as_poly(self) -> Poly:
        if not self.den.is_const():
            raise ValueError("not a polynomial")
        return self.num * (ONE / self.den.const_value())

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self == RatFun(other)
        if isinstance(other, int) or isinstance(other, type(ONE)):
            return self.is_const() and self.const_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFun({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        from .frontend import render
        return render(self)

    def _lift(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        return RatFun(self.ring.const(other))

    def __add__(self, other) -> "RatFun":
        other = self._lift(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        if self.den.is_const() and other.den.is_const():
            return RatFun(self.num * other.den + other.num * self.den, self.den * other.den,
                          reduced=False)
        g = gcd(self.den, other.den)
        if g.is_const():
            return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)
        da = self.den.exquo(g)
        db = other.den.exquo(g)
        return RatFun(self.num * db + other.num * da, da * db * g)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den, reduced=True)

    def __sub__(self, other) -> "RatFun":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RatFun":
        return self._lift(other) - self

    def __mul__(self, other) -> "RatFun":
        other = self._lift(other)
        if not self.num or not other.num:
            return RatFun(self.ring.zero())
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1 = self.num if g1.is_const() else self.num.exquo(g1)
        d2 = other.den if g1.is_const() else other.den.exquo(g1)
        n2 = other.num if g2.is_const() else other.num.exquo(g2)
        d1 = self.den if g2.is_const() else self.den.exquo(g2)
        num, den = _int_normalize(n1 * n2, d1 * d2)
        return RatFun(num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if not self.num:
            raise ZeroDivisionError("division by zero rational function")
        num, den = _int_normalize(self.den, self.num)
        return RatFun(num, den, reduced=True)

    def __truediv__(self, other) -> "RatFun":
        other = self._lift(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFun":
        return self._lift(other) / self

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            return self.inverse() ** (-n)
        num, den = _int_normalize(self.num ** n, self.den ** n)
        return RatFun(num, den, reduced=True)

    def diff(self, i: int) -> "RatFun":
        if self.den.is_const():
            return RatFun(self.num.diff(i), self.den)
        return RatFun(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den ** 2)

    def subs(self, values) -> "RatFun":
        return RatFun(self.num.subs(values), self.den.subs(values))

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def float_fn(self):
        n, d = self.num.float_fn(), self.den.float_fn()
        return lambda *a: n(*a) / d(*a)

    def complexity(self) -> int:
        return len(self.num) + len(self.den)


def as_ratfun(f) -> RatFun:
    if isinstance(f, RatFun):
        return f
    if isinstance(f, Poly):
        return RatFun(f)
    return RatFun.const(f)
