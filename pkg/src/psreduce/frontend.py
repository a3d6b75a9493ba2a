"""Parsing ODE text into canonical (M, N) pairs and rendering symbolic results.

Grammar::

    ode    := ("y''" | "y'") "=" expr
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' int)?
    base   := 'x' | 'y' | "y'" | 'y1' | rational | '(' expr ')' | '-' factor

``y1`` is accepted as a synonym of ``y'``; decimal literals are read exactly.
Invariant strings additionally allow ``log(expr)`` and ``atan(expr)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .errors import ParseError, UnsupportedExpression
from .poly import ONE, Poly, X, XYZ, Y, YP
from .ratfun import RatFun


@dataclass(frozen=True)
class ExprAst:
    kind: str  # number | variable | add | sub | mul | div | pow | neg | call
    children: tuple["ExprAst", ...] = ()
    value: object = None  # rational literal, exponent, or function name
    var: str | None = None
    pos: int = 0


@dataclass(frozen=True)
class SOODE:
    """y'' = M/N with gcd(M, N) = 1 and positive leading coefficient of N."""
    M: Poly
    N: Poly
    text: str = field(default="", compare=False)

    @property
    def phi(self) -> RatFun:
        return RatFun(self.M, self.N, reduced=True)

    order = 2


@dataclass(frozen=True)
class FOODE:
    """y' = M(x, y)/N(x, y), canonicalized like SOODE."""
    M: Poly
    N: Poly
    text: str = field(default="", compare=False)

    @property
    def phi(self) -> RatFun:
        return RatFun(self.M, self.N, reduced=True)

    order = 1


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*'*)
  | (?P<op>\*\*|[-+*/^(),=])
""", re.VERBOSE)

_VARS = {"x": "x", "y": "y", "y'": "y'", "y1": "y'"}
_FUNCS = {"log", "atan"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "op" and tok == "**":
                tok = "^"
            out.append((kind, tok, pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allow_calls: bool):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.allow_calls = allow_calls

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, tok: str):
        t = self.next()
        if t[1] != tok:
            raise ParseError(f"expected {tok!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def expr(self) -> ExprAst:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, pos = self.next()
            rhs = self.term()
            node = ExprAst("add" if op == "+" else "sub", (node, rhs), pos=pos)
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.next()
            rhs = self.factor()
            node = ExprAst("mul" if op == "*" else "div", (node, rhs), pos=pos)
        return node

    def factor(self) -> ExprAst:
        kind, tok, pos = self.peek()
        if tok == "-":
            self.next()
            return ExprAst("neg", (self.factor(),), pos=pos)
        if tok == "+":
            self.next()
            return self.factor()
        node = self.base()
        if self.peek()[1] == "^":
            _, _, ppos = self.next()
            sign = 1
            if self.peek()[1] in ("-", "+"):
                sign = -1 if self.next()[1] == "-" else 1
            k, t, epos = self.next()
            if k != "num" or not t.isdigit():
                raise ParseError("exponent must be an integer literal", epos)
            node = ExprAst("pow", (node,), value=sign * int(t), pos=ppos)
        return node

    def base(self) -> ExprAst:
        kind, tok, pos = self.next()
        if kind == "num":
            return ExprAst("number", value=mpq(Fraction(tok)), pos=pos)
        if kind == "name":
            if tok in _VARS:
                return ExprAst("variable", var=_VARS[tok], pos=pos)
            if self.peek()[1] == "(":
                if not (self.allow_calls and tok in _FUNCS):
                    raise UnsupportedExpression(
                        f"function {tok!r} is not allowed here (rational expressions only)", pos)
                self.next()
                arg = self.expr()
                self.expect(")")
                return ExprAst("call", (arg,), value=tok, pos=pos)
            if tok.startswith("y") and set(tok[1:]) == {"'"}:
                raise UnsupportedExpression(f"{tok!r} may only appear on the left-hand side", pos)
            raise UnsupportedExpression(f"unknown symbol {tok!r}", pos)
        if tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)


def parse_expr_ast(text: str, allow_calls: bool = False) -> ExprAst:
    p = _Parser(text, allow_calls)
    node = p.expr()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {tok!r}", pos)
    return node


_VAR_POLY = {"x": XYZ.var(X), "y": XYZ.var(Y), "y'": XYZ.var(YP)}


def ast_to_ratfun(node: ExprAst) -> RatFun:
    k = node.kind
    if k == "number":
        return RatFun.const(node.value)
    if k == "variable":
        return RatFun(_VAR_POLY[node.var], reduced=True)
    if k == "neg":
        return -ast_to_ratfun(node.children[0])
    if k == "pow":
        return ast_to_ratfun(node.children[0]) ** node.value
    if k == "call":
        raise UnsupportedExpression(f"{node.value}(...) is not a rational expression", node.pos)
    a, b = (ast_to_ratfun(c) for c in node.children)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if not b:
        raise ParseError("division by zero", node.pos)
    return a / b


def parse_rational(text: str) -> RatFun:
    return ast_to_ratfun(parse_expr_ast(text))


def parse_poly(text: str) -> Poly:
    f = parse_rational(text)
    if not f.is_poly():
        raise ParseError("expected a polynomial", 0)
    return f.as_poly()


_LHS = re.compile(r"^\s*(y''|y'|y2|y1)\s*=")


def canonical_pair(f: RatFun) -> tuple[Poly, Poly]:
    """(M, N) with gcd 1, integral coefficients and positive leading coefficient of N."""
    return f.num, f.den


def parse_ode(text: str) -> SOODE | FOODE:
    m = _LHS.match(text)
    if not m:
        raise ParseError("expected \"y'' = ...\" or \"y' = ...\"", 0)
    lhs = m.group(1)
    offset = m.end()
    try:
        f = parse_rational(text[offset:])
    except ParseError as e:
        raise type(e)(e.message, e.pos + offset) from None
    M, N = canonical_pair(f)
    if lhs in ("y''", "y2"):
        return SOODE(M, N, text)
    if M.has_var(YP) or N.has_var(YP):
        raise UnsupportedExpression("a first-order equation cannot contain y' on the right", offset)
    return FOODE(M, N, text)


def canonicalize(ode: SOODE | FOODE) -> SOODE | FOODE:
    M, N = canonical_pair(RatFun(ode.M, ode.N))
    return type(ode)(M, N, ode.text)


# -- rendering -----------------------------------------------------------

def _fmt_q(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _monomial_str(exps, names=("x", "y", "y'")) -> str:
    parts = []
    for e, n in zip(exps, names):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def render_poly(p: Poly, names=None) -> str:
    names = names or p.ring.names
    if not p:
        return "0"
    out = []
    for exps, c in p:
        mono = _monomial_str(exps, names)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _fmt_q(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_q(a)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _is_atom(p: Poly) -> bool:
    # a single term with unit coefficient and at most one variable power
    if len(p) != 1:
        return False
    exps, c = next(iter(p))
    return c == 1 and sum(1 for e in exps if e) <= 1


def render_ratfun(f: RatFun) -> str:
    if f.den.is_const():
        d = f.den.const_value()
        p = f.num
        if d == 1:
            return render_poly(p)
        s = render_poly(p)
        if len(p) > 1:
            s = f"({s})"
        return f"{s}/{_fmt_q(d)}"
    num = render_poly(f.num)
    if len(f.num) > 1:
        num = f"({num})"
    den = render_poly(f.den)
    if not _is_atom(f.den):
        den = f"({den})"
    return f"{num}/{den}"


def render(expr) -> str:
    """Deterministic text for a Poly, RatFun or ElemInvariant (re-parsable)."""
    from .elem import ElemInvariant
    if isinstance(expr, Poly):
        return render_poly(expr)
    if isinstance(expr, RatFun):
        return render_ratfun(expr)
    if isinstance(expr, ElemInvariant):
        parts: list[str] = []
        if expr.z0 or not (expr.logs or expr.atans):
            parts.append(render_ratfun(expr.z0))
        for c, z in expr.logs:
            parts.append(_coeff_call(c, f"log({render_poly(z)})", bool(parts)))
        for c, n, m in expr.atans:
            arg = render_ratfun(RatFun(n, m, reduced=True)) if not m == 1 else render_poly(n)
            parts.append(_coeff_call(c, f"atan({arg})", bool(parts)))
        return "".join(parts)
    if isinstance(expr, (int, type(ONE))):
        return _fmt_q(expr)
    raise TypeError(f"cannot render {type(expr).__name__}")


def _coeff_call(c, call: str, following: bool) -> str:
    neg = c < 0
    a = -c if neg else c
    body = call if a == 1 else f"{_fmt_q(a)}*{call}"
    if following:
        return (" - " if neg else " + ") + body
    return ("-" if neg else "") + body


def render_ode(ode: SOODE | FOODE) -> str:
    lhs = "y''" if isinstance(ode, SOODE) else "y'"
    return f"{lhs} = {render_ratfun(RatFun(ode.M, ode.N, reduced=True))}"


# -- invariants ----------------------------------------------------------

def _elem(node: ExprAst):
    from .elem import ElemInvariant
    k = node.kind
    if not _has_call(node):
        return ElemInvariant(ast_to_ratfun(node))
    if k == "call":
        arg = ast_to_ratfun(node.children[0])
        if not arg:
            raise ParseError(f"{node.value} of zero", node.pos)
        if node.value == "log":
            logs = []
            for poly, sign in ((arg.num, 1), (arg.den, -1)):
                if not poly.is_const():
                    logs.append((mpq(sign), poly))
            return ElemInvariant(RatFun(XYZ.zero()), tuple(logs)).canonical()
        return ElemInvariant(RatFun(XYZ.zero()), (), ((ONE, arg.num, arg.den),))
    if k == "neg":
        return -_elem(node.children[0])
    if k in ("add", "sub"):
        a, b = (_elem(c) for c in node.children)
        return a + b if k == "add" else a - b
    if k == "mul":
        a, b = node.children
        if not _has_call(a):
            a, b = b, a
        if _has_call(b):
            raise UnsupportedExpression("products of log/atan terms are not supported", node.pos)
        c = ast_to_ratfun(b)
        if not c.is_const():
            raise UnsupportedExpression("log/atan coefficients must be rational constants", node.pos)
        return _elem(a) * c.const_value()
    if k == "div":
        a, b = node.children
        if _has_call(b):
            raise UnsupportedExpression("log/atan in a denominator is not supported", node.pos)
        c = ast_to_ratfun(b)
        if not c.is_const() or not c:
            raise UnsupportedExpression("log/atan terms may only be divided by nonzero constants", node.pos)
        return _elem(a) * (ONE / c.const_value())
    raise UnsupportedExpression("unsupported invariant expression", node.pos)


def _has_call(node: ExprAst) -> bool:
    return node.kind == "call" or any(_has_call(c) for c in node.children)


def parse_invariant(text: str):
    """Parse 'z0 + c*log(z) + c*atan(u)' style text into an ElemInvariant."""
    return _elem(parse_expr_ast(text, allow_calls=True))
