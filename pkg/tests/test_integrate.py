from gmpy2 import mpq
from hypothesis import assume, given, strategies as st

import pytest

from psreduce.errors import UnsupportedIntegral
from psreduce.frontend import parse_invariant, parse_poly, parse_rational as Q, render
from psreduce.gcd import gcd
from psreduce.integrate import hermite_reduce, integrate_rational
from psreduce.poly import X, XYZ, Y, YP
from psreduce.ratfun import RatFun

from conftest import nonzero_polys, polys, ratfuns


@pytest.mark.parametrize("f, v, expected", [
    ("y", Y, "y^2/2"),
    ("3*x^2*y + 1", X, "x^3*y + x"),
    ("1/x", X, "log(x)"),
    ("1/(1 + x^2)", X, "atan(x)"),
    ("1/(x^2 - 1)", X, "log(x - 1)/2 - log(x + 1)/2"),
    ("y/(x*y + 1)", X, "log(x*y + 1)"),
    ("-2/(x^2*y^2)", Y, "2/(x^2*y)"),
    ("(2*x + 1)/(x^2 + x + 1)^2", X, "-1/(x^2 + x + 1)"),
    ("y'/(y'^2 + 1)", YP, "log(y'^2 + 1)/2"),
    ("y/x^3 + 1/(x^2 + 1)", X, "-y/(2*x^2) + atan(x)"),
    ("1/x + 1/(x^2 + 1) + 2*x/(x^2 + 4)", X, "log(x) + atan(x) + log(x^2 + 4)"),
])
def test_known_antiderivatives(f, v, expected):
    F = integrate_rational(Q(f), v)
    assert F.diff(v) == Q(f)
    G = parse_invariant(expected)
    # antiderivatives agree up to a constant in v
    assert not (F - G).diff(v)


def test_result_is_exact_for_quadratic_atan():
    F = integrate_rational(Q("1/(x^2 + 2*x + 5)"), X)
    assert F.atans and F.diff(X) == Q("1/(x^2 + 2*x + 5)")


@pytest.mark.parametrize("f, v", [
    ("y/x^3 + 1/(x^2 - 2)", X),   # residues +-1/sqrt(2)
    ("1/(x^2 + y^2)", X),         # atan(x/y)/y needs a non-constant coefficient
    ("1/(x^3 + x + 1)", X),       # irreducible cubic
    ("-2/(x^2*y)", Y),            # log(y) with coefficient -2/x^2
])
def test_unsupported_reports_partial_and_remainder(f, v):
    with pytest.raises(UnsupportedIntegral) as err:
        integrate_rational(Q(f), v)
    e = err.value
    assert e.remainder is not None
    assert e.partial.diff(v) + e.remainder == Q(f)


def test_hermite_reduce_example():
    f = Q("1/x^3 + 1/(x + 1)")
    g, h = hermite_reduce(f, X)
    assert g.diff(X) + h == f
    assert g == Q("-1/(2*x^2)")


def test_constant_in_variable():
    F = integrate_rational(Q("y/(y + 1)"), X)
    assert F.z0 == Q("x*y/(y + 1)")


# -- properties ---------------------------------------------------------------------

@given(ratfuns(max_deg=2, max_terms=3), st.sampled_from([X, Y, YP]))
def test_derivative_integrates_back(g, v):
    """Integrating dg/dv returns g up to a v-free term; only Hermite reduction is needed."""
    F = integrate_rational(g.diff(v), v)
    assert F.is_rational()
    assert F.diff(v) == g.diff(v)
    assert not (F.z0 - g).diff(v)


@given(ratfuns(max_deg=3, max_terms=3), st.sampled_from([X, Y, YP]))
def test_hermite_reduction_identity(f, v):
    g, h = hermite_reduce(f, v)
    assert g.diff(v) + h == f
    if h.den.has_var(v):
        # remaining denominator is squarefree in v
        assert gcd(h.den, h.den.diff(v)).is_const() or not gcd(h.den, h.den.diff(v)).has_var(v)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-4, 4)).filter(lambda t: t[0]),
                min_size=1, max_size=3, unique_by=lambda t: t[1]),
       polys(max_deg=2, max_terms=2, nvars=1))
def test_log_part_with_rational_residues(terms, p):
    """sum c/(x - a) + polynomial: residues are rational, result differentiates back."""
    x = XYZ.var(X)
    f = RatFun(p)
    for c, a in terms:
        f = f + RatFun(XYZ.const(c), x - a)
    F = integrate_rational(f, X)
    assert F.diff(X) == f
