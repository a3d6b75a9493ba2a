from gmpy2 import mpq
from hypothesis import given

import pytest

from psreduce.errors import ParseError, UnsupportedExpression
from psreduce.frontend import (FOODE, SOODE, parse_invariant, parse_ode, parse_poly, parse_rational,
                               render, render_ode)
from psreduce.gcd import gcd

from conftest import EX1, EX2, EX3, polys, ratfuns


@pytest.mark.parametrize("text, M, N", [
    (EX1, "-y", "1"),
    (EX2, "3*x*y'^2 + y*y'", "x*y"),
    (EX3, "x^2*y'^2 + y^2 - 1", "x^2*y"),
    ("y'' = 0.5*y1", "y'", "2"),
    ("y'' = (x^2 - 1)/(x - 1)", "x + 1", "1"),
    ("y'' = x^-1", "1", "x"),
])
def test_parse_canonical_pairs(text, M, N):
    ode = parse_ode(text)
    assert isinstance(ode, SOODE)
    assert ode.M == parse_poly(M) and ode.N == parse_poly(N)
    assert gcd(ode.M, ode.N).is_const()
    assert ode.N.lc() > 0


def test_first_order():
    ode = parse_ode("y' = y/x")
    assert isinstance(ode, FOODE)
    assert (ode.M, ode.N) == (parse_poly("y"), parse_poly("x"))


def test_y1_and_yprime_are_the_same_symbol():
    assert parse_ode("y'' = y1^2/y") == parse_ode("y'' = y'^2/y")


def test_decimals_are_exact():
    assert parse_rational("0.1 + 0.2") == parse_rational("3/10")
    assert parse_poly("1.25*x").lc() == mpq(5, 4)


def test_negative_denominator_moves_sign():
    ode = parse_ode("y'' = (x + 1)/(-3*y^2)")
    assert ode.N.lc() > 0
    assert render(ode.phi) == "(-x - 1)/(3*y^2)"


@pytest.mark.parametrize("text, pos", [
    ("y'' = x +* y", 9),
    ("y'' = 1/0", 7),
    ("y''' = x", 0),
    ("y'' = (y' + ", None),
    ("y'' = x^y", None),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_ode(text)
    assert "position" in str(err.value)
    if pos is not None:
        assert err.value.pos == pos


@pytest.mark.parametrize("text", ["y'' = sin(x)", "y' = y'", "y'' = y''", "y'' = exp(y)"])
def test_unsupported_expressions(text):
    with pytest.raises(UnsupportedExpression):
        parse_ode(text)


def test_invariant_forms():
    inv = parse_invariant("log(x^2 + y^2) + 2*atan(x/y)")
    assert not inv.is_rational()
    assert render(inv) == "log(y^2 + x^2) + 2*atan(x/y)"
    assert parse_invariant(render(inv)) == inv
    assert parse_invariant("y^2 + y'^2").is_rational()


def test_render_ode():
    assert render_ode(parse_ode(EX2)) == "y'' = (3*x*y'^2 + y*y')/(x*y)"


# -- properties ---------------------------------------------------------------------

@given(polys())
def test_poly_render_round_trip(p):
    assert parse_poly(render(p)) == p


@given(ratfuns())
def test_ratfun_render_round_trip(f):
    assert parse_rational(render(f)) == f


@given(ratfuns())
def test_ode_render_round_trip(f):
    ode = parse_ode("y'' = " + render(f))
    assert parse_ode(render_ode(ode)) == ode
