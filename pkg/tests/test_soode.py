from gmpy2 import mpq
from hypothesis import assume, given, settings, strategies as st

import pytest

from psreduce.errors import NothingFound
from psreduce.frontend import parse_ode, parse_rational as Q
from psreduce.limits import Limits
from psreduce.poly import XYZ
from psreduce.ratfun import RatFun
from psreduce.soode import (SRPair, check_DRS, degree_schedule, find_R, find_S, is_verified,
                            normalize_R, residual_R, residual_RS, residual_S, residuals, search)

from conftest import EX1, EX2, EX3

EX3_S = Q("(-x^2*y'^2 - x*y*y' + 1)/(x*y^2 + x^2*y*y')")
EX3_R = Q("(y + x*y')/(x*y^2)")


def _pair(ode, S, R):
    return SRPair(Q(S) if isinstance(S, str) else S, Q(R) if isinstance(R, str) else R, ode.phi)


def _proportional(a: RatFun, b: RatFun) -> bool:
    return bool(a) and bool(b) and (a / b).is_const()


@pytest.mark.parametrize("text, S, R", [
    (EX1, "y/y'", "y'"),
    (EX2, "-3*y'/y", "1/(x*y^3)"),
    (EX3, EX3_S, EX3_R),
    ("y'' = y'^2/y", "-y'/y", "1/y"),
])
def test_known_pairs_have_zero_residuals(text, S, R):
    pair = _pair(parse_ode(text), S, R)
    assert all(not r for r in residuals(pair))
    assert is_verified(pair) and check_DRS(pair)


def test_corrupted_pair_fails():
    ode = parse_ode(EX1)
    bad = _pair(ode, "y/y'", "y")
    assert not check_DRS(bad)
    assert not is_verified(bad)


def test_residual_S_example_one():
    ode = parse_ode(EX1)
    assert not residual_S(Q("y/y'"), ode.phi)
    assert residual_S(Q("y'/y"), ode.phi)


def test_scaling_R_preserves_residuals():
    ode = parse_ode(EX2)
    S = Q("-3*y'/y")
    for c in (mpq(2), mpq(-1, 3)):
        R = Q("1/(x*y^3)") * c
        assert not residual_R(R, S, ode.phi) and not residual_RS(R, S)
        assert normalize_R(R) == normalize_R(Q("1/(x*y^3)"))


def test_find_S_example_one():
    assert Q("y/y'") in find_S(parse_ode(EX1), 1)


def test_find_S_example_two():
    assert Q("-3*y'/y") in find_S(parse_ode(EX2), 1)


def test_find_S_results_are_verified():
    ode = parse_ode(EX2)
    for S in find_S(ode, 1):
        assert not residual_S(S, ode.phi)


@pytest.mark.slow
def test_find_S_example_three():
    assert EX3_S in find_S(parse_ode(EX3), 2)


def test_find_R_examples():
    assert any(_proportional(R, Q("y'")) for R in find_R(parse_ode(EX1), Q("y/y'"), 1))
    Rs = find_R(parse_ode(EX2), Q("-3*y'/y"), 2)
    assert any(_proportional(R, Q("1/(x*y^3)")) for R in Rs)


@pytest.mark.slow
def test_find_R_example_three():
    Rs = find_R(parse_ode(EX3), EX3_S, 2)
    assert any(_proportional(R, EX3_R) for R in Rs)


def test_search_example_one_at_degree_one():
    pairs = search(parse_ode(EX1), Limits(max_degree=1, s_degree=1, r_degree=1))
    assert pairs
    assert any(p.S == Q("y/y'") and _proportional(p.R, Q("y'")) for p in pairs)
    for p in pairs:
        assert is_verified(p) and check_DRS(p)
        assert p.strategy in ("darboux", "ansatz")


def test_search_is_ranked_and_deterministic():
    ode = parse_ode(EX2)
    a, b = search(ode), search(ode)
    assert [(p.S, p.R) for p in a] == [(p.S, p.R) for p in b]
    keys = [p.complexity() for p in a]
    assert keys == sorted(keys)


def test_search_nothing_found():
    with pytest.raises(NothingFound):
        search(parse_ode("y'' = x*y"), Limits(max_degree=1, s_degree=1, r_degree=1))


def test_degree_schedule():
    assert degree_schedule(Limits(s_degree=2, r_degree=2, max_degree=4)) == [(1, 2), (2, 2), (2, 3), (2, 4)]
    assert degree_schedule(Limits(s_degree=1, r_degree=1, max_degree=1)) == [(1, 1)]


def test_limits_validation():
    with pytest.raises(ValueError):
        Limits(s_degree=5, max_degree=4)
    with pytest.raises(ValueError):
        Limits(r_degree=0)


@given(st.sampled_from([(EX1, "y/y'"), (EX2, "-3*y'/y"), (EX3, str(EX3_S))]),
       st.integers(0, 40), st.integers(-3, 3).filter(bool))
@settings(max_examples=40)
def test_perturbed_S_is_rejected(case, which, delta):
    """Changing one coefficient of a valid S leaves a nonzero residual."""
    text, s = case
    ode = parse_ode(text)
    S = Q(s) if isinstance(s, str) else s
    terms = list(S.num)
    exps, c = terms[which % len(terms)]
    num = S.num + XYZ.monomial(exps, mpq(delta))
    bad = RatFun(num, S.den)
    # -y'/y is a second genuine solution for the second example
    assume(bad != Q("-y'/y"))
    assert residual_S(bad, ode.phi)


def test_all_degrees_keeps_pairs_when_deeper_levels_time_out(ex1):
    # level 2 for y'' = -y does not finish in 3 s; level 1 pairs survive
    pairs = search(ex1, Limits(max_degree=2, all_degrees=True, timeout=3))
    assert any(p.S == Q("y/y'") for p in pairs)
    assert all(is_verified(p) for p in pairs)
