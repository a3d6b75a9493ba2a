import os

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings, strategies as st

from psreduce.frontend import parse_ode
from psreduce.poly import XYZ, Poly
from psreduce.ratfun import RatFun

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EX1 = "y'' = -y"
EX2 = "y'' = y'*(3*y'*x + y)/(x*y)"
EX3 = "y'' = (x^2*y'^2 + y^2 - 1)/(x^2*y)"


def exponents(max_deg: int, nvars: int = 3):
    return st.tuples(*[st.integers(0, max_deg)] * nvars).filter(lambda e: sum(e) <= max_deg)


def polys(max_deg: int = 4, max_terms: int = 5, nvars: int = 3, coeff=st.integers(-5, 5)):
    pad = (0,) * (3 - nvars)
    return st.dictionaries(exponents(max_deg, nvars), coeff, max_size=max_terms).map(
        lambda d: XYZ.from_dict({e + pad: mpq(c) for e, c in d.items()}))


def nonzero_polys(**kw):
    return polys(**kw).filter(bool)


def ratfuns(max_deg: int = 2, max_terms: int = 3):
    return st.tuples(polys(max_deg, max_terms), nonzero_polys(max_deg=max_deg, max_terms=max_terms)).map(
        lambda t: RatFun(t[0], t[1]))


@pytest.fixture(scope="session")
def ex1():
    return parse_ode(EX1)


@pytest.fixture(scope="session")
def ex2():
    return parse_ode(EX2)


@pytest.fixture(scope="session")
def ex3():
    return parse_ode(EX3)
