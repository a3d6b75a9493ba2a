"""Reduction of rational second-order ODEs y'' = M/N to first-order ODEs.

A pair (S, R) of rational functions satisfying three compatibility equations
gives a closed 1-form whose potential I(x, y, y') is constant on solutions;
I = C1 is then the reduced first-order equation.
"""
from .elem import ElemInvariant
from .errors import (LimitExceeded, NoElementaryFactorAtThisDegree, NothingFound, ParseError,
                     PSError, UnsupportedIntegral)
from .foode import solve_first_order
from .frontend import FOODE, SOODE, parse_invariant, parse_ode, parse_poly, parse_rational, render
from .invariant import build_invariant, reduce
from .limits import Limits
from .pipeline import run_reduce, run_solve1
from .poly import XYZ, Poly
from .ratfun import RatFun
from .soode import SRPair, find_R, find_S, search
from .verify import equivalent, verify_numeric, verify_symbolic

__version__ = "0.1.0"

__all__ = [
    "ElemInvariant", "FOODE", "LimitExceeded", "Limits", "NoElementaryFactorAtThisDegree",
    "NothingFound", "PSError", "ParseError", "Poly", "RatFun", "SOODE", "SRPair",
    "UnsupportedIntegral", "XYZ", "build_invariant", "equivalent", "find_R", "find_S",
    "parse_invariant", "parse_ode", "parse_poly", "parse_rational", "reduce", "render",
    "run_reduce", "run_solve1", "search", "solve_first_order", "verify_numeric", "verify_symbolic",
]
