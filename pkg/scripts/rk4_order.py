"""Drift of a known invariant under RK4 as the step shrinks; expect roughly h^4.

Usage: python scripts/rk4_order.py [T]
"""
import math
import sys

from psreduce.frontend import parse_invariant, parse_ode
from psreduce.verify import integrate_trajectory

CASES = [
    ("y'' = -y", "y^2 + y'^2", (0.0, 1.0, 0.0)),
    ("y'' = y'*(3*y'*x + y)/(x*y)", "y'/(x*y^3)", (1.0, 1.0, 0.2)),
    ("y'' = (x^2*y'^2 + y^2 - 1)/(x^2*y)", "(2*x*y*y' + y^2 + x^2*y'^2 - 1)/(2*x^2*y^2)", (1.0, 0.5, 0.1)),
]


def main() -> None:
    T = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    steps = [0.1, 0.05, 0.025, 0.0125]
    for ode_text, inv_text, start in CASES:
        ode, inv = parse_ode(ode_text), parse_invariant(inv_text)
        print(ode_text)
        prev = None
        for h in steps:
            # a huge budget so the error estimate never truncates the run
            rep = integrate_trajectory(inv, ode, start, h, T, error_budget=math.inf)
            rate = f"{math.log2(prev / rep.max_drift):5.2f}" if prev and rep.max_drift else "   - "
            print(f"  h = {h:<7} drift {rep.max_drift:.3e}  observed order {rate}"
                  + (f"  ({rep.aborted})" if rep.aborted else ""))
            prev = rep.max_drift
        print()


if __name__ == "__main__":
    main()
