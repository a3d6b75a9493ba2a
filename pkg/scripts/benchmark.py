"""Wall-clock timings for the worked examples and a batch of planted equations.

Planted equations come from a random invariant I = (A y' + B)/C, so a pair is
known to exist; the search has to rediscover one.

Usage: python scripts/benchmark.py [n_planted] [timeout]
"""
import random
import sys
import time

from psreduce.errors import LimitExceeded, NothingFound
from psreduce.frontend import parse_ode
from psreduce.limits import Limits
from psreduce.planted import planted_soode
from psreduce.soode import search

WORKED = ["y'' = -y", "y'' = y'*(3*y'*x + y)/(x*y)", "y'' = (x^2*y'^2 + y^2 - 1)/(x^2*y)"]


def timed(ode, limits):
    t = time.perf_counter()
    try:
        res = f"{len(search(ode, limits))} pairs"
    except (NothingFound, LimitExceeded) as e:
        res = type(e).__name__
    return res, time.perf_counter() - t


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    timeout = float(sys.argv[2]) if len(sys.argv) > 2 else 30.0
    for text in WORKED:
        res, dt = timed(parse_ode(text), Limits(max_degree=2, timeout=timeout))
        print(f"{dt:7.2f} s  {res:<16} {text}")
    total, solved = 0.0, 0
    for i in range(n):
        p = planted_soode(random.Random(f"planted:{i}"))
        res, dt = timed(p.ode, Limits(timeout=timeout))
        total += dt
        solved += res.endswith("pairs")
        print(f"{dt:7.2f} s  {res:<16} {p.text}")
    print(f"planted: {solved}/{n} solved, {total:.1f} s total")


if __name__ == "__main__":
    main()
