"""Run the three worked examples end to end and print pairs, invariant and checks."""
import sys

from psreduce.frontend import render
from psreduce.limits import Limits
from psreduce.pipeline import NumericSettings, run_reduce

EXAMPLES = [
    ("y'' = -y", 1),
    ("y'' = y'*(3*y'*x + y)/(x*y)", 2),
    ("y'' = (x^2*y'^2 + y^2 - 1)/(x^2*y)", 2),
]


def main() -> int:
    status = 0
    for text, deg in EXAMPLES:
        rep = run_reduce(text, Limits(max_degree=deg, s_degree=deg, r_degree=deg), NumericSettings())
        print(text)
        for p in rep.pairs:
            print(f"  S = {render(p.S)}   R = {render(p.R)}   ({p.strategy})")
        print(f"  I = {render(rep.invariant) if rep.invariant else '-'}")
        if rep.reduced is not None:
            for line in rep.reduced.explicit():
                print(f"  {line}")
        drift = rep.numeric_max_drift
        print(f"  symbolic {rep.symbolic}, drift {drift if drift is None else f'{drift:.1e}'}, "
              f"{sum(rep.timing_ms.values()) / 1000:.2f} s\n")
        status |= rep.exit_code
    return status


if __name__ == "__main__":
    sys.exit(main())
