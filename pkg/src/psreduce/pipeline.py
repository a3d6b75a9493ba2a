"""End-to-end runs shared by the command line and the test-suite."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

from .elem import ElemInvariant
from .errors import LimitExceeded, NoElementaryFactorAtThisDegree, NothingFound, PSError, UnsupportedIntegral
from .foode import solve_first_order
from .frontend import FOODE, SOODE, parse_ode, render
from .invariant import ReducedODE, build_invariant, reduce
from .limits import Limits
from .soode import SRPair, search
from .verify import max_drift, verify_numeric, verify_symbolic

OK, NOT_FOUND, ERROR = "ok", "nothing-found", "error"
EXIT_CODES = {OK: 0, ERROR: 1, NOT_FOUND: 2}


@dataclass
class NumericSettings:
    trajectories: int = 10
    h: float = 1e-4
    T: float = 1.0
    seed: int = 0


@dataclass
class SolveReport:
    ode: str
    order: int = 2
    M: str = ""
    N: str = ""
    status: str = ERROR
    message: str = ""
    pairs: list[SRPair] = field(default_factory=list)
    chosen: int | None = None
    invariant: ElemInvariant | None = None
    reduced: ReducedODE | None = None
    integrating_factor: str | None = None
    darboux: list[tuple[str, str]] = field(default_factory=list)
    symbolic: bool = False
    numeric_max_drift: float | None = None
    timing_ms: dict[str, float] = field(default_factory=dict)
    limits: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        if self.status == OK and not self.symbolic:
            return EXIT_CODES[ERROR]
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        inv = None
        if self.invariant is not None:
            inv = {
                "z0": render(self.invariant.z0),
                "logs": [{"c": render(c), "z": render(z)} for c, z in self.invariant.logs],
                "atans": [{"c": render(c), "num": render(n), "den": render(m)}
                          for c, n, m in self.invariant.atans],
                "text": render(self.invariant),
            }
        reduced = None
        if self.reduced is not None:
            reduced = {"relation": self.reduced.relation(), "explicit": self.reduced.explicit()}
        return {
            "ode": self.ode,
            "order": self.order,
            "M": self.M,
            "N": self.N,
            "status": self.status,
            "message": self.message,
            "pairs": [{"S": render(p.S), "R": render(p.R), "degree": p.degree, "strategy": p.strategy}
                      for p in self.pairs],
            "chosen": self.chosen,
            "integrating_factor": self.integrating_factor,
            "darboux": [{"f": f, "cofactor": g} for f, g in self.darboux],
            "invariant": inv,
            "reduced": reduced,
            "checks": {"symbolic": self.symbolic, "numeric_max_drift": self.numeric_max_drift},
            "timing_ms": {k: round(v, 3) for k, v in self.timing_ms.items()},
            "limits": self.limits,
        }


@contextmanager
def _timed(report: SolveReport, stage: str):
    t = time.perf_counter()
    try:
        yield
    finally:
        report.timing_ms[stage] = (time.perf_counter() - t) * 1000


def _numeric(report: SolveReport, inv: ElemInvariant, ode, numeric: NumericSettings) -> None:
    if numeric.trajectories > 0:
        reps = verify_numeric(inv, ode, numeric.trajectories, numeric.h, numeric.T, numeric.seed)
        report.numeric_max_drift = max_drift(reps)


def run_reduce(text: str, limits: Limits | None = None,
               numeric: NumericSettings | None = None) -> SolveReport:
    """parse -> (S, R) search -> invariant -> symbolic and numeric checks."""
    limits = limits or Limits()
    numeric = numeric or NumericSettings()
    report = SolveReport(text, limits=asdict(limits) | {"stage_timeout": limits.stage_timeout})
    try:
        with _timed(report, "parse"):
            ode = parse_ode(text)
        if not isinstance(ode, SOODE):
            raise PSError("reduce expects a second-order equation y'' = ...")
        report.M, report.N = render(ode.M), render(ode.N)
        with _timed(report, "search"):
            report.pairs = search(ode, limits)
        failures = []
        with _timed(report, "invariant"):
            for i, pair in enumerate(report.pairs):
                try:
                    inv = build_invariant(pair)
                except UnsupportedIntegral as e:
                    failures.append(str(e))
                    continue
                if verify_symbolic(inv, ode):
                    report.chosen, report.invariant = i, inv
                    break
                failures.append("invariant failed the symbolic check")
        if report.invariant is None:
            raise PSError("no pair produced a verified invariant: " + "; ".join(failures))
        report.symbolic = True
        report.reduced = reduce(ode, report.invariant)
        with _timed(report, "numeric"):
            _numeric(report, report.invariant, ode, numeric)
        report.status = OK
    except (NothingFound, LimitExceeded) as e:
        report.status, report.message = NOT_FOUND, f"{type(e).__name__}: {e}"
    except PSError as e:
        report.status, report.message = ERROR, f"{type(e).__name__}: {e}"
    return report


def run_solve1(text: str, degree: int = 2, limits: Limits | None = None,
               numeric: NumericSettings | None = None) -> SolveReport:
    """Darboux polynomials -> integrating factor -> first integral for y' = M/N."""
    limits = limits or Limits()
    numeric = numeric or NumericSettings()
    report = SolveReport(text, order=1, limits={"degree": degree, "stage_timeout": limits.stage_timeout})
    try:
        with _timed(report, "parse"):
            ode = parse_ode(text)
        if not isinstance(ode, FOODE):
            raise PSError("solve1 expects a first-order equation y' = ...")
        report.M, report.N = render(ode.M), render(ode.N)
        with _timed(report, "search"):
            darb, R, W = solve_first_order(ode, degree, limits)
        report.darboux = [(render(d.f), render(d.cofactor)) for d in darb]
        report.integrating_factor = str(R)
        report.invariant = W
        report.symbolic = verify_symbolic(W, ode) and not R.exactness_residual(ode)
        with _timed(report, "numeric"):
            _numeric(report, W, ode, numeric)
        report.status = OK
    except (NoElementaryFactorAtThisDegree, LimitExceeded) as e:
        report.status, report.message = NOT_FOUND, f"{type(e).__name__}: {e}"
    except PSError as e:
        report.status, report.message = ERROR, f"{type(e).__name__}: {e}"
    return report
