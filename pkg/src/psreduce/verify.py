"""Independent checks of invariants: exact D[I] = 0, numeric drift, and equivalence."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .elem import ElemInvariant
from .frontend import FOODE, SOODE
from .poly import XYZ, X, Y, YP
from .ratfun import RatFun

SAMPLE_BOX = 2.0
REJECT_TOL = 1e-3
ABORT_TOL = 1e-6
BLOWUP = 1e8
ERROR_BUDGET = 1e-8


def total_derivative(inv: ElemInvariant, ode: SOODE | FOODE) -> RatFun:
    """D[I] along the ODE; log and atan terms differentiate exactly."""
    gx, gy, gp = inv.gradient()
    phi = ode.phi
    if isinstance(ode, FOODE):
        return gx + phi * gy
    return gx + RatFun(XYZ.var(YP)) * gy + phi * gp


def verify_symbolic(inv: ElemInvariant, ode: SOODE | FOODE) -> bool:
    """True iff D[I] is exactly the zero rational function."""
    return not total_derivative(inv, ode)


@dataclass
class TrajectoryReport:
    x0: float
    y0: float
    yp0: float
    h: float
    T: float
    samples: list[float] = field(default_factory=list)
    max_drift: float = 0.0
    steps: int = 0
    aborted: str | None = None  # reason when the run approached a singularity

    @property
    def complete(self) -> bool:
        return self.aborted is None


def _near_zero(fns, x, y, p) -> bool:
    return any(abs(f(x, y, p)) < ABORT_TOL for f in fns)


def _initial_conditions(ode, inv: ElemInvariant, rng: random.Random):
    guards = [ode.N.float_fn()] + [q.float_fn() for q in inv.singular_polys()]
    for _ in range(10000):
        x, y, p = (rng.uniform(-SAMPLE_BOX, SAMPLE_BOX) for _ in range(3))
        if isinstance(ode, FOODE):
            p = 0.0
        if all(abs(g(x, y, p)) > REJECT_TOL for g in guards):
            return x, y, p
    raise RuntimeError("could not sample a regular initial condition")


class _ContinuousEvaluator:
    """Evaluates I along a trajectory, unwrapping the pi jumps of atan terms."""

    def __init__(self, inv: ElemInvariant):
        self.z0 = inv.z0.float_fn()
        self.logs = [(float(c), z.float_fn()) for c, z in inv.logs]
        self.atans = [(float(c), n.float_fn(), m.float_fn()) for c, n, m in inv.atans]
        self.prev: list[float | None] = [None] * len(self.atans)

    def __call__(self, x: float, y: float, p: float, commit: bool = True) -> float:
        v = self.z0(x, y, p)
        for c, z in self.logs:
            v += c * math.log(abs(z(x, y, p)))
        for k, (c, n, m) in enumerate(self.atans):
            a = math.atan(n(x, y, p) / m(x, y, p))
            last = self.prev[k]
            if last is not None:
                a += math.pi * round((last - a) / math.pi)
            if commit:
                self.prev[k] = a
            v += c * a
        return v


def _rk4_step(f, x: float, u: tuple, h: float) -> tuple:
    k1 = f(x, u)
    k2 = f(x + h / 2, tuple(a + h / 2 * b for a, b in zip(u, k1)))
    k3 = f(x + h / 2, tuple(a + h / 2 * b for a, b in zip(u, k2)))
    k4 = f(x + h, tuple(a + h * b for a, b in zip(u, k3)))
    return tuple(a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
                 for a, b1, b2, b3, b4 in zip(u, k1, k2, k3, k4))


def integrate_trajectory(inv: ElemInvariant, ode: SOODE | FOODE, start: Sequence[float],
                         h: float = 1e-4, T: float = 1.0, keep: int = 101,
                         error_budget: float = ERROR_BUDGET) -> TrajectoryReport:
    """Classic RK4 with fixed step h in x, tracking I along the solution.

    Each step is also redone as two half steps, and the difference of I at the
    two results estimates the integration error in I.  Once the accumulated
    estimate exceeds error_budget (relative to max(1, |I(0)|)) the integrator
    can no longer resolve drift, which happens next to movable singularities,
    and the report is truncated there.
    """
    x, y, p = (float(v) for v in start)
    M, N = ode.M.float_fn(), ode.N.float_fn()
    I = _ContinuousEvaluator(inv)
    guards = [ode.N.float_fn()] + [q.float_fn() for q in inv.singular_polys()]
    if isinstance(ode, SOODE):
        f = lambda x, u: (u[1], M(x, u[0], u[1]) / N(x, u[0], u[1]))
        u = (y, p)
    else:
        f = lambda x, u: (M(x, u[0], 0.0) / N(x, u[0], 0.0),)
        u = (y,)
    rep = TrajectoryReport(x, y, p, h, T)
    n = int(round(T / h))
    stride = max(1, n // (keep - 1))
    i0 = I(x, y, p)
    scale = max(1.0, abs(i0))
    rep.samples.append(i0)
    spent = 0.0
    for k in range(1, n + 1):
        try:
            full = _rk4_step(f, x, u, h)
            half = _rk4_step(f, x + h / 2, _rk4_step(f, x, u, h / 2), h / 2)
        except (ZeroDivisionError, OverflowError, ValueError):
            rep.aborted = "singular right-hand side"
            break
        if not all(math.isfinite(a) and abs(a) < BLOWUP for a in full + half):
            rep.aborted = "solution blew up"
            break
        u = full
        x += h
        y = u[0]
        p = u[1] if len(u) > 1 else 0.0
        if _near_zero(guards, x, y, p):
            rep.aborted = "approached a singular set"
            break
        try:
            val = I(x, y, p)
            alt = I(x, half[0], half[1] if len(half) > 1 else 0.0, commit=False)
        except (ZeroDivisionError, ValueError):
            rep.aborted = "invariant undefined"
            break
        spent += abs(val - alt) / scale
        if spent > error_budget:
            rep.aborted = "integration error budget exhausted near a singularity"
            break
        rep.max_drift = max(rep.max_drift, abs(val - i0) / scale)
        rep.steps = k
        if k % stride == 0:
            rep.samples.append(val)
    return rep


def verify_numeric(inv: ElemInvariant, ode: SOODE | FOODE, n_trajectories: int = 10,
                   h: float = 1e-4, T: float = 1.0, seed: int = 0) -> list[TrajectoryReport]:
    """Drift of I along RK4 trajectories from seeded random initial conditions in [-2, 2]^3."""
    out = []
    for i in range(n_trajectories):
        rng = random.Random(f"{seed}:{i}")
        start = _initial_conditions(ode, inv, rng)
        out.append(integrate_trajectory(inv, ode, start, h, T))
    return out


def max_drift(reports: Sequence[TrajectoryReport]) -> float:
    return max((r.max_drift for r in reports), default=0.0)


def equivalent(inv1: ElemInvariant, inv2: ElemInvariant) -> bool:
    """Gradients proportional as rational triples (functional dependence)."""
    g1, g2 = inv1.gradient(), inv2.gradient()
    z1, z2 = not any(g1), not any(g2)
    if z1 or z2:
        return z1 and z2
    for i, j in ((X, Y), (X, YP), (Y, YP)):
        if g1[i] * g2[j] - g1[j] * g2[i]:
            return False
    return True
