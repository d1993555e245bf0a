"""Control-barrier-function safety filter on the lateral deviation penalty.

Lateral motion is modeled as a single integrator ``dy/dt = u`` and the
barrier is ``h(y) = P_thr - P(y)``: the safe set is where the penalty stays
below the threshold. The filter solves

    min (u - u_nom)^2   s.t.   a*u >= b,  |u| <= u_max

with ``a = -dP/dy`` and ``b = -alpha0 * h``. It is a scalar QP, so the
solution is a clip onto an interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

PenaltyEval = Callable[[float], float]


@dataclass(frozen=True)
class LateralState:
    lateral: float
    station: float = 0.0
    longitudinal_speed: float = 0.0

    def __post_init__(self):
        if self.longitudinal_speed < 0:
            raise ValueError("longitudinal_speed must be >= 0")


@dataclass(frozen=True)
class ControlInput:
    lateral_velocity_command: float
    infeasible: bool = False


@dataclass(frozen=True)
class BarrierConfig:
    penalty_threshold: float = 0.5
    alpha0: float = 1.0
    u_max: float = 2.0
    derivative_step: float = 1e-4

    def __post_init__(self):
        for name in ("penalty_threshold", "alpha0", "u_max", "derivative_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


def barrier_value(state: LateralState, penalty_eval: PenaltyEval, config: BarrierConfig) -> float:
    """``P_thr - P``; ``-inf`` when the penalty is infinite."""
    p = penalty_eval(state.lateral)
    if math.isinf(p):
        return -math.inf
    return config.penalty_threshold - p


def penalty_slope(y: float, penalty_eval: PenaltyEval, step: float) -> float:
    """Central-difference dP/dy; +-inf when one neighbor is forbidden, nan when both are."""
    hi = penalty_eval(y + step)
    lo = penalty_eval(y - step)
    hi_inf, lo_inf = math.isinf(hi), math.isinf(lo)
    if hi_inf and lo_inf:
        return math.nan
    if hi_inf:
        return math.inf
    if lo_inf:
        return -math.inf
    return (hi - lo) / (2.0 * step)


def solve_cbf_qp(a: float, b: float, u_nom: float, u_max: float) -> tuple[float, bool]:
    """Closest ``u`` to ``u_nom`` with ``a*u >= b`` and ``|u| <= u_max``.

    If the half-line misses the box, returns the box end that maximizes
    ``a*u`` and flags infeasibility.
    """
    lo, hi = -u_max, u_max
    if a > 0:
        lo = max(lo, b / a)
    elif a < 0:
        hi = min(hi, b / a)
    elif b > 0:
        return min(max(u_nom, -u_max), u_max), True
    if lo > hi:
        return (u_max if a > 0 else -u_max), True
    return min(max(u_nom, lo), hi), False


def safe_control(u_nom: ControlInput, state: LateralState, penalty_eval: PenaltyEval,
                 config: BarrierConfig) -> ControlInput:
    u0 = u_nom.lateral_velocity_command
    h = barrier_value(state, penalty_eval, config)
    if math.isinf(h):
        # already inside a forbidden region; nothing meaningful to project onto
        return ControlInput(min(max(u0, -config.u_max), config.u_max), True)
    slope = penalty_slope(state.lateral, penalty_eval, config.derivative_step)
    if math.isnan(slope):
        return ControlInput(min(max(u0, -config.u_max), config.u_max), True)
    if math.isinf(slope):
        # an infinite wall one step away: forbid any motion towards it
        a, b = (-1.0 if slope > 0 else 1.0), 0.0
    else:
        a, b = -slope, -config.alpha0 * h
    u, infeasible = solve_cbf_qp(a, b, u0, config.u_max)
    return ControlInput(u, infeasible)


@dataclass(frozen=True)
class InvarianceReport:
    min_h: float
    violations: int
    first_violation: Optional[int]
    steps: int

    @property
    def ok(self) -> bool:
        return self.violations == 0


def check_invariance(trace: Iterable, tolerance: float = 1e-3) -> InvarianceReport:
    """Scan ``(state, h)`` pairs for steps with ``h < -tolerance``."""
    hs = [float(h) for _, h in trace]
    if not hs:
        raise ValueError("trace is empty")
    bad = [i for i, h in enumerate(hs) if h < -tolerance]
    return InvarianceReport(min(hs), len(bad), bad[0] if bad else None, len(hs))
