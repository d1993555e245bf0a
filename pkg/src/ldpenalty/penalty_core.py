"""Weibull-CDF deviation penalty and its parameterizations.

Penalty values are plain floats; ``math.inf`` marks a forbidden
configuration (kerb strike, closed adjacent lane). Use
:func:`scale_penalty` rather than ``*`` when a factor may be infinite so
that ``inf * 0`` stays 0 (no encroachment, no penalty).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .road_model import BoundaryKind, IntersectionTurnSpec

INF = math.inf

SPEED_RANGE = (5.0, 35.0)
SHAPE_RANGE = (0.5, 5.0)
SCALE_RANGE = (1.0, 2.0)

INTERSECTION_SHAPE = 5.0
TURN_SPEED_RANGE = (2.0, 15.0)

CURVATURE_MODES = ("literal", "reciprocal")

# keeps allowable_error finite when the threshold saturates the cdf
_QUANTILE_CAP = 1.0 - 1e-12


@dataclass(frozen=True)
class WeibullParams:
    k: float
    lam: float

    def __post_init__(self):
        if not (self.k > 0 and self.lam > 0):
            raise ValueError(f"Weibull parameters must be positive, got k={self.k}, lam={self.lam}")


@dataclass(frozen=True)
class PenaltyContext:
    speed_limit: float
    boundary: BoundaryKind
    r_actual: float
    r_min: float
    curvature_mode: str = "literal"

    def __post_init__(self):
        if not self.speed_limit > 0:
            raise ValueError("speed_limit must be > 0")
        if not (self.r_actual > 0 and self.r_min > 0):
            raise ValueError("curve radii must be > 0")
        if self.curvature_mode not in CURVATURE_MODES:
            raise ValueError(f"curvature_mode must be one of {CURVATURE_MODES}")

    @classmethod
    def for_segment(cls, segment, boundary: BoundaryKind, curvature_mode: str = "literal"):
        return cls(segment.design_speed, boundary, segment.actual_radius(), segment.min_radius(),
                   curvature_mode)

    @property
    def curvature_factor(self) -> float:
        return curvature_factor(self.r_actual, self.r_min, self.curvature_mode)


def scale_penalty(factor: float, value: float) -> float:
    """``factor * value`` with ``inf * 0 == 0``."""
    if value == 0 or factor == 0:
        return 0.0
    return factor * value


def weibull_cdf(x, params: WeibullParams):
    """Weibull cumulative distribution, zero for nonpositive ``x``.

    Accepts scalars or arrays; scalars come back as ``float``.
    """
    if np.ndim(x) == 0:
        x = float(x)
        if x <= 0:
            return 0.0
        return -math.expm1(-((x / params.lam) ** params.k))
    x = np.asarray(x, dtype=float)
    z = np.where(x > 0, x, 0.0) / params.lam
    return np.where(x > 0, -np.expm1(-(z ** params.k)), 0.0)


def weibull_pdf(x: float, params: WeibullParams) -> float:
    """Derivative of :func:`weibull_cdf` for ``x > 0`` (0 otherwise)."""
    if x <= 0:
        return 0.0
    z = x / params.lam
    return params.k / params.lam * z ** (params.k - 1) * math.exp(-(z ** params.k))


def weibull_quantile(p: float, params: WeibullParams) -> float:
    if not 0 <= p < 1:
        raise ValueError(f"quantile level must lie in [0, 1), got {p}")
    if p == 0:
        return 0.0
    return params.lam * (-math.log1p(-p)) ** (1.0 / params.k)


def _affine(t: float, lo: float, hi: float) -> float:
    return lo + t * (hi - lo)


def params_for(speed_limit: float, boundary: BoundaryKind) -> WeibullParams:
    """Shape and scale for a speed limit (m/s) and boundary kind.

    Outer boundaries grow both parameters linearly with speed; inner
    boundaries grow them linearly with the reciprocal of speed. Speeds are
    clamped to the calibrated range first, and the endpoints of the
    parameter ranges are hit exactly.
    """
    v_lo, v_hi = SPEED_RANGE
    v = min(max(float(speed_limit), v_lo), v_hi)
    boundary = BoundaryKind.parse(boundary)
    if boundary is BoundaryKind.OUTER:
        t = (v - v_lo) / (v_hi - v_lo)
    else:
        t = (1.0 / v - 1.0 / v_hi) / (1.0 / v_lo - 1.0 / v_hi)
    t = min(max(t, 0.0), 1.0)
    return WeibullParams(_affine(t, *SHAPE_RANGE), _affine(t, *SCALE_RANGE))


def base_penalty(x: float, speed_limit: float, boundary: BoundaryKind) -> float:
    return weibull_cdf(x, params_for(speed_limit, boundary))


def curvature_factor(r_actual: float, r_min: float, mode: str = "literal") -> float:
    """Ratio ``r_actual / r_min`` (``mode="reciprocal"`` inverts it)."""
    if not (r_actual > 0 and r_min > 0):
        raise ValueError(f"curve radii must be > 0, got r_actual={r_actual}, r_min={r_min}")
    if mode == "literal":
        return r_actual / r_min
    if mode == "reciprocal":
        return r_min / r_actual
    raise ValueError(f"curvature mode must be one of {CURVATURE_MODES}, got {mode!r}")


def penalty_with_curvature(x: float, ctx: PenaltyContext):
    fac = ctx.curvature_factor
    p = base_penalty(x, ctx.speed_limit, ctx.boundary)
    if np.ndim(p) == 0:
        return fac * p
    return fac * np.asarray(p)


def turn_scale(turn_speed: float) -> float:
    """Scale for intersection turns: 2 m at 2 m/s falling to 1 m at 15 m/s, linear in 1/V."""
    v_lo, v_hi = TURN_SPEED_RANGE
    v = min(max(float(turn_speed), v_lo), v_hi)
    t = (1.0 / v - 1.0 / v_hi) / (1.0 / v_lo - 1.0 / v_hi)
    return _affine(t, *SCALE_RANGE)


def intersection_params(spec: IntersectionTurnSpec) -> WeibullParams:
    return WeibullParams(INTERSECTION_SHAPE, turn_scale(spec.turn_speed))


def intersection_penalty(d: float, spec: IntersectionTurnSpec) -> float:
    """Two-sided penalty about the mean turn arc.

    ``d`` is positive towards the turn center. Crossing the kerb on either
    side, or crossing into an occupied adjacent turn lane, is infinite.
    """
    side = "inner" if d >= 0 else "outer"
    mag = abs(d)
    curb = spec.curb_offset_inner if side == "inner" else spec.curb_offset_outer
    if mag > curb:
        return INF
    if spec.has_adjacent_turn_lane[side] and mag > spec.turn_lane_half_width:
        return INF
    return weibull_cdf(mag, intersection_params(spec))


def allowable_error(p_threshold: float, total_multiplier: float, params: WeibullParams) -> float:
    """Largest encroachment whose scaled penalty stays within ``p_threshold``."""
    if not total_multiplier > 0:
        raise ValueError(f"total_multiplier must be > 0, got {total_multiplier}")
    if p_threshold <= 0:
        return 0.0
    return weibull_quantile(min(p_threshold / total_multiplier, _QUANTILE_CAP), params)
