"""Adjacent-lane longitudinal gap and the dynamic penalty factor."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .penalty_core import INF, PenaltyContext, penalty_with_curvature, scale_penalty

DEFAULT_GAP_MAX = 50.0


@dataclass(frozen=True)
class AdjacentTrack:
    lane_id: str
    s_rear: float
    s_front: float
    speed: float = 0.0

    def __post_init__(self):
        if not self.s_front > self.s_rear:
            raise ValueError(f"track in {self.lane_id!r}: s_front must exceed s_rear")

    def advanced(self, dt: float) -> "AdjacentTrack":
        ds = self.speed * dt
        return AdjacentTrack(self.lane_id, self.s_rear + ds, self.s_front + ds, self.speed)


@dataclass(frozen=True)
class GapObservation:
    """Free gap facing the ego; ``gap_actual`` is clamped into ``[0, gap_max]``."""

    gap_actual: float
    gap_max: float = DEFAULT_GAP_MAX

    def __post_init__(self):
        if not self.gap_max > 0:
            raise ValueError("gap_max must be > 0")
        object.__setattr__(self, "gap_actual", min(max(float(self.gap_actual), 0.0), self.gap_max))


def observe_gap(ego_s_rear: float, ego_s_front: float, tracks: Iterable[AdjacentTrack],
                gap_max: float = DEFAULT_GAP_MAX) -> GapObservation:
    """Gap between the nearest vehicles ahead of and behind the ego in one lane."""
    if not ego_s_front > ego_s_rear:
        raise ValueError("ego_s_front must exceed ego_s_rear")
    lead = math.inf
    follow = -math.inf
    for tr in tracks:
        if tr.s_rear < ego_s_front and tr.s_front > ego_s_rear:
            return GapObservation(0.0, gap_max)
        if tr.s_rear >= ego_s_front:
            lead = min(lead, tr.s_rear)
        else:
            follow = max(follow, tr.s_front)
    gap = lead - follow
    return GapObservation(gap_max if math.isinf(gap) else gap, gap_max)


def gap_factor(obs: GapObservation) -> float:
    if obs.gap_actual == 0:
        return INF
    return obs.gap_max / obs.gap_actual


def total_penalty(x: float, ctx: PenaltyContext, obs: GapObservation) -> float:
    return scale_penalty(gap_factor(obs), penalty_with_curvature(x, ctx))
