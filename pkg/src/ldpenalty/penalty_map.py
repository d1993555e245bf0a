"""Precomputed static penalty grids (station x lateral offset).

Speed, boundary kind and curvature are known from the map, so their
combined penalty is tabulated ahead of time per segment and ego lane. The
adjacent-gap factor is applied on top at run time with
:func:`apply_dynamic`.

Lateral offsets in a map are measured from the road centerline and refer
to a single point (e.g. a vehicle edge), not to a vehicle center.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .penalty_core import PenaltyContext, params_for, scale_penalty, weibull_cdf
from .road_model import RoadNetwork

MAP_SCHEMA_VERSION = 1

DEFAULT_STATION_STEP = 1.0
DEFAULT_LATERAL_STEP = 0.05

# absorbs float error when dividing a range by its step
_COUNT_EPS = 1e-9


class MapSchemaError(ValueError):
    pass


@dataclass(frozen=True)
class StaticSample:
    static_penalty: float
    governing_boundary: Optional[str]
    encroachment: float


def grid_count(span: float, step: float) -> int:
    return int(math.floor(span / step + _COUNT_EPS)) + 1


@dataclass(frozen=True, eq=False)
class StaticPenaltyMap:
    segment_id: str
    ego_lane_id: str
    station_step: float
    lateral_step: float
    lateral_range: tuple[float, float]
    penalty: np.ndarray        # (n_stations, n_laterals)
    encroachment: np.ndarray   # (n_stations, n_laterals)
    governing: np.ndarray      # (n_stations, n_laterals), str or None
    schema_version: int = MAP_SCHEMA_VERSION

    def __post_init__(self):
        if not (self.station_step > 0 and self.lateral_step > 0):
            raise ValueError("grid steps must be > 0")
        lo, hi = self.lateral_range
        object.__setattr__(self, "lateral_range", (float(lo), float(hi)))
        shape = self.penalty.shape
        if self.encroachment.shape != shape or self.governing.shape != shape:
            raise ValueError("grid layers must share one shape")
        if len(shape) != 2:
            raise ValueError("grid must be two-dimensional")
        if shape[1] and shape[1] != grid_count(hi - lo, self.lateral_step):
            raise ValueError("lateral grid size does not match lateral_range / lateral_step")
        if np.any(self.penalty[self.encroachment == 0] != 0):
            raise ValueError("static penalty must vanish where encroachment is zero")

    @property
    def shape(self) -> tuple[int, int]:
        return self.penalty.shape

    @property
    def stations(self) -> np.ndarray:
        return np.arange(self.shape[0]) * self.station_step

    @property
    def laterals(self) -> np.ndarray:
        return self.lateral_range[0] + np.arange(self.shape[1]) * self.lateral_step

    def sample(self, i: int, j: int) -> StaticSample:
        return StaticSample(float(self.penalty[i, j]), self.governing[i, j],
                            float(self.encroachment[i, j]))

    def __eq__(self, other):
        if not isinstance(other, StaticPenaltyMap):
            return NotImplemented
        return (
            self.segment_id == other.segment_id
            and self.ego_lane_id == other.ego_lane_id
            and self.station_step == other.station_step
            and self.lateral_step == other.lateral_step
            and self.lateral_range == other.lateral_range
            and self.schema_version == other.schema_version
            and np.array_equal(self.penalty, other.penalty)
            and np.array_equal(self.encroachment, other.encroachment)
            and self.governing.shape == other.governing.shape
            and bool(np.all(self.governing == other.governing))
        )


def lateral_profile(network: RoadNetwork, segment_id: str, ego_lane_id: str,
                    laterals: np.ndarray, curvature_mode: str = "literal"):
    """Encroachment, governing boundary id and static penalty along a cross-section.

    Returns ``(encroachment, governing, penalty, boundary_kind)`` arrays
    aligned with ``laterals`` (road-centerline offsets).
    """
    seg = network.segment(segment_id)
    lane = seg.lane(ego_lane_id)
    center = seg.lane_center(ego_lane_id)
    left_edge = center + lane.width / 2
    right_edge = center - lane.width / 2
    y = np.asarray(laterals, dtype=float)

    left_enc = np.maximum(y - left_edge, 0.0)
    right_enc = np.maximum(right_edge - y, 0.0)
    enc = left_enc + right_enc

    governing = np.full(y.shape, None, dtype=object)
    governing[y > left_edge] = f"{lane.id}.left"
    governing[y < right_edge] = f"{lane.id}.right"
    kind = np.full(y.shape, None, dtype=object)
    kind[y > left_edge] = lane.left_boundary
    kind[y < right_edge] = lane.right_boundary

    fac = PenaltyContext.for_segment(seg, lane.left_boundary, curvature_mode).curvature_factor
    left_p = weibull_cdf(left_enc, params_for(seg.design_speed, lane.left_boundary))
    right_p = weibull_cdf(right_enc, params_for(seg.design_speed, lane.right_boundary))
    penalty = fac * (left_p + right_p)
    return enc, governing, penalty, kind


def build_static_map(network: RoadNetwork, segment_id: str, ego_lane_id: str,
                     station_step: float = DEFAULT_STATION_STEP,
                     lateral_step: float = DEFAULT_LATERAL_STEP,
                     curvature_mode: str = "literal") -> StaticPenaltyMap:
    seg = network.segment(segment_id)
    lane = seg.lane(ego_lane_id)
    if not (station_step > 0 and lateral_step > 0):
        raise ValueError("grid steps must be > 0")
    if lateral_step > lane.width:
        raise ValueError(f"lateral_step {lateral_step} exceeds lane width {lane.width}")

    lo, hi = seg.lateral_extent()
    n_lat = grid_count(hi - lo, lateral_step)
    n_sta = grid_count(seg.length, station_step)
    laterals = lo + np.arange(n_lat) * lateral_step
    enc, governing, penalty, _ = lateral_profile(network, segment_id, ego_lane_id, laterals,
                                                 curvature_mode)
    # segment properties are uniform in station, so every row is identical
    return StaticPenaltyMap(
        segment_id=segment_id,
        ego_lane_id=ego_lane_id,
        station_step=float(station_step),
        lateral_step=float(lateral_step),
        lateral_range=(lo, hi),
        penalty=np.tile(penalty, (n_sta, 1)),
        encroachment=np.tile(enc, (n_sta, 1)),
        governing=np.tile(governing, (n_sta, 1)),
    )


def _nearest(value: float, origin: float, step: float, count: int, what: str) -> int:
    u = (value - origin) / step
    if u < -_COUNT_EPS or u > count - 1 + _COUNT_EPS:
        raise IndexError(f"{what} {value} outside map range")
    i = math.floor(u)
    if u - i > 0.5:
        i += 1
    return min(max(i, 0), count - 1)


def query_static(smap: StaticPenaltyMap, station: float, lateral: float,
                 lateral_shift: float = 0.0) -> StaticSample:
    """Nearest-node lookup; ties go to the smaller index.

    ``lateral_shift`` moves the lane boundaries (positive = left) without
    changing the penalty shape.
    """
    n_sta, n_lat = smap.shape
    i = _nearest(station, 0.0, smap.station_step, n_sta, "station")
    j = _nearest(lateral - lateral_shift, smap.lateral_range[0], smap.lateral_step, n_lat, "lateral")
    return smap.sample(i, j)


def apply_dynamic(sample: StaticSample, factor: float) -> float:
    if not factor >= 1:
        raise ValueError(f"gap factor must be >= 1, got {factor}")
    return scale_penalty(factor, sample.static_penalty)


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else repr(float(v))


def map_to_dict(smap: StaticPenaltyMap) -> dict:
    rows = [
        [[_fmt(smap.penalty[i, j]), _fmt(smap.encroachment[i, j]), smap.governing[i, j]]
         for j in range(smap.shape[1])]
        for i in range(smap.shape[0])
    ]
    return {
        "schema_version": smap.schema_version,
        "segment_id": smap.segment_id,
        "ego_lane_id": smap.ego_lane_id,
        "station_step": smap.station_step,
        "lateral_step": smap.lateral_step,
        "lateral_range": list(smap.lateral_range),
        "rows": rows,
    }


def map_from_dict(data: dict) -> StaticPenaltyMap:
    if data.get("schema_version") != MAP_SCHEMA_VERSION:
        raise MapSchemaError(f"unsupported penalty-map schema_version {data.get('schema_version')!r}")
    rows = data["rows"]
    if not rows or not rows[0]:
        raise MapSchemaError("penalty map has an empty grid")
    n_lat = len(rows[0])
    if any(len(r) != n_lat for r in rows):
        raise MapSchemaError("ragged penalty-map rows")
    penalty = np.array([[float(c[0]) for c in r] for r in rows])
    enc = np.array([[float(c[1]) for c in r] for r in rows])
    governing = np.empty(penalty.shape, dtype=object)
    for i, r in enumerate(rows):
        for j, c in enumerate(r):
            governing[i, j] = c[2]
    return StaticPenaltyMap(
        segment_id=data["segment_id"],
        ego_lane_id=data["ego_lane_id"],
        station_step=float(data["station_step"]),
        lateral_step=float(data["lateral_step"]),
        lateral_range=tuple(data["lateral_range"]),
        penalty=penalty,
        encroachment=enc,
        governing=governing,
        schema_version=data["schema_version"],
    )


def save_map(smap: StaticPenaltyMap, path) -> None:
    if smap.penalty.size == 0:
        raise ValueError("refusing to save an empty penalty map")
    Path(path).write_text(json.dumps(map_to_dict(smap), separators=(",", ":")) + "\n")


def load_map(path) -> StaticPenaltyMap:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MapSchemaError(f"{path}: malformed JSON ({exc})") from None
    return map_from_dict(data)
