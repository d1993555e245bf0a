"""Lane-level road network, map file I/O and boundary geometry.

Coordinates are Frenet-style: ``station`` runs along a segment and
``lateral`` is signed, positive to the left. Lanes are listed leftmost
first.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

SCHEMA_VERSION = 1

DEFAULT_LANE_WIDTH = 3.0
DEFAULT_SHOULDER_WIDTH = 3.0
DEFAULT_E_MAX = 8.0
DEFAULT_F_MAX = 0.14

MPS_TO_MPH = 1.0 / 0.44704
FT_TO_M = 0.3048


class MapValidationError(ValueError):
    """A road-map file or object violates a schema rule or invariant."""


class BoundaryKind(str, enum.Enum):
    INNER = "inner"
    OUTER = "outer"

    @classmethod
    def parse(cls, value: Any) -> "BoundaryKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise MapValidationError(f"unknown boundary kind {value!r}") from None


class TurnDirection(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class LaneSpec:
    id: str
    left_boundary: BoundaryKind
    right_boundary: BoundaryKind
    width: float = DEFAULT_LANE_WIDTH
    shoulder_width_if_outer: float = DEFAULT_SHOULDER_WIDTH

    def __post_init__(self):
        if not self.width > 0:
            raise MapValidationError(f"lane {self.id!r}: width must be > 0, got {self.width}")
        if self.shoulder_width_if_outer < 0:
            raise MapValidationError(f"lane {self.id!r}: shoulder_width_if_outer must be >= 0")


@dataclass(frozen=True)
class RoadSegment:
    id: str
    design_speed: float
    lanes: tuple[LaneSpec, ...]
    length: float
    curvature_radius_actual: Optional[float] = None
    superelevation_max: float = DEFAULT_E_MAX
    side_friction_max: float = DEFAULT_F_MAX

    def __post_init__(self):
        object.__setattr__(self, "lanes", tuple(self.lanes))
        if not 0 < self.design_speed < 100:
            raise MapValidationError(
                f"segment {self.id!r}: design_speed must lie in (0, 100) m/s, got {self.design_speed}"
            )
        if not self.lanes:
            raise MapValidationError(f"segment {self.id!r}: needs at least one lane")
        if not self.length > 0:
            raise MapValidationError(f"segment {self.id!r}: length must be > 0")
        if self.curvature_radius_actual is not None and not self.curvature_radius_actual > 0:
            raise MapValidationError(f"segment {self.id!r}: curvature_radius_actual must be > 0")
        ids = [lane.id for lane in self.lanes]
        if len(set(ids)) != len(ids):
            raise MapValidationError(f"segment {self.id!r}: duplicate lane ids")
        last = len(self.lanes) - 1
        for i, lane in enumerate(self.lanes):
            if lane.left_boundary is BoundaryKind.OUTER and i != 0:
                raise MapValidationError(
                    f"lane {lane.id!r}: only the leftmost lane may have an outer left boundary"
                )
            if lane.right_boundary is BoundaryKind.OUTER and i != last:
                raise MapValidationError(
                    f"lane {lane.id!r}: only the rightmost lane may have an outer right boundary"
                )

    def lane_index(self, lane_id: str) -> int:
        for i, lane in enumerate(self.lanes):
            if lane.id == lane_id:
                return i
        raise KeyError(f"unknown lane id {lane_id!r} in segment {self.id!r}")

    def lane(self, lane_id: str) -> LaneSpec:
        return self.lanes[self.lane_index(lane_id)]

    @property
    def total_width(self) -> float:
        return sum(lane.width for lane in self.lanes)

    def lane_center(self, lane_id: str) -> float:
        """Lateral offset of a lane centerline from the road centerline."""
        i = self.lane_index(lane_id)
        left_edge = self.total_width / 2 - sum(lane.width for lane in self.lanes[:i])
        return left_edge - self.lanes[i].width / 2

    def lateral_extent(self) -> tuple[float, float]:
        """Road-centerline lateral span covering all lanes and outer shoulders."""
        half = self.total_width / 2
        lo = -half - (
            self.lanes[-1].shoulder_width_if_outer
            if self.lanes[-1].right_boundary is BoundaryKind.OUTER
            else 0.0
        )
        hi = half + (
            self.lanes[0].shoulder_width_if_outer
            if self.lanes[0].left_boundary is BoundaryKind.OUTER
            else 0.0
        )
        return lo, hi

    def neighbor(self, lane_id: str, side: str) -> Optional[LaneSpec]:
        i = self.lane_index(lane_id)
        j = i - 1 if side == "left" else i + 1
        if 0 <= j < len(self.lanes):
            return self.lanes[j]
        return None

    def min_radius(self) -> float:
        return min_curve_radius(self.design_speed, self.superelevation_max, self.side_friction_max)

    def actual_radius(self) -> float:
        """Actual curve radius; straight segments report the minimum radius."""
        if self.curvature_radius_actual is None:
            return self.min_radius()
        return self.curvature_radius_actual


@dataclass(frozen=True)
class IntersectionTurnSpec:
    """Turn through an intersection or roundabout.

    Signed lateral offsets from the mean turn arc are positive towards the
    turn center (the inner side) and negative towards the outer side.
    """

    id: str
    turn_direction: TurnDirection
    entry_heading: float
    exit_heading: float
    mean_turn_radius: float
    curb_offset_inner: float
    curb_offset_outer: float
    turn_speed: float
    has_adjacent_turn_lane: dict = field(default_factory=lambda: {"inner": False, "outer": False})
    turn_lane_half_width: float = DEFAULT_LANE_WIDTH / 2

    def __post_init__(self):
        if not isinstance(self.turn_direction, TurnDirection):
            object.__setattr__(self, "turn_direction", TurnDirection(str(self.turn_direction).lower()))
        if not self.mean_turn_radius > 0:
            raise MapValidationError(f"intersection {self.id!r}: mean_turn_radius must be > 0")
        if not (self.curb_offset_inner > 0 and self.curb_offset_outer > 0):
            raise MapValidationError(f"intersection {self.id!r}: curb offsets must be > 0")
        if not self.turn_lane_half_width > 0:
            raise MapValidationError(f"intersection {self.id!r}: turn_lane_half_width must be > 0")
        if self.turn_speed < 0:
            raise MapValidationError(f"intersection {self.id!r}: turn_speed must be >= 0")
        adj = {"inner": False, "outer": False}
        for key, value in dict(self.has_adjacent_turn_lane).items():
            if key not in adj:
                raise MapValidationError(f"intersection {self.id!r}: unknown side {key!r}")
            adj[key] = bool(value)
        object.__setattr__(self, "has_adjacent_turn_lane", adj)


@dataclass(frozen=True)
class RoadNetwork:
    segments: tuple[RoadSegment, ...]
    intersections: tuple[IntersectionTurnSpec, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "intersections", tuple(self.intersections))
        ids = [s.id for s in self.segments]
        if len(set(ids)) != len(ids):
            raise MapValidationError("segment ids must be unique")
        ids = [t.id for t in self.intersections]
        if len(set(ids)) != len(ids):
            raise MapValidationError("intersection ids must be unique")

    def segment(self, segment_id: str) -> RoadSegment:
        for seg in self.segments:
            if seg.id == segment_id:
                return seg
        raise KeyError(f"unknown segment id {segment_id!r}")

    def find_lane(self, lane_id: str) -> tuple[RoadSegment, LaneSpec]:
        for seg in self.segments:
            for lane in seg.lanes:
                if lane.id == lane_id:
                    return seg, lane
        raise KeyError(f"unknown lane id {lane_id!r}")


@dataclass(frozen=True)
class VehiclePose:
    station: float
    lateral: float
    half_width: float
    heading_error: float = 0.0

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be > 0")


def min_curve_radius(design_speed: float, e_max: float = DEFAULT_E_MAX,
                     f_max: float = DEFAULT_F_MAX) -> float:
    """Minimum horizontal curve radius in meters for a design speed in m/s.

    The AASHTO relation is applied in its customary units (mph in, feet
    out), so the speed is converted to mph and the result back to meters.
    """
    if design_speed < 0:
        raise ValueError(f"design_speed must be >= 0, got {design_speed}")
    denom = 15.0 * (0.01 * e_max + f_max)
    if not denom > 0:
        raise ValueError("0.01*e_max + f_max must be > 0")
    mph = design_speed * MPS_TO_MPH
    return mph * mph / denom * FT_TO_M


def encroachment(network: RoadNetwork, lane_id: str, side: str, pose: VehiclePose) -> float:
    """Distance the vehicle edge extends past one boundary of a lane.

    ``pose.lateral`` is measured from the lane centerline.
    """
    _, lane = network.find_lane(lane_id)
    return edge_encroachment(lane.width, side, pose.lateral, pose.half_width)


def edge_encroachment(lane_width: float, side: str, lateral: float, half_width: float) -> float:
    if side == "left":
        return max(0.0, lateral + half_width - lane_width / 2)
    if side == "right":
        return max(0.0, -lateral + half_width - lane_width / 2)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


# ---------------------------------------------------------------------------
# JSON (de)serialization

def _build(cls, data: Any, where: str, convert: Optional[dict] = None):
    if not isinstance(data, dict):
        raise MapValidationError(f"{where}: expected an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise MapValidationError(f"{where}: unknown field(s) {sorted(unknown)}")
    kwargs = dict(data)
    for key, fn in (convert or {}).items():
        if key in kwargs:
            kwargs[key] = fn(kwargs[key])
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise MapValidationError(f"{where}: {exc}") from None


def _lane_from_dict(data: Any, where: str) -> LaneSpec:
    return _build(LaneSpec, data, where, {
        "left_boundary": BoundaryKind.parse,
        "right_boundary": BoundaryKind.parse,
        "width": float,
        "shoulder_width_if_outer": float,
    })


def _segment_from_dict(data: Any, where: str) -> RoadSegment:
    if not isinstance(data, dict):
        raise MapValidationError(f"{where}: expected an object")
    lanes = data.get("lanes")
    if not isinstance(lanes, list):
        raise MapValidationError(f"{where}: 'lanes' must be a list")
    data = dict(data, lanes=tuple(_lane_from_dict(l, f"{where}.lanes[{i}]") for i, l in enumerate(lanes)))
    return _build(RoadSegment, data, where, {
        "design_speed": float,
        "length": float,
        "curvature_radius_actual": lambda v: None if v is None else float(v),
        "superelevation_max": float,
        "side_friction_max": float,
    })


def _intersection_from_dict(data: Any, where: str) -> IntersectionTurnSpec:
    def direction(v):
        try:
            return TurnDirection(str(v).lower())
        except ValueError:
            raise MapValidationError(f"{where}: unknown turn_direction {v!r}") from None

    floats = {k: float for k in ("entry_heading", "exit_heading", "mean_turn_radius",
                                 "curb_offset_inner", "curb_offset_outer", "turn_speed",
                                 "turn_lane_half_width")}
    return _build(IntersectionTurnSpec, data, where, {"turn_direction": direction, **floats})


def network_from_dict(data: Any) -> RoadNetwork:
    if not isinstance(data, dict):
        raise MapValidationError("road map: top level must be an object")
    unknown = set(data) - {"schema_version", "segments", "intersections"}
    if unknown:
        raise MapValidationError(f"road map: unknown field(s) {sorted(unknown)}")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise MapValidationError(f"road map: unsupported schema_version {version!r}")
    segments = data.get("segments")
    if not isinstance(segments, list):
        raise MapValidationError("road map: 'segments' must be a list")
    intersections = data.get("intersections", [])
    if not isinstance(intersections, list):
        raise MapValidationError("road map: 'intersections' must be a list")
    return RoadNetwork(
        segments=tuple(_segment_from_dict(s, f"segments[{i}]") for i, s in enumerate(segments)),
        intersections=tuple(_intersection_from_dict(t, f"intersections[{i}]")
                            for i, t in enumerate(intersections)),
        schema_version=version,
    )


def network_to_dict(network: RoadNetwork) -> dict:
    def lane(l: LaneSpec) -> dict:
        return {
            "id": l.id,
            "width": l.width,
            "left_boundary": l.left_boundary.value,
            "right_boundary": l.right_boundary.value,
            "shoulder_width_if_outer": l.shoulder_width_if_outer,
        }

    def segment(s: RoadSegment) -> dict:
        return {
            "id": s.id,
            "design_speed": s.design_speed,
            "lanes": [lane(l) for l in s.lanes],
            "curvature_radius_actual": s.curvature_radius_actual,
            "superelevation_max": s.superelevation_max,
            "side_friction_max": s.side_friction_max,
            "length": s.length,
        }

    def turn(t: IntersectionTurnSpec) -> dict:
        return {
            "id": t.id,
            "turn_direction": t.turn_direction.value,
            "entry_heading": t.entry_heading,
            "exit_heading": t.exit_heading,
            "mean_turn_radius": t.mean_turn_radius,
            "curb_offset_inner": t.curb_offset_inner,
            "curb_offset_outer": t.curb_offset_outer,
            "has_adjacent_turn_lane": dict(t.has_adjacent_turn_lane),
            "turn_speed": t.turn_speed,
            "turn_lane_half_width": t.turn_lane_half_width,
        }

    return {
        "schema_version": network.schema_version,
        "segments": [segment(s) for s in network.segments],
        "intersections": [turn(t) for t in network.intersections],
    }


def load_road_network(path) -> RoadNetwork:
    """Read and validate a road-map JSON file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapValidationError(f"{path}: malformed JSON ({exc})") from None
    return network_from_dict(data)


def save_road_network(network: RoadNetwork, path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(network), indent=2) + "\n")
