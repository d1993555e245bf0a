"""Fixed-step lane-keeping simulation with the CBF filter in the loop."""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .cbf_filter import BarrierConfig, ControlInput, LateralState, barrier_value, safe_control
from .penalty_core import (CURVATURE_MODES, PenaltyContext, params_for, scale_penalty,
                           weibull_cdf)
from .penalty_map import DEFAULT_LATERAL_STEP, grid_count, lateral_profile
from .road_model import BoundaryKind, RoadNetwork, edge_encroachment, load_road_network
from .traffic_gap import DEFAULT_GAP_MAX, AdjacentTrack, GapObservation, gap_factor, observe_gap


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class EgoInit:
    station: float = 0.0
    lateral: float = 0.0
    half_width: float = 1.0
    length: float = 4.5
    speed: Optional[float] = None  # None: drive at the segment design speed

    def __post_init__(self):
        if not self.half_width > 0 or not self.length > 0:
            raise ScenarioError("ego half_width and length must be > 0")
        if self.speed is not None and self.speed < 0:
            raise ScenarioError("ego speed must be >= 0")


@dataclass(frozen=True)
class Disturbance:
    """Square pulse added to the nominal lateral command."""

    amplitude: float = 0.0
    start: float = 0.0
    duration: float = 0.0

    def __call__(self, t: float) -> float:
        if self.start <= t < self.start + self.duration:
            return self.amplitude
        return 0.0


@dataclass(frozen=True)
class Scenario:
    network: RoadNetwork
    segment_id: str
    ego_lane_id: str
    ego: EgoInit = field(default_factory=EgoInit)
    adjacent_traffic: tuple[AdjacentTrack, ...] = ()
    gap_max: float = DEFAULT_GAP_MAX
    barrier: BarrierConfig = field(default_factory=BarrierConfig)
    disturbance: Disturbance = field(default_factory=Disturbance)
    dt: float = 0.01
    duration: float = 10.0
    nominal_gain: float = 1.0
    filter_enabled: bool = True
    lateral_shift: float = 0.0
    curvature_mode: str = "literal"

    def __post_init__(self):
        object.__setattr__(self, "adjacent_traffic", tuple(self.adjacent_traffic))
        if not self.dt > 0:
            raise ScenarioError("dt must be > 0")
        if not self.duration >= self.dt:
            raise ScenarioError("duration must be >= dt")
        if not self.gap_max > 0:
            raise ScenarioError("gap_max must be > 0")
        if self.curvature_mode not in CURVATURE_MODES:
            raise ScenarioError(f"curvature_mode must be one of {CURVATURE_MODES}")
        if any(tr.speed < 0 for tr in self.adjacent_traffic):
            raise ScenarioError("track speeds must be >= 0")
        try:
            seg = self.network.segment(self.segment_id)
            seg.lane(self.ego_lane_id)
        except KeyError as exc:
            raise ScenarioError(exc.args[0]) from None

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True)
class TraceRecord:
    t: float
    station: float
    lateral: float
    encroachment_left: float
    encroachment_right: float
    gap_actual: float
    gap_factor: float
    penalty_total: float
    h: float
    u_nominal: float
    u_filtered: float
    infeasible_flag: bool


TRACE_FIELDS = [f.name for f in dataclasses.fields(TraceRecord)]


class LanePenalty:
    """Total penalty as a function of ego lateral offset (from the lane centerline).

    Gap factors are fixed at construction; build a new instance each step.
    """

    def __init__(self, scenario: Scenario, factors: dict[str, float]):
        seg = scenario.network.segment(scenario.segment_id)
        lane = seg.lane(scenario.ego_lane_id)
        self.width = lane.width
        self.half_width = scenario.ego.half_width
        self.shift = scenario.lateral_shift
        fac = PenaltyContext.for_segment(seg, lane.left_boundary,
                                         scenario.curvature_mode).curvature_factor
        self.sides = {
            "left": (params_for(seg.design_speed, lane.left_boundary), fac, factors.get("left", 1.0)),
            "right": (params_for(seg.design_speed, lane.right_boundary), fac, factors.get("right", 1.0)),
        }

    def encroachments(self, y: float) -> tuple[float, float]:
        y = y - self.shift
        return (edge_encroachment(self.width, "left", y, self.half_width),
                edge_encroachment(self.width, "right", y, self.half_width))

    def __call__(self, y: float) -> float:
        total = 0.0
        for side, x in zip(("left", "right"), self.encroachments(y)):
            params, fac, gf = self.sides[side]
            total += scale_penalty(gf, fac * weibull_cdf(x, params))
        return total


def _side_gaps(scenario: Scenario, station: float, tracks) -> dict[str, GapObservation]:
    seg = scenario.network.segment(scenario.segment_id)
    ego_rear = station - scenario.ego.length / 2
    ego_front = station + scenario.ego.length / 2
    gaps = {}
    for side in ("left", "right"):
        nb = seg.neighbor(scenario.ego_lane_id, side)
        if nb is None:
            continue
        gaps[side] = observe_gap(ego_rear, ego_front, [tr for tr in tracks if tr.lane_id == nb.id],
                                 scenario.gap_max)
    return gaps


def run(scenario: Scenario, filter_enabled: Optional[bool] = None) -> list[TraceRecord]:
    """Simulate the scenario; one record per step, state logged before the update."""
    use_filter = scenario.filter_enabled if filter_enabled is None else filter_enabled
    seg = scenario.network.segment(scenario.segment_id)
    speed = seg.design_speed if scenario.ego.speed is None else scenario.ego.speed
    lateral = scenario.ego.lateral
    cfg = scenario.barrier
    dt = scenario.dt

    trace = []
    for k in range(scenario.n_steps):
        t = k * dt
        # closed-form longitudinal motion avoids drift in the gap
        station = scenario.ego.station + speed * t
        tracks = [tr.advanced(t) for tr in scenario.adjacent_traffic]
        gaps = _side_gaps(scenario, station, tracks)
        factors = {side: gap_factor(obs) for side, obs in gaps.items()}
        penalty = LanePenalty(scenario, factors)
        state = LateralState(lateral, station, speed)
        p = penalty(lateral)
        h = barrier_value(state, penalty, cfg)

        u_nom = -scenario.nominal_gain * lateral + scenario.disturbance(t)
        if use_filter:
            cmd = safe_control(ControlInput(u_nom), state, penalty, cfg)
        else:
            cmd = ControlInput(min(max(u_nom, -cfg.u_max), cfg.u_max))

        if gaps:
            worst = min(gaps.values(), key=lambda o: o.gap_actual)
            gap_actual, gf = worst.gap_actual, gap_factor(worst)
        else:
            gap_actual, gf = scenario.gap_max, 1.0
        enc_l, enc_r = penalty.encroachments(lateral)
        trace.append(TraceRecord(t, station, lateral, enc_l, enc_r, gap_actual, gf, p, h,
                                 u_nom, cmd.lateral_velocity_command, cmd.infeasible))

        lateral += cmd.lateral_velocity_command * dt
    return trace


def summarize(trace: list[TraceRecord], tolerance: float = 1e-3) -> dict:
    hs = [r.h for r in trace]
    return {
        "steps": len(trace),
        "min_h": min(hs),
        "violations": sum(1 for h in hs if h < -tolerance),
        "max_penalty": max(r.penalty_total for r in trace),
        "infeasible_steps": sum(1 for r in trace if r.infeasible_flag),
    }


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    return format(value, ".9g")


def write_trace_csv(trace: list[TraceRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_FIELDS)
        for rec in trace:
            writer.writerow([_fmt(getattr(rec, name)) for name in TRACE_FIELDS])


def cross_section(network: RoadNetwork, segment_id: str, ego_lane_id: str, station: float,
                  gap_factor: float, lateral_step: float = DEFAULT_LATERAL_STEP,
                  curvature_mode: str = "literal") -> list[tuple[float, float, float, float]]:
    """Penalty layers ``(lateral, P_VB, P_C, P_LG)`` across the whole road at one station.

    The gap factor applies only beyond inner boundaries, where an adjacent
    travel lane exists.
    """
    if not gap_factor >= 1:
        raise ValueError(f"gap factor must be >= 1, got {gap_factor}")
    seg = network.segment(segment_id)
    if not 0 <= station <= seg.length:
        raise ValueError(f"station {station} outside segment {segment_id!r}")
    lo, hi = seg.lateral_extent()
    laterals = lo + np.arange(grid_count(hi - lo, lateral_step)) * lateral_step
    _, _, p_c, kind = lateral_profile(network, segment_id, ego_lane_id, laterals, curvature_mode)
    fac = PenaltyContext.for_segment(seg, BoundaryKind.INNER, curvature_mode).curvature_factor
    rows = []
    for y, pc, bk in zip(laterals, p_c, kind):
        pc = float(pc)
        p_vb = pc / fac
        p_lg = scale_penalty(gap_factor, pc) if bk is BoundaryKind.INNER else pc
        rows.append((float(y), p_vb, pc, p_lg))
    return rows


# ---------------------------------------------------------------------------
# scenario files

_SCENARIO_KEYS = {"network", "segment_id", "ego_lane_id", "ego", "adjacent_traffic", "gap_max",
                  "barrier", "disturbance", "dt", "duration", "nominal_gain", "filter_enabled",
                  "lateral_shift", "curvature_mode"}


def _sub(cls, data, where):
    if not isinstance(data, dict):
        raise ScenarioError(f"{where}: expected an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ScenarioError(f"{where}: unknown field(s) {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def scenario_from_dict(data: dict, base_dir=".", network: Optional[RoadNetwork] = None,
                       **overrides) -> Scenario:
    """Build a :class:`Scenario`; ``network`` paths resolve against ``base_dir``."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario: top level must be an object")
    unknown = set(data) - _SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"scenario: unknown field(s) {sorted(unknown)}")
    for key in ("segment_id", "ego_lane_id"):
        if key not in data:
            raise ScenarioError(f"scenario: missing {key!r}")
    if network is None:
        if "network" not in data:
            raise ScenarioError("scenario: missing 'network'")
        network = load_road_network(Path(base_dir) / data["network"])
    kwargs = {k: v for k, v in data.items() if k not in ("network", "ego", "adjacent_traffic",
                                                         "barrier", "disturbance")}
    kwargs["ego"] = _sub(EgoInit, data.get("ego", {}), "ego")
    kwargs["adjacent_traffic"] = tuple(_sub(AdjacentTrack, tr, f"adjacent_traffic[{i}]")
                                       for i, tr in enumerate(data.get("adjacent_traffic", [])))
    barrier = dict(data.get("barrier", {}))
    for key in ("penalty_threshold", "alpha0"):
        if overrides.get(key) is not None:
            barrier[key] = overrides[key]
    kwargs["barrier"] = _sub(BarrierConfig, barrier, "barrier")
    kwargs["disturbance"] = _sub(Disturbance, data.get("disturbance", {}), "disturbance")
    if overrides.get("gap_max") is not None:
        kwargs["gap_max"] = overrides["gap_max"]
    try:
        return Scenario(network=network, **kwargs)
    except TypeError as exc:
        raise ScenarioError(f"scenario: {exc}") from None


def load_scenario(path, **overrides) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: malformed JSON ({exc})") from None
    return scenario_from_dict(data, base_dir=path.parent, **overrides)
