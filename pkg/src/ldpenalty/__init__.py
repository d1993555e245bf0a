"""Localization deviation penalties for automated-vehicle lateral safety.

Penalties grow as a Weibull CDF of the distance a vehicle edge extends past
a lane boundary, shaped by speed limit and boundary kind, scaled by road
curvature and by the free gap in the adjacent lane, and enforced online
with a control-barrier-function filter.
"""

from importlib import resources

from .cbf_filter import (BarrierConfig, ControlInput, LateralState, barrier_value,
                         check_invariance, safe_control)
from .penalty_core import (INF, PenaltyContext, WeibullParams, allowable_error, base_penalty,
                           curvature_factor, intersection_penalty, params_for,
                           penalty_with_curvature, weibull_cdf, weibull_quantile)
from .penalty_map import (StaticPenaltyMap, StaticSample, apply_dynamic, build_static_map,
                          load_map, query_static, save_map)
from .road_model import (BoundaryKind, IntersectionTurnSpec, LaneSpec, RoadNetwork, RoadSegment,
                         VehiclePose, encroachment, load_road_network, min_curve_radius)
from .simulator import Scenario, cross_section, load_scenario, run
from .traffic_gap import AdjacentTrack, GapObservation, gap_factor, observe_gap, total_penalty

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a bundled example file (road maps, scenarios)."""
    return resources.files(__name__) / "data" / name
