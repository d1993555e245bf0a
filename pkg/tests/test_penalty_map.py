import dataclasses
import json
import math

import numpy as np
import pytest

from ldpenalty.penalty_core import PenaltyContext, penalty_with_curvature
from ldpenalty.penalty_map import (MapSchemaError, StaticSample, apply_dynamic, build_static_map,
                                   load_map, query_static, save_map)
from ldpenalty.road_model import RoadNetwork

E1 = 1 - math.exp(-1)


def pointwise_oracle(network, segment_id, lane_id, smap):
    """Evaluate every node independently with scalar penalty_core calls."""
    seg = network.segment(segment_id)
    widths = [l.width for l in seg.lanes]
    i = [l.id for l in seg.lanes].index(lane_id)
    lane = seg.lanes[i]
    left = sum(widths) / 2 - sum(widths[:i])
    right = left - widths[i]
    out = np.zeros(smap.shape)
    for j in range(smap.shape[1]):
        y = smap.lateral_range[0] + j * smap.lateral_step
        if y > left:
            ctx = PenaltyContext(seg.design_speed, lane.left_boundary, seg.actual_radius(),
                                 seg.min_radius())
            out[:, j] = penalty_with_curvature(y - left, ctx)
        elif y < right:
            ctx = PenaltyContext(seg.design_speed, lane.right_boundary, seg.actual_radius(),
                                 seg.min_radius())
            out[:, j] = penalty_with_curvature(right - y, ctx)
    return out


@pytest.fixture
def fig5_map(fig5_network):
    return build_static_map(fig5_network, "fig5", "right", station_step=50.0, lateral_step=0.05)


def test_fig5_samples(fig5_map):
    # ego lane spans [-3, 0]; +1.0 is 1 m past the inner boundary, -4.0 1 m past the outer
    left = query_static(fig5_map, 0.0, 1.0)
    right = query_static(fig5_map, 0.0, -4.0)
    assert left.static_penalty == pytest.approx(E1, abs=1e-12)
    assert left.governing_boundary == "right.left"
    assert left.encroachment == pytest.approx(1.0, abs=1e-12)
    assert right.static_penalty == pytest.approx(0.03076676552365587, abs=1e-12)
    assert right.governing_boundary == "right.right"


def test_in_lane_zero(fig5_map):
    y = fig5_map.laterals
    inside = (y >= -3.0) & (y <= 0.0)
    assert np.all(fig5_map.penalty[:, inside] == 0)
    assert np.all(fig5_map.encroachment[:, inside] == 0)


def test_oracle_equivalence(fig5_network):
    smap = build_static_map(fig5_network, "fig5", "right", station_step=1.0, lateral_step=0.05)
    assert smap.shape == (1501, 241)
    np.testing.assert_allclose(smap.penalty, pointwise_oracle(fig5_network, "fig5", "right", smap),
                               rtol=0, atol=1e-12)


def test_oracle_equivalence_curved_left_lane(fig5_network):
    seg = dataclasses.replace(fig5_network.segment("fig5"), curvature_radius_actual=900.0,
                              design_speed=17.0)
    net = RoadNetwork((seg,))
    smap = build_static_map(net, "fig5", "left", station_step=100.0, lateral_step=0.1)
    np.testing.assert_allclose(smap.penalty, pointwise_oracle(net, "fig5", "left", smap),
                               rtol=0, atol=1e-12)


def test_monotone_away_from_lane(fig5_map):
    row = fig5_map.penalty[0]
    y = fig5_map.laterals
    assert np.all(np.diff(row[y >= 0]) >= 0)
    assert np.all(np.diff(row[y <= -3][::-1]) >= 0)


def test_curvature_scales_map(fig5_network):
    seg = fig5_network.segment("fig5")
    curved = RoadNetwork((dataclasses.replace(seg, curvature_radius_actual=3 * seg.min_radius()),))
    a = build_static_map(fig5_network, "fig5", "right", 100.0, 0.05)
    b = build_static_map(curved, "fig5", "right", 100.0, 0.05)
    np.testing.assert_allclose(b.penalty, 3 * a.penalty, rtol=1e-14)


def test_bad_inputs(fig5_network):
    with pytest.raises(KeyError):
        build_static_map(fig5_network, "nope", "right")
    with pytest.raises(KeyError):
        build_static_map(fig5_network, "fig5", "nope")
    with pytest.raises(ValueError):
        build_static_map(fig5_network, "fig5", "right", lateral_step=3.5)
    with pytest.raises(ValueError):
        build_static_map(fig5_network, "fig5", "right", station_step=0.0)


def test_query_nearest(fig5_map):
    assert query_static(fig5_map, 0.0, 1.0) == fig5_map.sample(0, 140)
    # 1.025 sits midway between nodes 140 and 141: tie goes to the smaller index
    assert query_static(fig5_map, 0.0, -6.0 + 140.5 * 0.05) == fig5_map.sample(0, 140)
    assert query_static(fig5_map, 0.0, 1.03) == fig5_map.sample(0, 141)
    assert query_static(fig5_map, 24.0, 1.0) == fig5_map.sample(0, 140)
    assert query_static(fig5_map, 26.0, 1.0) == fig5_map.sample(1, 140)


def test_query_out_of_range(fig5_map):
    with pytest.raises(IndexError):
        query_static(fig5_map, 0.0, 6.5)
    with pytest.raises(IndexError):
        query_static(fig5_map, -1.0, 0.0)
    with pytest.raises(IndexError):
        query_static(fig5_map, 1600.0, 0.0)


def test_query_lateral_shift(fig5_map):
    assert query_static(fig5_map, 0.0, 1.5, lateral_shift=0.5) == query_static(fig5_map, 0.0, 1.0)


def test_apply_dynamic():
    s = StaticSample(E1, "b", 1.0)
    assert apply_dynamic(s, 1.0) == E1
    assert apply_dynamic(s, 2.0) == pytest.approx(2 * E1, abs=1e-12)
    assert apply_dynamic(StaticSample(0.0, None, 0.0), math.inf) == 0.0
    assert apply_dynamic(s, math.inf) == math.inf
    with pytest.raises(ValueError):
        apply_dynamic(s, 0.5)


def test_round_trip(fig5_map, tmp_path):
    path = tmp_path / "m.json"
    save_map(fig5_map, path)
    again = load_map(path)
    assert again == fig5_map
    save_map(again, tmp_path / "m2.json")
    assert (tmp_path / "m2.json").read_bytes() == path.read_bytes()


def test_serialized_layout(fig5_map, tmp_path):
    path = tmp_path / "m.json"
    save_map(fig5_map, path)
    doc = json.loads(path.read_text())
    assert set(doc) == {"schema_version", "segment_id", "ego_lane_id", "station_step",
                        "lateral_step", "lateral_range", "rows"}
    assert len(doc["rows"]) == fig5_map.shape[0]
    assert len(doc["rows"][0]) == fig5_map.shape[1]
    assert all(isinstance(v, str) for v in doc["rows"][0][140][:2])


def test_wrong_schema_version(fig5_map, tmp_path):
    path = tmp_path / "m.json"
    save_map(fig5_map, path)
    doc = json.loads(path.read_text())
    doc["schema_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(MapSchemaError):
        load_map(path)


def test_empty_map_rejected(fig5_map, tmp_path):
    empty = dataclasses.replace(fig5_map, penalty=np.zeros((0, 0)), encroachment=np.zeros((0, 0)),
                                governing=np.zeros((0, 0), dtype=object))
    with pytest.raises(ValueError):
        save_map(empty, tmp_path / "e.json")


def test_inf_serialized(fig5_map, tmp_path):
    pen = fig5_map.penalty.copy()
    pen[0, -1] = math.inf
    smap = dataclasses.replace(fig5_map, penalty=pen)
    path = tmp_path / "inf.json"
    save_map(smap, path)
    assert json.loads(path.read_text())["rows"][0][-1][0] == "inf"
    assert load_map(path) == smap
