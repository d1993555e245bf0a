import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldpenalty import data_path
from ldpenalty.road_model import (BoundaryKind, MapValidationError, VehiclePose, encroachment,
                                  load_road_network, min_curve_radius, network_from_dict,
                                  save_road_network)

from conftest import minimal_map


def test_minimal_defaults(write_json):
    net = load_road_network(write_json(minimal_map()))
    seg = net.segment("s")
    assert len(seg.lanes) == 2
    assert [l.width for l in seg.lanes] == [3.0, 3.0]
    assert seg.superelevation_max == 8.0
    assert seg.side_friction_max == 0.14
    assert seg.actual_radius() == seg.min_radius()


def test_negative_width_rejected(write_json):
    with pytest.raises(MapValidationError, match="width"):
        load_road_network(write_json(minimal_map(width=-1)))


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(MapValidationError, match="malformed"):
        load_road_network(path)


def test_unknown_field_rejected(write_json):
    with pytest.raises(MapValidationError, match="unknown"):
        load_road_network(write_json(minimal_map(colour="red")))
    doc = minimal_map()
    doc["extra"] = 1
    with pytest.raises(MapValidationError, match="unknown"):
        network_from_dict(doc)


def test_outer_only_on_road_edges():
    doc = minimal_map(left_boundary="outer")
    with pytest.raises(MapValidationError, match="leftmost"):
        network_from_dict(doc)


def test_duplicate_segment_ids():
    doc = minimal_map()
    doc["segments"].append(doc["segments"][0])
    with pytest.raises(MapValidationError, match="unique"):
        network_from_dict(doc)


def test_fig5_boundaries(fig5_network):
    lane = fig5_network.segment("fig5").lane("right")
    assert lane.left_boundary is BoundaryKind.INNER
    assert lane.right_boundary is BoundaryKind.OUTER
    assert fig5_network.segment("fig5").design_speed == 35.0


def test_round_trip(fig5_network, tmp_path):
    path = tmp_path / "out.json"
    save_road_network(fig5_network, path)
    again = load_road_network(path)
    assert again == fig5_network
    save_road_network(again, tmp_path / "out2.json")
    assert (tmp_path / "out2.json").read_text() == path.read_text()


def test_lane_centers(fig5_network):
    seg = fig5_network.segment("fig5")
    assert seg.lane_center("left") == 1.5
    assert seg.lane_center("right") == -1.5
    assert seg.lateral_extent() == (-6.0, 6.0)


def test_min_radius_zero_speed():
    assert min_curve_radius(0.0) == 0.0


def test_min_radius_50mph():
    # 50 mph -> 50**2 / (15 * (0.08 + 0.14)) ft
    expected = 2500 / (15 * 0.22) * 0.3048
    assert min_curve_radius(22.352, 8.0, 0.14) == pytest.approx(expected, rel=1e-12)
    assert abs(min_curve_radius(22.352, 8.0, 0.14) - 230.91) <= 0.01


def test_min_radius_domain_error():
    with pytest.raises(ValueError):
        min_curve_radius(10.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        min_curve_radius(-1.0)


@given(st.floats(0.1, 50), st.floats(0, 12), st.floats(0.05, 0.4))
def test_min_radius_quadratic(v, e, f):
    assert min_curve_radius(2 * v, e, f) == pytest.approx(4 * min_curve_radius(v, e, f), rel=1e-12)


@given(st.floats(0.1, 50), st.floats(0.1, 50), st.floats(0, 12), st.floats(0.05, 0.4))
def test_min_radius_monotone(v1, v2, e, f):
    if v1 < v2:
        assert min_curve_radius(v1, e, f) < min_curve_radius(v2, e, f)
    assert min_curve_radius(v1, e, f) > min_curve_radius(v1, e, f + 0.01)


@pytest.mark.parametrize("lateral, left, right", [
    (0.0, 0.0, 0.0),
    (1.0, 0.5, 0.0),
    (-2.0, 0.0, 1.5),
])
def test_encroachment_examples(fig5_network, lateral, left, right):
    pose = VehiclePose(station=0.0, lateral=lateral, half_width=1.0)
    assert encroachment(fig5_network, "right", "left", pose) == pytest.approx(left)
    assert encroachment(fig5_network, "right", "right", pose) == pytest.approx(right)


def test_encroachment_unknown_lane(fig5_network):
    with pytest.raises(KeyError):
        encroachment(fig5_network, "nope", "left", VehiclePose(0, 0, 1))


FIG5 = load_road_network(data_path("fig5_road.json"))


@given(st.floats(-5, 5), st.floats(0.1, 1.4))
def test_encroachment_zero_band(y, hw):
    pose = VehiclePose(0.0, y, hw)
    x_l = encroachment(FIG5, "right", "left", pose)
    x_r = encroachment(FIG5, "right", "right", pose)
    assert x_l >= 0 and x_r >= 0
    inside = abs(y) <= 1.5 - hw
    assert (x_l == 0 and x_r == 0) == inside or abs(abs(y) - (1.5 - hw)) < 1e-12
