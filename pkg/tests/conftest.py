import json

import pytest

from ldpenalty import data_path, load_road_network, load_scenario


@pytest.fixture
def fig5_network():
    return load_road_network(data_path("fig5_road.json"))


@pytest.fixture
def fig5_scenario():
    return load_scenario(data_path("fig5_scenario.json"))


@pytest.fixture
def write_json(tmp_path):
    def write(obj, name="file.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return path
    return write


def minimal_map(**lane_overrides):
    left = {"id": "L", "left_boundary": "outer", "right_boundary": "inner"}
    right = {"id": "R", "left_boundary": "inner", "right_boundary": "outer"}
    right.update(lane_overrides)
    return {
        "schema_version": 1,
        "segments": [{"id": "s", "design_speed": 20.0, "length": 100.0, "lanes": [left, right]}],
        "intersections": [],
    }
