import json

import pytest

from waiterplan.errors import ScenarioError
from waiterplan.scenario import (
    DEFAULT_SCENARIO,
    bundled_scenario_path,
    load_bundled,
    load_scenario,
    parse_scenario,
    scenario_digest,
)


def test_planar_scenario_loads(planar_scenario):
    assert planar_scenario.name == "planar_tray"
    assert planar_scenario.model.n_q == 2
    assert planar_scenario.partition.n_intervals == 4
    assert planar_scenario.contact.mu == 0.4
    assert planar_scenario.solver.restarts == 0
    assert planar_scenario.max_terms == 20
    # 5% on the object's mass
    assert planar_scenario.model.upper[2, 0] == pytest.approx(0.21)


def test_bundled_scenario_loads(bundled):
    assert bundled.name == DEFAULT_SCENARIO
    assert bundled.model.n_q == 3
    assert bundled.model.n_links == 4
    assert len(bundled.obstacles) == 1


def test_unknown_bundled_scenario():
    with pytest.raises(ScenarioError, match="no bundled scenario 'nope'"):
        bundled_scenario_path("nope")


def test_unsupported_version_points_at_its_line(scenario_doc, write_scenario):
    scenario_doc["version"] = 2
    path = write_scenario(scenario_doc)

    with pytest.raises(ScenarioError) as excinfo:
        load_scenario(path)

    assert excinfo.value.line == 2
    assert excinfo.value.path == path
    assert str(excinfo.value).startswith(f"{path}:2: version:")


def test_invalid_json_reports_decoder_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "version": 1,\n  "name": \n}\n', encoding="utf-8")

    with pytest.raises(ScenarioError, match="invalid JSON") as excinfo:
        load_scenario(path)
    assert excinfo.value.line == 4


def test_missing_value_is_named(scenario_doc, write_scenario):
    del scenario_doc["object"]["mu"]

    with pytest.raises(ScenarioError, match="object.mu: missing required value"):
        load_scenario(write_scenario(scenario_doc))


def test_negative_friction_is_rejected(scenario_doc, write_scenario):
    scenario_doc["object"]["mu"] = -0.3

    with pytest.raises(ScenarioError, match="friction coefficient"):
        load_scenario(write_scenario(scenario_doc))


def test_prismatic_joint_is_rejected(scenario_doc, write_scenario):
    scenario_doc["robot"]["joints"][1]["type"] = "prismatic"

    with pytest.raises(ScenarioError, match="unknown joint type 'prismatic'"):
        load_scenario(write_scenario(scenario_doc))


def test_partition_must_divide_horizon(scenario_doc, write_scenario):
    scenario_doc["partition"]["dt"] = 0.3

    with pytest.raises(ScenarioError, match="not an integer multiple"):
        load_scenario(write_scenario(scenario_doc))


def test_goal_outside_joint_limits(scenario_doc, write_scenario):
    scenario_doc["goal"] = [3.0, 0.0]

    with pytest.raises(ScenarioError, match="joint limits"):
        load_scenario(write_scenario(scenario_doc))


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="cannot read scenario"):
        load_scenario(tmp_path / "absent.json")


def test_events_are_parsed(scenario_doc, write_scenario):
    scenario_doc["events"] = [
        {"iteration": 2, "obstacle": {"name": "late", "center": [0.4, 0.0, 0.1], "half_extent": [0.05, 0.05, 0.05]}},
    ]
    scn = load_scenario(write_scenario(scenario_doc))

    assert [e.iteration for e in scn.events] == [2]
    assert scn.obstacles_at(1) == []
    assert [o.name for o in scn.obstacles_at(2)] == ["late"]


def test_negative_event_iteration(scenario_doc, write_scenario):
    scenario_doc["events"] = [
        {"iteration": -1, "obstacle": {"center": [0.4, 0.0, 0.1], "half_extent": [0.05, 0.05, 0.05]}},
    ]

    with pytest.raises(ScenarioError, match="nonnegative"):
        load_scenario(write_scenario(scenario_doc))


def test_sigma_bounds_can_be_estimated(scenario_doc, write_scenario):
    del scenario_doc["controller"]["sigma_m"]
    scenario_doc["controller"]["sigma_M"] = "estimate"
    scenario_doc["controller"]["sigma_samples"] = 500

    scn = load_scenario(write_scenario(scenario_doc))

    assert scn.sigma_samples == 500
    assert 0 < scn.controller.sigma_m <= scn.controller.sigma_M


def test_parse_without_path_uses_document_name(scenario_doc):
    scn = parse_scenario(json.dumps(scenario_doc))

    assert scn.name == "planar_tray"


def test_digest_tracks_file_content(scenario_doc, write_scenario):
    path = write_scenario(scenario_doc)
    before = scenario_digest(path)
    scenario_doc["planner"]["max_iterations"] = 4
    write_scenario(scenario_doc)

    assert scenario_digest(path) != before
    assert len(before) == 64
    assert scenario_digest(bundled_scenario_path()) == scenario_digest(bundled_scenario_path())
    assert load_bundled().name == DEFAULT_SCENARIO
