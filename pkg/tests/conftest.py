import copy
import json
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"

if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from waiterplan.planner import CommittedSegment, IterationRecord, Outcome, PlanLog, PlanResult, PlanStatus  # noqa: E402
from waiterplan.scenario import load_bundled, load_scenario  # noqa: E402
from waiterplan.traj import InitialCondition  # noqa: E402

# Two revolute joints about z carrying the tray, then the fixed object joint.
# Four subintervals and a low Taylor degree keep set construction fast.
PLANAR_SCENARIO = {
    "version": 1,
    "name": "planar_tray",
    "robot": {
        "joints": [
            {"type": "revolute", "axis": [0, 0, 1], "offset": [0.0, 0.0, 0.1]},
            {"type": "revolute", "axis": [0, 0, 1], "offset": [0.3, 0.0, 0.0]},
            {"type": "fixed", "offset": [0.2, 0.0, 0.01]},
        ],
        "links": [
            {
                "volume": {"center": [0.15, 0.0, 0.0], "half_extent": [0.15, 0.02, 0.02]},
                "inertia": {"nominal": [1.0, 0.15, 0.0, 0.0, 0.0004, 0.008, 0.008, 0.0, 0.0, 0.0]},
            },
            {
                "volume": {"center": [0.1, 0.0, 0.0], "half_extent": [0.12, 0.06, 0.01]},
                "inertia": {"nominal": [0.6, 0.1, 0.0, 0.0, 0.0003, 0.003, 0.003, 0.0, 0.0, 0.0],
                            "relative": 0.05},
            },
            {
                "volume": {"center": [0.0, 0.0, 0.04], "half_extent": [0.025, 0.025, 0.04]},
                "inertia": {"nominal": [0.2, 0.0, 0.0, 0.04, 0.0001, 0.0001, 0.00006, 0.0, 0.0, 0.0],
                            "relative": [0.05, 0.0, 0.0, 0.0, 0.05, 0.05, 0.05, 0.0, 0.0, 0.0]},
            },
        ],
        "joint_limits": {"lower": [-2.8, -2.6], "upper": [2.8, 2.6]},
    },
    "object": {"mu": 0.4, "radius": 0.025, "normal": [0, 0, 1]},
    "obstacles": [],
    "events": [],
    "start": [0.0, 0.5],
    "goal": [0.6, 0.1],
    "partition": {"dt": 0.5, "t_plan": 1.0, "t_final": 2.0},
    "controller": {"kr": 10.0, "v_max": 1.0e-6, "alpha_c": 1.0, "sigma_m": 0.005, "sigma_M": 1.0},
    "solver": {"seed": 0, "outer_iterations": 10, "inner_iterations": 30, "restarts": 0},
    "planner": {"hlp_step": 0.1, "goal_tolerance": 0.05, "max_iterations": 3},
    "reach": {"taylor_degree": 4, "max_terms": 20},
    "verify": {"samples": 200},
}


def _write(path: Path, doc: dict) -> Path:
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path


@pytest.fixture
def scenario_doc():
    """A fresh, editable copy of the planar scenario document."""
    return copy.deepcopy(PLANAR_SCENARIO)


@pytest.fixture
def write_scenario(tmp_path: Path):
    def write(doc: dict, name: str = "scenario.json") -> Path:
        return _write(tmp_path / name, doc)
    return write


@pytest.fixture(scope="session")
def planar_scenario(tmp_path_factory):
    path = _write(tmp_path_factory.mktemp("scenario") / "planar_tray.json", PLANAR_SCENARIO)
    return load_scenario(path)


@pytest.fixture(scope="session")
def planar_model(planar_scenario):
    return planar_scenario.model


@pytest.fixture(scope="session")
def bundled():
    return load_bundled()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_plan_log():
    """Builds a one-iteration log for the planar scenario that ends at the iteration cap."""
    def make(k=(0.25, -0.5), scenario: str = "planar_tray") -> PlanLog:
        ic = InitialCondition.at_rest(PLANAR_SCENARIO["start"])
        eta1 = np.full(2, np.pi / 72)
        k = np.asarray(k, dtype=float)
        segment = CommittedSegment(0, ic, k, eta1, ic.q0.copy(), 2.0, 0.0, 1.0)
        tail = CommittedSegment(0, ic, k, eta1, ic.q0.copy(), 2.0, 1.0, 2.0, braking=True)
        result = PlanResult(PlanStatus.FEASIBLE, k, 1.5e-4, {"sep": -1.2, "slip": -0.3, "tip": -0.01},
                            0.12, False, 7)
        record = IterationRecord(0, ic, np.array([0.05, 0.45]), result, 12, 0.4, segment)
        return PlanLog(scenario, [record], Outcome.ITERATION_CAP, tail)
    return make
