"""Loading and validating versioned JSON scenario files."""

import hashlib
import json
import logging
import re
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import numpy as np

from ..config import DEFAULT_ETA_SCALE, DEFAULT_SIGMA_SAMPLES
from ..contact import ContactModel
from ..controller import ControllerConfig
from ..dynamics import estimate_sigma_bounds
from ..errors import ScenarioError, WaiterPlanError
from ..kinematics import N_PARAMS, ExtendedArmModel, JointKind, JointModel, Obstacle
from ..planner import ObstacleEvent, Scenario, SolverParams
from ..setops import Zonotope

logger = logging.getLogger(__name__)

SCENARIO_VERSION = 1
ESTIMATE = "estimate"
BUNDLED_DIR = Path(__file__).parent / "data"
DEFAULT_SCENARIO = "desk_tray_3dof"

PathItem = Union[str, int]


class _Document:
    """
    A parsed scenario with its source text, for line-precise errors.

    Values are fetched by key path; a missing or malformed value raises
    ScenarioError pointing at the line of the closest enclosing key.
    """

    def __init__(self, text: str, path: Optional[Path]):
        self.text = text
        self.path = path
        try:
            self.root = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"invalid JSON: {e.msg}", path, e.lineno) from e
        if not isinstance(self.root, dict):
            raise ScenarioError("a scenario must be a JSON object", path, 1)

    def line_of(self, keys: Sequence[PathItem]) -> int:
        """Line of the last string key of ``keys``, found in order through the text."""
        position = 0
        for key in keys:
            if not isinstance(key, str):
                continue
            match = re.compile(r'"%s"\s*:' % re.escape(key)).search(self.text, position)
            if match is None:
                break
            position = match.start()
        return self.text.count("\n", 0, position) + 1

    def error(self, keys: Sequence[PathItem], message: str) -> ScenarioError:
        where = ".".join(str(k) for k in keys) or "<root>"
        return ScenarioError(f"{where}: {message}", self.path, self.line_of(keys))

    def get(self, keys: Sequence[PathItem], default: Any = ..., kind=None) -> Any:
        node = self.root
        for n, key in enumerate(keys):
            try:
                node = node[key]
            except (KeyError, IndexError, TypeError):
                if default is not ...:
                    return default
                raise self.error(keys[:n + 1], "missing required value") from None
        if kind is not None and not isinstance(node, kind):
            raise self.error(keys, f"expected {getattr(kind, '__name__', kind)}, got {type(node).__name__}")
        return node

    def number(self, keys: Sequence[PathItem], default: Any = ...) -> float:
        value = self.get(keys, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(keys, f"expected a number, got {value!r}")
        return float(value)

    def integer(self, keys: Sequence[PathItem], default: Any = ...) -> int:
        value = self.get(keys, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(keys, f"expected an integer, got {value!r}")
        return value

    def array(self, keys: Sequence[PathItem], shape: tuple = None, default: Any = ...) -> np.ndarray:
        value = self.get(keys, default)
        try:
            arr = np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise self.error(keys, "expected numbers") from None
        if shape is not None and arr.shape != shape:
            raise self.error(keys, f"expected shape {shape}, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise self.error(keys, "values must be finite")
        return arr

    def vector(self, keys: Sequence[PathItem], size: int, default: Any = ...) -> np.ndarray:
        """A scalar broadcast to ``size`` entries, or a list of exactly ``size``."""
        arr = self.array(keys, default=default)
        if arr.ndim == 0:
            return np.full(size, float(arr))
        if arr.shape != (size,):
            raise self.error(keys, f"expected a number or {size} numbers, got shape {arr.shape}")
        return arr


def _zonotope(doc: _Document, keys: List[PathItem]) -> Zonotope:
    center = doc.array(keys + ["center"], (3,))
    if doc.get(keys + ["half_extent"], None) is not None:
        return Zonotope(center, np.diag(doc.array(keys + ["half_extent"], (3,))))
    generators = doc.array(keys + ["generators"])
    if generators.ndim != 2 or generators.shape[1] != 3:
        raise doc.error(keys + ["generators"], f"expected a list of 3-vectors, got shape {generators.shape}")
    return Zonotope(center, generators)


def _obstacle(doc: _Document, keys: List[PathItem], index: int) -> Obstacle:
    name = doc.get(keys + ["name"], f"obstacle{index}", str)
    return Obstacle.from_zonotope(_zonotope(doc, keys), name)


def _joint(doc: _Document, keys: List[PathItem]) -> JointModel:
    kind = doc.get(keys + ["type"], kind=str)
    if kind not in ("revolute", "fixed"):
        raise doc.error(keys + ["type"], f"unknown joint type {kind!r}; expected 'revolute' or 'fixed'")
    return JointModel(
        kind=JointKind.REVOLUTE if kind == "revolute" else JointKind.FIXED,
        axis=doc.array(keys + ["axis"], (3,), [0.0, 0.0, 1.0]),
        offset=doc.array(keys + ["offset"], (3,), [0.0, 0.0, 0.0]),
        rotation=doc.array(keys + ["rotation"], (3, 3), np.eye(3).tolist()),
    )


def _inertia(doc: _Document, keys: List[PathItem]):
    """Nominal, lower and upper parameters of one link; 'relative' widens around the nominal."""
    nominal = doc.array(keys + ["nominal"], (N_PARAMS,))
    if doc.get(keys + ["relative"], None) is not None:
        spread = np.abs(nominal) * doc.vector(keys + ["relative"], N_PARAMS)
        return nominal, nominal - spread, nominal + spread
    lower = doc.array(keys + ["lower"], (N_PARAMS,), nominal.tolist())
    upper = doc.array(keys + ["upper"], (N_PARAMS,), nominal.tolist())
    if np.any(lower > upper):
        raise doc.error(keys, "inertial interval with lower > upper")
    if np.any(nominal < lower) or np.any(nominal > upper):
        raise doc.error(keys + ["nominal"], "nominal parameters must lie inside [lower, upper]")
    return nominal, lower, upper


def _model(doc: _Document, name: str) -> ExtendedArmModel:
    joints = doc.get(["robot", "joints"], kind=list)
    links = doc.get(["robot", "links"], kind=list)
    if len(links) != len(joints):
        raise doc.error(["robot", "links"], f"{len(links)} links for {len(joints)} joints")
    parsed_joints = [_joint(doc, ["robot", "joints", j]) for j in range(len(joints))]
    volumes, nominal, lower, upper = [], [], [], []
    for j in range(len(links)):
        volumes.append(_zonotope(doc, ["robot", "links", j, "volume"]))
        n, lo, hi = _inertia(doc, ["robot", "links", j, "inertia"])
        nominal.append(n)
        lower.append(lo)
        upper.append(hi)
    limits = None
    if doc.get(["robot", "joint_limits"], None) is not None:
        n_q = sum(1 for joint in parsed_joints if joint.is_revolute)
        limits = (doc.array(["robot", "joint_limits", "lower"], (n_q,)),
                  doc.array(["robot", "joint_limits", "upper"], (n_q,)))
    return ExtendedArmModel(tuple(parsed_joints), tuple(volumes), np.array(nominal), np.array(lower),
                            np.array(upper), limits, name)


def _sigma(doc: _Document, key: str, model: ExtendedArmModel, estimated: dict) -> float:
    value = doc.get(["controller", key], ESTIMATE)
    if value == ESTIMATE:
        if not estimated:
            samples = doc.integer(["controller", "sigma_samples"], DEFAULT_SIGMA_SAMPLES)
            seed = doc.integer(["solver", "seed"], 0)
            estimated["bounds"] = estimate_sigma_bounds(model, samples, seed)
            estimated["samples"] = samples
            logger.info("estimated mass-matrix eigenvalue bounds %.4g..%.4g from %d samples",
                        *estimated["bounds"], samples)
        return estimated["bounds"][0 if key == "sigma_m" else 1]
    return doc.number(["controller", key])


def parse_scenario(text: str, path: Optional[Path] = None) -> Scenario:
    """
    Build a Scenario from scenario JSON text.

    Raises:
        ScenarioError: For malformed JSON, unsupported versions, missing or
            ill-typed values and values the model rejects, with the file
            path and the line of the offending key.
    """
    doc = _Document(text, path)
    version = doc.get(["version"], kind=int)
    if version != SCENARIO_VERSION:
        raise doc.error(["version"], f"unsupported scenario version {version}; expected {SCENARIO_VERSION}")
    name = doc.get(["name"], Path(path).stem if path else "scenario", str)

    try:
        model = _model(doc, name)
    except ScenarioError:
        raise
    except WaiterPlanError as e:
        raise doc.error(["robot"], str(e)) from e
    n = model.n_q

    try:
        contact = ContactModel(
            doc.number(["object", "mu"]),
            doc.number(["object", "radius"]),
            doc.array(["object", "normal"], (3,), [0.0, 0.0, 1.0]),
        )
    except WaiterPlanError as e:
        raise doc.error(["object"], str(e)) from e

    estimated: dict = {}
    try:
        controller = ControllerConfig(
            kr=doc.vector(["controller", "kr"], n),
            sigma_m=_sigma(doc, "sigma_m", model, estimated),
            sigma_M=_sigma(doc, "sigma_M", model, estimated),
            v_max=doc.number(["controller", "v_max"]),
            alpha_c=doc.number(["controller", "alpha_c"], 1.0),
        )
    except ScenarioError:
        raise
    except WaiterPlanError as e:
        raise doc.error(["controller"], str(e)) from e

    obstacles = [_obstacle(doc, ["obstacles", o], o) for o in range(len(doc.get(["obstacles"], [], list)))]
    events = []
    for e in range(len(doc.get(["events"], [], list))):
        iteration = doc.integer(["events", e, "iteration"])
        if iteration < 0:
            raise doc.error(["events", e, "iteration"], "event iterations must be nonnegative")
        events.append(ObstacleEvent(iteration, _obstacle(doc, ["events", e, "obstacle"], len(obstacles) + e)))

    try:
        solver = SolverParams(
            outer_iterations=doc.integer(["solver", "outer_iterations"], SolverParams.outer_iterations),
            inner_iterations=doc.integer(["solver", "inner_iterations"], SolverParams.inner_iterations),
            margin=doc.number(["solver", "margin"], SolverParams.margin),
            penalty=doc.number(["solver", "penalty"], SolverParams.penalty),
            restarts=doc.integer(["solver", "restarts"], SolverParams.restarts),
            seed=doc.integer(["solver", "seed"], SolverParams.seed),
            time_budget=(doc.number(["solver", "time_budget"])
                         if doc.get(["solver", "time_budget"], None) is not None else None),
            enforce_budget=doc.get(["solver", "enforce_budget"], False, bool),
        )
        scenario = Scenario(
            model=model,
            contact=contact,
            controller=controller,
            start=doc.array(["start"], (n,)),
            goal=doc.array(["goal"], (n,)),
            obstacles=tuple(obstacles),
            events=tuple(events),
            eta1=doc.vector(["trajectory", "eta1"], n, DEFAULT_ETA_SCALE),
            dt=doc.number(["partition", "dt"], Scenario.dt),
            t_plan=doc.number(["partition", "t_plan"], Scenario.t_plan),
            t_final=doc.number(["partition", "t_final"], Scenario.t_final),
            solver=solver,
            hlp_step=doc.number(["planner", "hlp_step"], Scenario.hlp_step),
            goal_tolerance=doc.number(["planner", "goal_tolerance"], Scenario.goal_tolerance),
            max_iterations=doc.integer(["planner", "max_iterations"], Scenario.max_iterations),
            taylor_degree=doc.integer(["reach", "taylor_degree"], Scenario.taylor_degree),
            max_terms=doc.integer(["reach", "max_terms"], Scenario.max_terms),
            verify_samples=doc.integer(["verify", "samples"], Scenario.verify_samples),
            seed=doc.integer(["solver", "seed"], Scenario.seed),
            name=name,
            sigma_samples=estimated.get("samples", 0),
        )
    except ScenarioError:
        raise
    except WaiterPlanError as e:
        raise doc.error([], str(e)) from e
    return scenario


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and parse a scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"cannot read scenario: {e.strerror}", path) from e
    return parse_scenario(text, path)


def scenario_digest(path: Union[str, Path]) -> str:
    """SHA-256 of the scenario file, recorded in plan logs."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def bundled_scenario_path(name: str = DEFAULT_SCENARIO) -> Path:
    path = BUNDLED_DIR / f"{name}.json"
    if not path.is_file():
        available = sorted(p.stem for p in BUNDLED_DIR.glob("*.json"))
        raise ScenarioError(f"no bundled scenario {name!r}; available: {', '.join(available)}")
    return path


def load_bundled(name: str = DEFAULT_SCENARIO) -> Scenario:
    return load_scenario(bundled_scenario_path(name))
