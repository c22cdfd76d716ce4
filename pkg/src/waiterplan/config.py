"""Configuration defaults and the run-level Config class for waiterplan."""

import math
import os
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError

# Polynomial zonotope arithmetic
DEFAULT_TAYLOR_DEGREE = 6
DEFAULT_MAX_TERMS = 40
ZERO_COEFFICIENT_TOL = 1e-14

# Trajectory family
DEFAULT_DT = 0.05
DEFAULT_T_PLAN = 1.0
DEFAULT_T_FINAL = 2.0
DEFAULT_ETA_SCALE = math.pi / 72

# Robust controller
DEFAULT_V_MAX = 2.0e-2
DEFAULT_KR = 4.0
DEFAULT_ALPHA_C = 1.0
GRAVITY = 9.81

# Planning
DEFAULT_GOAL_TOLERANCE = 0.05
DEFAULT_MAX_ITERATIONS = 100
DEFAULT_HLP_STEP = 0.1
DEFAULT_SOLVER_OUTER_ITERATIONS = 30
DEFAULT_SOLVER_INNER_ITERATIONS = 60
DEFAULT_CONSTRAINT_MARGIN = 1e-6

# Verification
DEFAULT_DT_SIM = 1e-3
DEFAULT_SAMPLES = 10_000
DEFAULT_SIGMA_SAMPLES = 100_000
DEFAULT_SEED = 0

THREADS_ENV_VAR = "WAITERPLAN_THREADS"


def worker_count(override: Optional[int] = None) -> int:
    """
    Number of workers for per-interval construction.

    Args:
        override: Explicit worker count; takes precedence over the environment.

    Returns:
        The worker count, at least 1.

    Raises:
        ConfigurationError: If the environment variable is not a positive integer.
    """
    if override is not None:
        if override < 1:
            raise ConfigurationError(f"worker count must be positive, got {override}")
        return override
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return max(1, min(8, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be positive, got {value}")
    return value


class Config:
    """
    Holds the settings for one waiterplan command-line run.

    Attributes:
        scenario_path (Path): Scenario JSON file.
        log_path (Optional[Path]): Plan log to write (plan) or read (verify).
        seed (Optional[int]): Seed for every random draw; None keeps the scenario's.
        samples (Optional[int]): Sample count for verification audits; None keeps the scenario's.
        interval (int): Subinterval whose reachable sets are dumped.
        containment (bool): Also run the containment audit when verifying.
        dump_path (Optional[Path]): Destination of a WPZ1 reachable-set dump.
        max_iterations (Optional[int]): Override of the scenario's iteration cap.
        dt (Optional[float]): Override of the scenario's partition step.
        dt_sim (float): Closed-loop simulation step.
        quiet (bool): Suppress progress output.
        csv_path (Optional[Path]): Optional CSV time series of a simulation.
        report_path (Optional[Path]): Optional text copy of the verification summary.
    """

    def __init__(
        self,
        scenario_path: Path,
        log_path: Optional[Path] = None,
        seed: Optional[int] = None,
        samples: Optional[int] = None,
        interval: int = 0,
        containment: bool = False,
        dump_path: Optional[Path] = None,
        max_iterations: Optional[int] = None,
        dt: Optional[float] = None,
        dt_sim: float = DEFAULT_DT_SIM,
        quiet: bool = False,
        csv_path: Optional[Path] = None,
        report_path: Optional[Path] = None,
    ):
        self.scenario_path = scenario_path
        self.log_path = log_path
        self.seed = seed
        self.samples = samples
        self.interval = interval
        self.containment = containment
        self.dump_path = dump_path
        self.max_iterations = max_iterations
        self.dt = dt
        self.dt_sim = dt_sim
        self.quiet = quiet
        self.csv_path = csv_path
        self.report_path = report_path

    def __repr__(self) -> str:
        """Provides a developer-friendly string representation of the Config object."""
        return (
            f"{self.__class__.__name__}("
            f"scenario_path={self.scenario_path!r}, "
            f"log_path={self.log_path!r}, "
            f"seed={self.seed!r}, "
            f"samples={self.samples!r}, "
            f"interval={self.interval!r}, "
            f"containment={self.containment!r}, "
            f"dump_path={self.dump_path!r}, "
            f"max_iterations={self.max_iterations!r}, "
            f"dt={self.dt!r}, "
            f"dt_sim={self.dt_sim!r}, "
            f"quiet={self.quiet!r}, "
            f"csv_path={self.csv_path!r}, "
            f"report_path={self.report_path!r}"
            ")"
        )
