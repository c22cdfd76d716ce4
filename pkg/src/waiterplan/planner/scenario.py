"""In-memory description of one planning problem."""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ..config import (
    DEFAULT_CONSTRAINT_MARGIN,
    DEFAULT_DT,
    DEFAULT_ETA_SCALE,
    DEFAULT_GOAL_TOLERANCE,
    DEFAULT_HLP_STEP,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_MAX_TERMS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_SOLVER_INNER_ITERATIONS,
    DEFAULT_SOLVER_OUTER_ITERATIONS,
    DEFAULT_T_FINAL,
    DEFAULT_T_PLAN,
    DEFAULT_TAYLOR_DEGREE,
)
from ..contact import ContactModel
from ..controller import ControllerConfig, TrackingBounds, tracking_bounds
from ..errors import ConfigurationError
from ..kinematics import ExtendedArmModel, Obstacle
from ..traj import TimePartition, time_partition


@dataclass(frozen=True)
class SolverParams:
    """
    Settings of the augmented-Lagrangian parameter search.

    Attributes:
        outer_iterations (int): Multiplier updates per start point.
        inner_iterations (int): Projected-gradient steps per multiplier update.
        margin (float): Constraints are driven to values <= -margin.
        penalty (float): Initial penalty weight.
        penalty_growth (float): Factor applied when the violation stalls.
        restarts (int): Extra seeded random start points.
        seed (int): Seed of the random start points.
        time_budget (Optional[float]): Seconds per solve; None means t_p.
        enforce_budget (bool): Stop between outer iterations once over budget.
    """
    outer_iterations: int = DEFAULT_SOLVER_OUTER_ITERATIONS
    inner_iterations: int = DEFAULT_SOLVER_INNER_ITERATIONS
    margin: float = DEFAULT_CONSTRAINT_MARGIN
    penalty: float = 10.0
    penalty_growth: float = 10.0
    restarts: int = 2
    seed: int = DEFAULT_SEED
    time_budget: Optional[float] = None
    enforce_budget: bool = False

    def __post_init__(self):
        if self.outer_iterations < 1 or self.inner_iterations < 1:
            raise ConfigurationError("solver iteration counts must be positive")
        if self.penalty <= 0 or self.penalty_growth < 1:
            raise ConfigurationError("penalty must be positive and its growth at least 1")
        if self.margin < 0 or self.restarts < 0:
            raise ConfigurationError("margin and restarts must be nonnegative")


@dataclass(frozen=True)
class ObstacleEvent:
    """An obstacle that exists from planning iteration ``iteration`` onwards."""
    iteration: int
    obstacle: Obstacle


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    Everything receding_horizon needs: the arm, the carried object, the
    world and the tuning of every stage.

    Attributes:
        model (ExtendedArmModel): Arm extended by the tray and object link.
        contact (ContactModel): Friction and support of the object.
        controller (ControllerConfig): Robust controller constants.
        start (np.ndarray): Start configuration, reached at rest.
        goal (np.ndarray): Goal configuration.
        obstacles (Tuple[Obstacle, ...]): Obstacles present from the start.
        events (Tuple[ObstacleEvent, ...]): Obstacles appearing later.
        eta1 (np.ndarray): Final-position scale of the trajectory family.
        sigma_samples (int): Configurations sampled to estimate the eigenvalue
            bounds, 0 when both were given.
    """
    model: ExtendedArmModel
    contact: ContactModel
    controller: ControllerConfig
    start: np.ndarray
    goal: np.ndarray
    obstacles: Tuple[Obstacle, ...] = ()
    events: Tuple[ObstacleEvent, ...] = ()
    eta1: Optional[np.ndarray] = None
    dt: float = DEFAULT_DT
    t_plan: float = DEFAULT_T_PLAN
    t_final: float = DEFAULT_T_FINAL
    solver: SolverParams = field(default_factory=SolverParams)
    hlp_step: float = DEFAULT_HLP_STEP
    goal_tolerance: float = DEFAULT_GOAL_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    taylor_degree: int = DEFAULT_TAYLOR_DEGREE
    max_terms: int = DEFAULT_MAX_TERMS
    verify_samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    name: str = "scenario"
    sigma_samples: int = 0

    def __post_init__(self):
        n = self.model.n_q
        start = np.asarray(self.start, dtype=float).reshape(-1)
        goal = np.asarray(self.goal, dtype=float).reshape(-1)
        if start.size != n or goal.size != n:
            raise ConfigurationError(f"start and goal need {n} joint values, got {start.size} and {goal.size}")
        if not self.model.within_limits(start):
            raise ConfigurationError(f"start {start} violates the joint limits")
        if not self.model.within_limits(goal):
            raise ConfigurationError(f"goal {goal} violates the joint limits")
        if self.controller.kr.size not in (1, n):
            raise ConfigurationError(f"controller has {self.controller.kr.size} gains for {n} joints")
        eta1 = np.full(n, DEFAULT_ETA_SCALE) if self.eta1 is None else np.asarray(self.eta1, dtype=float)
        eta1 = np.broadcast_to(eta1, (n,)).copy()
        if np.any(eta1 <= 0):
            raise ConfigurationError(f"eta1 must be positive, got {eta1}")
        if self.hlp_step <= 0 or self.goal_tolerance <= 0 or self.max_iterations < 1:
            raise ConfigurationError("hlp_step, goal_tolerance and max_iterations must be positive")
        time_partition(self.dt, self.t_final, self.t_plan)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "goal", goal)
        object.__setattr__(self, "eta1", eta1)
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "events", tuple(sorted(self.events, key=lambda e: e.iteration)))

    @property
    def partition(self) -> TimePartition:
        return time_partition(self.dt, self.t_final, self.t_plan)[0]

    @property
    def tracking(self) -> TrackingBounds:
        return tracking_bounds(self.controller)

    @property
    def n_obstacles(self) -> int:
        return len(self.obstacles) + len(self.events)

    def obstacles_at(self, iteration: int) -> List[Obstacle]:
        """Obstacles present during planning iteration ``iteration`` (0-based)."""
        return list(self.obstacles) + [e.obstacle for e in self.events if e.iteration <= iteration]

    def with_changes(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def constraint_count(self, n_obstacles: Optional[int] = None) -> int:
        """n_t (3 + n_links n_O) for the given obstacle count."""
        n_o = len(self.obstacles) if n_obstacles is None else n_obstacles
        return self.partition.n_intervals * (3 + self.model.n_links * n_o)

