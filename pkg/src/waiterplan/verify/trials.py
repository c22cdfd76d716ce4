"""Randomised desk-scale scenarios for planning property trials."""

from dataclasses import replace
from typing import List, Optional

import numpy as np

from ..errors import ConfigurationError
from ..kinematics import Obstacle, fo
from ..planner import Scenario
from ..scenario import load_bundled

_CLEARANCE = 0.02
_MAX_DRAWS = 200


def _clear_of(scn: Scenario, obstacle: Obstacle, configurations: List[np.ndarray]) -> bool:
    return all(
        obstacle.separation(occupancy) < -_CLEARANCE
        for q in configurations
        for occupancy in fo(scn.model, q)
    )


def random_trial_scenario(
    seed: int,
    base: Optional[Scenario] = None,
    n_obstacles: int = 2,
    goal_spread: float = 0.15,
    max_iterations: int = 10,
) -> Scenario:
    """
    Randomised variant of the bundled desk scenario.

    The start is drawn inside the central part of the joint range, the goal
    within ``goal_spread`` rad of it per joint, and each box obstacle on the
    desk around the base, redrawn until it clears the arm at both start and
    goal by 2 cm.

    Raises:
        ConfigurationError: If no obstacle placement clears the arm.
    """
    base = base or load_bundled()
    rng = np.random.default_rng(seed)
    n = base.model.n_q
    if base.model.joint_limits is not None:
        lo, hi = base.model.joint_limits
    else:
        lo, hi = np.full(n, -np.pi), np.full(n, np.pi)
    middle, half = (lo + hi) / 2.0, (hi - lo) / 4.0
    start = middle + rng.uniform(-1.0, 1.0, n) * half
    goal = np.clip(start + rng.uniform(-goal_spread, goal_spread, n), lo, hi)

    obstacles = []
    for o in range(n_obstacles):
        for _ in range(_MAX_DRAWS):
            angle = rng.uniform(-np.pi, np.pi)
            radius = rng.uniform(0.3, 0.75)
            center = np.array([radius * np.cos(angle), radius * np.sin(angle), 0.1])
            candidate = Obstacle.box(center, rng.uniform(0.02, 0.06, 3), name=f"box{o}")
            if _clear_of(base, candidate, [start, goal]):
                obstacles.append(candidate)
                break
        else:
            raise ConfigurationError(f"could not place obstacle {o} clear of the arm for seed {seed}")

    solver = replace(base.solver, seed=seed)
    return base.with_changes(
        start=start,
        goal=goal,
        obstacles=tuple(obstacles),
        events=(),
        solver=solver,
        max_iterations=max_iterations,
        seed=seed,
        name=f"{base.name}-trial{seed}",
    )
