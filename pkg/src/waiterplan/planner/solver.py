"""Augmented-Lagrangian search for a feasible trajectory parameter."""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from .problem import ConstraintKind, IterationProblem, KEvaluation, eval_k
from .scenario import SolverParams

logger = logging.getLogger(__name__)

_ARMIJO = 1e-4
_MIN_STEP = 1e-12
_MAX_STEP = 1e3
_STATIONARY_TOL = 1e-10
_UPDATE_TOL0 = 0.1
_UPDATE_ALPHA = 0.1
_UPDATE_BETA = 0.9
_MAX_PENALTY = 1e8


class PlanStatus(str, Enum):
    FEASIBLE = "feasible"
    BRAKING = "braking"


@dataclass(frozen=True, eq=False)
class PlanResult:
    """
    Outcome of one solve.

    Attributes:
        status (PlanStatus): FEASIBLE carries k; BRAKING means no certified k.
        k (Optional[np.ndarray]): The certified parameter, or None.
        cost (float): Cost at k, or at the last iterate for BRAKING.
        constraint_max (Dict[str, float]): Largest constraint value per family.
        solve_time (float): Wall-clock seconds.
        overrun (bool): Whether the solve exceeded its time budget.
        iterations (int): Outer iterations performed over all start points.
    """
    status: PlanStatus
    k: Optional[np.ndarray]
    cost: float
    constraint_max: Dict[str, float] = field(default_factory=dict)
    solve_time: float = 0.0
    overrun: bool = False
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == PlanStatus.FEASIBLE


def family_maxima(problem: IterationProblem, values: np.ndarray) -> Dict[str, float]:
    """Largest constraint value of each family present in the problem."""
    kinds = problem.kinds()
    return {
        kind.value: float(values[kinds == kind.value].max())
        for kind in ConstraintKind
        if np.any(kinds == kind.value)
    }


def least_squares_target(problem: IterationProblem) -> np.ndarray:
    """The k moving q_d(t_p) closest to the waypoint, clamped to the box."""
    slope = problem.cost_slope
    safe = np.where(slope != 0.0, slope, 1.0)
    k = np.where(slope != 0.0, (problem.waypoint - problem.cost_offset) / safe, 0.0)
    return np.clip(k, -1.0, 1.0)


def start_points(problem: IterationProblem, params: SolverParams) -> List[np.ndarray]:
    rng = np.random.default_rng(params.seed)
    points = [least_squares_target(problem), np.zeros(problem.n_k)]
    points.extend(rng.uniform(-1.0, 1.0, problem.n_k) for _ in range(params.restarts))
    return points


class _Lagrangian:
    """Powell-Hestenes-Rockafellar augmented Lagrangian of g(k) + margin <= 0."""

    def __init__(self, problem: IterationProblem, margin: float):
        self.problem = problem
        self.margin = margin

    def __call__(self, k: np.ndarray, lam: np.ndarray, penalty: float):
        ev = eval_k(self.problem, k)
        g = ev.values + self.margin
        shifted = np.maximum(0.0, lam + penalty * g)
        value = ev.cost + (shifted @ shifted - lam @ lam) / (2.0 * penalty)
        grad = ev.cost_grad + shifted @ ev.grads
        return value, grad


def _projected_descent(lagrangian: _Lagrangian, k, lam, penalty, iterations: int) -> np.ndarray:
    value, grad = lagrangian(k, lam, penalty)
    step = 1.0
    for _ in range(iterations):
        while step > _MIN_STEP:
            candidate = np.clip(k - step * grad, -1.0, 1.0)
            move = candidate - k
            new_value, new_grad = lagrangian(candidate, lam, penalty)
            if new_value <= value + _ARMIJO * (grad @ move):
                break
            step *= 0.5
        else:
            return k
        k, value, grad = candidate, new_value, new_grad
        if move @ move < _STATIONARY_TOL ** 2:
            break
        step = min(2.0 * step, _MAX_STEP)
    return k


def solve(
    problem: IterationProblem,
    params: Optional[SolverParams] = None,
) -> PlanResult:
    """
    Search k in [-1, 1]^n minimizing the cost subject to every constraint <= 0.

    Each start point (clamped least-squares target, zero, then seeded random
    points) runs an augmented-Lagrangian loop whose subproblems are solved
    by projected gradient with Armijo backtracking. The lowest-cost iterate
    with every constraint value <= 0 is kept, re-evaluated, and returned as
    FEASIBLE only if that re-evaluation still certifies it; otherwise the
    result is BRAKING. Start points after the first one that yields a
    feasible iterate are skipped.

    The time budget (params.time_budget, else t_p) is soft: exceeding it is
    recorded, and the search stops early only when params.enforce_budget
    is set, checked before each outer iteration.
    """
    params = params or SolverParams()
    budget = problem.partition.t_plan if params.time_budget is None else params.time_budget
    started = time.perf_counter()
    lagrangian = _Lagrangian(problem, params.margin)
    n_c = problem.n_constraints

    best_k, best_cost = None, np.inf
    last: Optional[KEvaluation] = None
    outer_total = 0
    timed_out = False
    for start in start_points(problem, params):
        k = start
        lam = np.zeros(n_c)
        penalty = params.penalty
        update_tol = _UPDATE_TOL0 / penalty ** _UPDATE_ALPHA
        for _ in range(params.outer_iterations):
            if params.enforce_budget and time.perf_counter() - started >= budget:
                timed_out = True
                break
            outer_total += 1
            previous = k
            k = _projected_descent(lagrangian, k, lam, penalty, params.inner_iterations)
            last = eval_k(problem, k, gradient=False)
            if np.all(last.values <= 0.0) and last.cost < best_cost:
                best_k, best_cost = k.copy(), last.cost
            g = last.values + params.margin
            violation = float(np.max(np.abs(np.maximum(g, -lam / penalty)), initial=0.0))
            if violation <= update_tol:
                lam = np.maximum(0.0, lam + penalty * g)
                update_tol /= penalty ** _UPDATE_BETA
                if np.all(g <= 0.0) and np.linalg.norm(k - previous) < _STATIONARY_TOL:
                    break
            else:
                penalty = min(penalty * params.penalty_growth, _MAX_PENALTY)
                update_tol = _UPDATE_TOL0 / penalty ** _UPDATE_ALPHA
        if timed_out or best_k is not None:
            break

    elapsed = time.perf_counter() - started
    overrun = elapsed > budget
    if overrun:
        logger.warning("solve took %.3f s, over the %.3f s planning budget", elapsed, budget)

    if best_k is not None:
        check = eval_k(problem, best_k, gradient=False)
        if np.all(check.values <= 0.0):
            return PlanResult(PlanStatus.FEASIBLE, best_k, check.cost, family_maxima(problem, check.values),
                              elapsed, overrun, outer_total)
        logger.warning("re-evaluation rejected the feasible iterate; braking")
        last = check
    if last is None:
        last = eval_k(problem, least_squares_target(problem), gradient=False)
    return PlanResult(PlanStatus.BRAKING, None, last.cost, family_maxima(problem, last.values),
                      elapsed, overrun, outer_total)
