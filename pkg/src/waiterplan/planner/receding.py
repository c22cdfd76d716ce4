"""Receding-horizon loop with the braking fallback."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from ..traj import BernsteinTrajectory, InitialCondition, bernstein_from_ic, eval_desired
from .problem import build_iteration, hlp_waypoint
from .scenario import Scenario
from .solver import PlanResult, solve

logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    GOAL_REACHED = "goal_reached"
    SAFE_STOP = "safe_stop"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True, eq=False)
class CommittedSegment:
    """
    The part [t_start, t_end] of one plan that the arm executes.

    Attributes:
        iteration (int): Iteration whose plan this is.
        ic (InitialCondition): The plan's desired initial condition.
        k (np.ndarray): The plan's parameter.
        eta1, eta2 (np.ndarray): The plan's final-position map.
        t_final (float): The plan's horizon.
        t_start, t_end (float): Executed time range within the plan.
        braking (bool): True for the tail of a plan executed as a stop.
    """
    iteration: int
    ic: InitialCondition
    k: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    t_final: float
    t_start: float
    t_end: float
    braking: bool = False

    def trajectory(self) -> BernsteinTrajectory:
        return bernstein_from_ic(self.ic, self.k, self.eta1, self.eta2, self.t_final)

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True, eq=False)
class IterationRecord:
    index: int
    ic: InitialCondition
    waypoint: np.ndarray
    result: PlanResult
    n_constraints: int
    build_time: float
    segment: Optional[CommittedSegment]


@dataclass(eq=False)
class PlanLog:
    """Everything one receding-horizon run decided and executed."""
    scenario: str
    records: List[IterationRecord] = field(default_factory=list)
    outcome: Outcome = Outcome.SAFE_STOP
    tail: Optional[CommittedSegment] = None

    @property
    def segments(self) -> List[CommittedSegment]:
        segments = [r.segment for r in self.records if r.segment is not None]
        return segments + ([self.tail] if self.tail is not None else [])

    @property
    def exit_code(self) -> int:
        return 0 if self.outcome == Outcome.GOAL_REACHED else 2

    def final_desired(self) -> Optional[np.ndarray]:
        """Desired position at the end of the executed motion, or None if nothing ran."""
        segments = self.segments
        if not segments:
            return None
        return eval_desired(segments[-1].trajectory(), segments[-1].t_end)[0]


def _segment(index: int, ic: InitialCondition, result: PlanResult, scn: Scenario,
             t_start: float, t_end: float) -> CommittedSegment:
    return CommittedSegment(index, ic, result.k, scn.eta1.copy(), ic.q0.copy(), scn.t_final, t_start, t_end)


def _braking_tail(previous: CommittedSegment, scn: Scenario) -> CommittedSegment:
    return CommittedSegment(previous.iteration, previous.ic, previous.k, previous.eta1, previous.eta2,
                            previous.t_final, scn.t_plan, scn.t_final, braking=True)


def receding_horizon(
    scn: Scenario,
    max_iterations: Optional[int] = None,
    on_iteration: Optional[Callable[[IterationRecord], None]] = None,
) -> PlanLog:
    """
    Plan and commit until the goal, a safe stop, or the iteration cap.

    Each iteration plans over [0, t_fin] from the desired state of the
    previous plan at t_p. A feasible plan commits its first t_p seconds,
    or all of it when its final position is within the goal tolerance.
    An infeasible iteration commits the previous plan's tail [t_p, t_fin],
    which ends at rest, and stops. At the iteration cap the last plan's
    tail is committed the same way.

    Args:
        scn: The scenario; the arm starts at rest at scn.start.
        max_iterations: Overrides scn.max_iterations.
        on_iteration: Called with each record as soon as it is decided.
    """
    cap = scn.max_iterations if max_iterations is None else max_iterations
    log = PlanLog(scenario=scn.name)
    ic = InitialCondition.at_rest(scn.start)
    previous: Optional[CommittedSegment] = None

    def record(rec: IterationRecord):
        log.records.append(rec)
        if on_iteration is not None:
            on_iteration(rec)

    for index in range(cap):
        waypoint = hlp_waypoint(ic.q0, scn.goal, scn.hlp_step)
        problem = build_iteration(scn, ic, waypoint, scn.obstacles_at(index))
        result = solve(problem, scn.solver)
        logger.info(
            "iteration %d: %s, cost %.3e, %d constraints, build %.2f s, solve %.2f s",
            index, result.status.value, result.cost, problem.n_constraints, problem.build_time, result.solve_time,
        )
        if not result.feasible:
            segment = None
            if previous is not None:
                segment = _braking_tail(previous, scn)
            record(IterationRecord(index, ic, waypoint, result, problem.n_constraints, problem.build_time, segment))
            log.outcome = Outcome.SAFE_STOP
            logger.info("no certified plan at iteration %d; braking to a stop", index)
            return log

        trajectory = problem.trajectory(result.k)
        if np.max(np.abs(trajectory.final_position - scn.goal)) <= scn.goal_tolerance:
            segment = _segment(index, ic, result, scn, 0.0, scn.t_final)
            record(IterationRecord(index, ic, waypoint, result, problem.n_constraints, problem.build_time, segment))
            log.outcome = Outcome.GOAL_REACHED
            logger.info("goal reached at iteration %d", index)
            return log

        segment = _segment(index, ic, result, scn, 0.0, scn.t_plan)
        record(IterationRecord(index, ic, waypoint, result, problem.n_constraints, problem.build_time, segment))
        previous = segment
        q, qd, qdd = eval_desired(trajectory, scn.t_plan)
        ic = InitialCondition(q, qd, qdd)

    if previous is not None:
        log.tail = _braking_tail(previous, scn)
    log.outcome = Outcome.ITERATION_CAP
    logger.info("iteration cap %d reached; braking to a stop", cap)
    return log
