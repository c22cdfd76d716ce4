"""Per-iteration constraint construction, parameter search and the receding-horizon loop."""

from .problem import (
    ConstraintInfo,
    ConstraintKind,
    IntervalReach,
    IterationProblem,
    KEvaluation,
    SupPolynomials,
    build_iteration,
    eval_k,
    hlp_waypoint,
    interval_reach,
)
from .receding import CommittedSegment, IterationRecord, Outcome, PlanLog, receding_horizon
from .scenario import ObstacleEvent, Scenario, SolverParams
from .solver import PlanResult, PlanStatus, family_maxima, least_squares_target, solve

__all__ = [
    'CommittedSegment',
    'ConstraintInfo',
    'ConstraintKind',
    'IntervalReach',
    'IterationProblem',
    'IterationRecord',
    'KEvaluation',
    'ObstacleEvent',
    'Outcome',
    'PlanLog',
    'PlanResult',
    'PlanStatus',
    'Scenario',
    'SolverParams',
    'SupPolynomials',
    'build_iteration',
    'eval_k',
    'family_maxima',
    'hlp_waypoint',
    'interval_reach',
    'least_squares_target',
    'receding_horizon',
    'solve',
]
