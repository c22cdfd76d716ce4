"""
Per-iteration constraint construction and evaluation over the parameter box.

Every constraint of an iteration is a scalar polynomial zonotope whose
indeterminates split into the trajectory parameters x_k and everything
else (time, tracking errors, inertial parameters, remainders). Slicing x_k
at k and bounding the rest gives

    sup(k) = g_0(k) + sum_m |g_m(k)|

where g_m(k) collects the terms sharing the m-th monomial in the other
indeterminates (m = 0 being the empty monomial). SupPolynomials compiles
that form once so evaluation is a handful of vectorised numpy calls.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import worker_count
from ..contact import ContactConstraints, pz_contact_constraints
from ..controller import pz_input, robust_input_bound
from ..dynamics import RneaInputs, WrenchSet, pz_rnea
from ..errors import DimensionError, DomainError
from ..kinematics import Obstacle, pz_local_rotations, pzfk, pzfo
from ..setops import Interval, PolyZonotope, allocation_scope, parameter_id, pz_bounds
from ..traj import (
    BernsteinTrajectory,
    InitialCondition,
    TimePartition,
    TrackedReach,
    bernstein_from_ic,
    inflate_tracking_error,
    power_coefficients,
    pz_desired,
)
from .scenario import Scenario

logger = logging.getLogger(__name__)

_K_TOL = 1e-12


class ConstraintKind(str, Enum):
    SEPARATION = "sep"
    SLIP = "slip"
    TIP = "tip"
    OBSTACLE = "obs"


@dataclass(frozen=True)
class ConstraintInfo:
    """Where a constraint comes from; link and obstacle are set for obstacle constraints."""
    interval: int
    kind: ConstraintKind
    link: Optional[int] = None
    obstacle: Optional[int] = None


def hlp_waypoint(q_cur: np.ndarray, q_goal: np.ndarray, step: float) -> np.ndarray:
    """
    Straight-line high-level planner: advance at most ``step`` towards the goal.

    Raises:
        DomainError: If step is not positive.
    """
    if step <= 0:
        raise DomainError(f"waypoint step must be positive, got {step}")
    q_cur = np.asarray(q_cur, dtype=float)
    delta = np.asarray(q_goal, dtype=float) - q_cur
    distance = float(np.linalg.norm(delta))
    if distance == 0.0:
        return q_cur.copy()
    return q_cur + min(step / distance, 1.0) * delta


class SupPolynomials:
    """
    Upper bounds of many scalar polynomial zonotopes as functions of k.

    Args:
        rows: Scalar polynomial zonotopes.
        k_ids: The parameter indeterminates, in the order of k.
    """

    def __init__(self, rows: Sequence[PolyZonotope], k_ids: Sequence):
        self.n_rows = len(rows)
        self.n_k = len(k_ids)
        k_set = set(k_ids)
        coeffs, kexps, groups = [], [], []
        group_row, group_const = [], []
        offset = 0
        for r, p in enumerate(rows):
            if p.shape != ():
                raise DimensionError(f"constraint rows must be scalar, got shape {p.shape}")
            n_terms = p.coeffs.shape[0]
            if n_terms == 0:
                continue
            kexp = np.zeros((n_terms, self.n_k), dtype=np.int64)
            for j, kid in enumerate(k_ids):
                if kid in p.ids:
                    kexp[:, j] = p.expmat[:, p.ids.index(kid)]
            other = [c for c, ident in enumerate(p.ids) if ident not in k_set]
            if other:
                patterns, inverse = np.unique(p.expmat[:, other], axis=0, return_inverse=True)
                inverse = np.asarray(inverse).reshape(-1)
                is_const = ~patterns.any(axis=1)
            else:
                inverse = np.zeros(n_terms, dtype=np.int64)
                is_const = np.ones(1, dtype=bool)
            coeffs.append(p.coeffs)
            kexps.append(kexp)
            groups.append(inverse + offset)
            group_row.append(np.full(is_const.size, r))
            group_const.append(is_const)
            offset += is_const.size
        self.n_groups = offset
        if offset:
            self.coeffs = np.concatenate(coeffs)
            self.kexp = np.concatenate(kexps)
            self.groups = np.concatenate(groups)
            self.group_row = np.concatenate(group_row)
            self.group_const = np.concatenate(group_const)
        else:
            self.coeffs = np.zeros(0)
            self.kexp = np.zeros((0, self.n_k), dtype=np.int64)
            self.groups = np.zeros(0, dtype=np.int64)
            self.group_row = np.zeros(0, dtype=np.int64)
            self.group_const = np.zeros(0, dtype=bool)

    def evaluate(self, k: np.ndarray, gradient: bool = True):
        """
        Upper bounds of every row at k, and their (sub)gradients.

        The gradient of |g_m| uses sign(g_m), so it is zero on the kink set
        g_m(k) = 0.

        Returns:
            (values, grads) with shapes (n_rows,) and (n_rows, n_k); grads is
            None when gradient is False.
        """
        k = np.asarray(k, dtype=float)
        powers = k[None, :] ** self.kexp
        mono = np.prod(powers, axis=1)
        g = np.bincount(self.groups, self.coeffs * mono, minlength=self.n_groups)
        contrib = np.where(self.group_const, g, np.abs(g))
        values = np.bincount(self.group_row, contrib, minlength=self.n_rows)
        if not gradient:
            return values, None
        weight = np.where(self.group_const, 1.0, np.sign(g))
        grads = np.zeros((self.n_rows, self.n_k))
        for j in range(self.n_k):
            others = np.prod(np.delete(powers, j, axis=1), axis=1)
            lowered = k[j] ** np.maximum(self.kexp[:, j] - 1, 0)
            dmono = self.kexp[:, j] * lowered * others
            dg = np.bincount(self.groups, self.coeffs * dmono, minlength=self.n_groups)
            grads[:, j] = np.bincount(self.group_row, weight * dg, minlength=self.n_rows)
        return values, grads


class IntervalReach(NamedTuple):
    """Reachable sets of one subinterval, kept for dumps and diagnostics."""
    tracked: TrackedReach
    frames: List[Tuple[PolyZonotope, PolyZonotope]]
    occupancy: List[PolyZonotope]
    torque: PolyZonotope
    wrenches: WrenchSet
    contact: ContactConstraints
    clearance: List[List[PolyZonotope]]
    torque_bounds: Interval
    input_bounds: Optional[Interval]


class KEvaluation(NamedTuple):
    cost: float
    cost_grad: np.ndarray
    values: np.ndarray
    grads: np.ndarray


@dataclass(eq=False)
class IterationProblem:
    """
    The constraints and cost of one planning iteration, as functions of k.

    Attributes:
        ic (InitialCondition): Desired state the plans start from.
        waypoint (np.ndarray): Target of the cost at t_p.
        eta1, eta2 (np.ndarray): Final-position map eta1 k + eta2.
        partition (TimePartition): Time subintervals of the horizon.
        constraints (List[ConstraintInfo]): One entry per constraint.
        rows (SupPolynomials): Compiled constraint rows; obstacle constraints
            own one row per halfspace and take the minimum over them.
        row_owner (np.ndarray): Constraint index of every row.
        reach (List[IntervalReach]): Per-interval sets.
        cost_offset, cost_slope (np.ndarray): q_d(t_p; k) = offset + slope * k.
        build_time (float): Construction wall-clock seconds.
    """
    ic: InitialCondition
    waypoint: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    partition: TimePartition
    constraints: List[ConstraintInfo]
    rows: SupPolynomials
    row_owner: np.ndarray
    reach: List[IntervalReach]
    cost_offset: np.ndarray
    cost_slope: np.ndarray
    build_time: float = 0.0

    def __post_init__(self):
        self._starts = np.searchsorted(self.row_owner, np.arange(len(self.constraints)))

    @property
    def n_k(self) -> int:
        return self.eta1.size

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def position_at_plan_time(self, k: np.ndarray) -> np.ndarray:
        return self.cost_offset + self.cost_slope * np.asarray(k, dtype=float)

    def trajectory(self, k: np.ndarray) -> BernsteinTrajectory:
        return bernstein_from_ic(self.ic, k, self.eta1, self.eta2, self.partition.t_final)

    def kinds(self) -> np.ndarray:
        return np.array([c.kind.value for c in self.constraints])


def _interval_reach(scn: Scenario, ic: InitialCondition, eta2: np.ndarray, obstacles: Sequence[Obstacle],
                    partition: TimePartition, i: int, diagnostics: bool) -> IntervalReach:
    model = scn.model
    with allocation_scope(i):
        desired = pz_desired(ic, scn.eta1, eta2, partition, [i], scn.max_terms)[0]
        tracked = inflate_tracking_error(desired, scn.tracking.inflation(), scn.controller.kr)
        rotations = pz_local_rotations(model, tracked.q, scn.taylor_degree)
        frames = pzfk(model, tracked.q, scn.max_terms, scn.taylor_degree, rotations=rotations)
        occupancy = pzfo(model, tracked.q, scn.max_terms, scn.taylor_degree, frames=frames)
        inputs = RneaInputs(tracked.q, tracked.qd, tracked.qd_aux, tracked.qdd_aux)
        torque, wrenches = pz_rnea(
            model, inputs, model.parameter_interval, scn.max_terms, scn.taylor_degree, rotations
        )
        contact = pz_contact_constraints(*wrenches.contact, scn.contact, scn.max_terms)
        clearance = [[obstacle.b - obstacle.A @ fo for obstacle in obstacles] for fo in occupancy]
        input_bounds = None
        if diagnostics:
            nominal, _ = pz_rnea(model, inputs, model.nominal, scn.max_terms, scn.taylor_degree, rotations)
            spread = pz_bounds(torque - nominal)
            rho = np.maximum(np.abs(spread.lo), np.abs(spread.hi))
            input_bounds = pz_bounds(pz_input(nominal, robust_input_bound(scn.controller, rho)))
    logger.debug("interval %d: %d terms in the separation residual", i, contact.sep.coeffs.shape[0])
    return IntervalReach(tracked, frames, occupancy, torque, wrenches, contact, clearance, pz_bounds(torque), input_bounds)


def interval_reach(
    scn: Scenario,
    ic: InitialCondition,
    i: int,
    obstacles: Optional[Sequence[Obstacle]] = None,
    diagnostics: bool = False,
) -> IntervalReach:
    """
    Reachable sets of one subinterval, as build_iteration computes them.

    Raises:
        DomainError: If i is not a subinterval index of the partition.
    """
    partition = scn.partition
    if not 0 <= i < partition.n_intervals:
        raise DomainError(f"interval {i} out of range; the partition has {partition.n_intervals} intervals")
    if ic.n_joints != scn.model.n_q:
        raise DimensionError(f"initial condition has {ic.n_joints} joints, model has {scn.model.n_q}")
    obstacles = list(scn.obstacles) if obstacles is None else list(obstacles)
    return _interval_reach(scn, ic, ic.q0.copy(), obstacles, partition, i, diagnostics)


def build_iteration(
    scn: Scenario,
    ic: InitialCondition,
    waypoint: Optional[np.ndarray] = None,
    obstacles: Optional[Sequence[Obstacle]] = None,
    diagnostics: bool = False,
    workers: Optional[int] = None,
) -> IterationProblem:
    """
    Build the constraints of one planning iteration from ic.

    Each subinterval runs desired trajectory, tracking-error inflation,
    forward kinematics and occupancy, Newton-Euler over the parameter
    interval and the contact residuals, in its own allocation scope so
    that results do not depend on thread scheduling.

    Args:
        scn: The scenario.
        ic: Desired initial condition.
        waypoint: Target at t_p; by default a straight-line step towards the goal.
        obstacles: Obstacles to avoid; by default the scenario's static ones.
        diagnostics: Also bound the applied input set per interval.
        workers: Thread count override.
    """
    started = time.perf_counter()
    if ic.n_joints != scn.model.n_q:
        raise DimensionError(f"initial condition has {ic.n_joints} joints, model has {scn.model.n_q}")
    if waypoint is None:
        waypoint = hlp_waypoint(ic.q0, scn.goal, scn.hlp_step)
    obstacles = list(scn.obstacles) if obstacles is None else list(obstacles)
    partition = scn.partition
    eta2 = ic.q0.copy()

    with ThreadPoolExecutor(max_workers=worker_count(workers)) as pool:
        reach = list(pool.map(
            lambda i: _interval_reach(scn, ic, eta2, obstacles, partition, i, diagnostics),
            range(partition.n_intervals),
        ))

    constraints: List[ConstraintInfo] = []
    rows: List[PolyZonotope] = []
    owner: List[int] = []

    def add(info: ConstraintInfo, members: Sequence[PolyZonotope]):
        for row in members:
            rows.append(row)
            owner.append(len(constraints))
        constraints.append(info)

    for i, r in enumerate(reach):
        add(ConstraintInfo(i, ConstraintKind.SEPARATION), [r.contact.sep])
        add(ConstraintInfo(i, ConstraintKind.SLIP), [r.contact.slip])
        add(ConstraintInfo(i, ConstraintKind.TIP), [r.contact.tip])
        for link, per_obstacle in enumerate(r.clearance):
            for o, c in enumerate(per_obstacle):
                add(ConstraintInfo(i, ConstraintKind.OBSTACLE, link, o), [c[f] for f in range(c.shape[0])])

    k_ids = [parameter_id(j) for j in range(scn.model.n_q)]
    a0, a1 = power_coefficients(ic, scn.eta1, eta2, partition.t_final)
    powers = (partition.t_plan / partition.t_final) ** np.arange(a0.shape[1])
    problem = IterationProblem(
        ic=ic,
        waypoint=np.asarray(waypoint, dtype=float),
        eta1=scn.eta1.copy(),
        eta2=eta2,
        partition=partition,
        constraints=constraints,
        rows=SupPolynomials(rows, k_ids),
        row_owner=np.asarray(owner, dtype=np.int64),
        reach=reach,
        cost_offset=a0 @ powers,
        cost_slope=a1 @ powers,
        build_time=time.perf_counter() - started,
    )
    logger.debug("built %d constraints over %d intervals in %.2f s",
                 problem.n_constraints, partition.n_intervals, problem.build_time)
    return problem


def eval_k(problem: IterationProblem, k: np.ndarray, gradient: bool = True) -> KEvaluation:
    """
    Cost, constraint values and gradients at k.

    A contact constraint's value is the upper bound of its residual set
    sliced at k. An obstacle constraint's value is -max_row inf(A FO - b),
    that is the smallest row bound of b - A FO; its gradient is the active
    row's, ties going to the lowest row index.

    Raises:
        DomainError: If k lies outside [-1, 1]^n.
    """
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.size != problem.n_k:
        raise DimensionError(f"k has {k.size} entries, expected {problem.n_k}")
    if np.any(np.abs(k) > 1.0 + _K_TOL):
        raise DomainError(f"trajectory parameter outside [-1, 1]: {k}")
    miss = problem.position_at_plan_time(k) - problem.waypoint
    cost = float(miss @ miss)
    cost_grad = 2.0 * miss * problem.cost_slope

    row_values, row_grads = problem.rows.evaluate(k, gradient)
    if problem.n_constraints == 0:
        return KEvaluation(cost, cost_grad, np.zeros(0), np.zeros((0, problem.n_k)))
    values = np.minimum.reduceat(row_values, problem._starts)
    grads = None
    if gradient:
        order = np.lexsort((np.arange(row_values.size), row_values, problem.row_owner))
        active = order[problem._starts]
        grads = row_grads[active]
    return KEvaluation(cost, cost_grad, values, grads)
