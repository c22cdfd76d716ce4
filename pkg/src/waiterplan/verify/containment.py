"""
Sampling oracles for the set-valued pipeline and for executed plans.

containment_audit draws points (subinterval, time, k, tracking errors,
inertial parameters), runs the pointwise pipeline and checks that every
value lies in the matching set sliced at the sampled indeterminates.
The obstacle stage compares every clearance row b - A FO with the range
of b - A p over the pointwise link occupancy, so the row's upper bound
never falls below the pointwise separation.
segment_audit draws points along committed segments and checks the
contact residuals and obstacle clearance pointwise.
"""

import logging
import time
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from ..config import DEFAULT_SAMPLES, DEFAULT_SEED
from ..contact import contact_residuals
from ..dynamics import RneaInputs, rnea
from ..errors import DomainError
from ..kinematics import Obstacle, fk, fo
from ..planner import CommittedSegment, IterationProblem, Scenario, build_iteration
from ..setops import (
    IndeterminateId,
    PolyZonotope,
    inertial_id,
    parameter_id,
    position_error_id,
    pz_bounds,
    slice_many,
    time_id,
    velocity_error_id,
)
from ..traj import InitialCondition, eval_desired
from .report import VerificationReport

logger = logging.getLogger(__name__)

STAGES = ("trajectory", "fk", "fo", "obstacle", "wrench", "torque", "contact")
CONTAINMENT_SLACK = 1e-9


def _check(report: VerificationReport, check: str, pz: PolyZonotope, value: np.ndarray,
           assignment: Dict[IndeterminateId, float], seed: int, sample: int, slack: float):
    bounds = pz_bounds(slice_many(pz, assignment))
    value = np.asarray(value, dtype=float)
    margin = float(min(np.min(value - bounds.lo), np.min(bounds.hi - value)))
    report.record(check, margin, seed, sample, slack)


def _check_clearance(report: VerificationReport, row_pz: PolyZonotope, obstacle: Obstacle, occupancy,
                     assignment: Dict[IndeterminateId, float], seed: int, sample: int, slack: float):
    bounds = pz_bounds(slice_many(row_pz, assignment))
    mid = obstacle.b - obstacle.A @ occupancy.center
    spread = np.abs(obstacle.A @ occupancy.generators.T).sum(axis=1)
    margin = float(min(np.min(mid - spread - bounds.lo), np.min(bounds.hi - (mid + spread))))
    report.record("obstacle", margin, seed, sample, slack, obstacle.name)


def _tracked_state(scn: Scenario, q_d, qd_d, qdd_d, x_ep, x_ev):
    bounds = scn.tracking
    kr = np.broadcast_to(scn.controller.kr, bounds.eps_p.shape)
    e_p = bounds.eps_p * x_ep
    e_v = bounds.eps_v * x_ev
    return q_d - e_p, qd_d - e_v, qd_d + kr * e_p, qdd_d + kr * e_v


def _draw_parameters(scn: Scenario, rng: np.random.Generator):
    """Inertial parameters and the matching values of their indeterminates."""
    lower, upper = scn.model.lower, scn.model.upper
    x = rng.uniform(-1.0, 1.0, size=lower.shape)
    params = (lower + upper) / 2.0 + x * (upper - lower) / 2.0
    return params, x


def containment_audit(
    scn: Scenario,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    stages: Optional[Sequence[str]] = None,
    ic: Optional[InitialCondition] = None,
    problem: Optional[IterationProblem] = None,
    slack: float = CONTAINMENT_SLACK,
    obstacles: Optional[Sequence[Obstacle]] = None,
) -> VerificationReport:
    """
    Check that sampled pointwise values lie in the sliced reachable sets.

    Args:
        scn: The scenario.
        n_samples: Number of sampled points, at least 1.
        seed: Seed of the sampler.
        stages: Subset of STAGES; all by default.
        ic: Initial condition of the sets; the start at rest by default.
        problem: Prebuilt iteration to audit instead of building one.
        slack: Tolerated excursion outside a set.
        obstacles: Obstacles the iteration is built against; those of the
            first planning iteration by default.

    Raises:
        DomainError: If n_samples < 1, a stage is unknown or the prebuilt
            problem was built against a different number of obstacles.
    """
    if n_samples < 1:
        raise DomainError(f"containment audit needs at least one sample, got {n_samples}")
    stages = tuple(STAGES if stages is None else stages)
    unknown = set(stages) - set(STAGES)
    if unknown:
        raise DomainError(f"unknown audit stages {sorted(unknown)}; expected some of {STAGES}")
    started = time.perf_counter()
    obstacles = scn.obstacles_at(0) if obstacles is None else list(obstacles)
    if problem is None:
        problem = build_iteration(scn, ic or InitialCondition.at_rest(scn.start), obstacles=obstacles)
    elif "obstacle" in stages and len(problem.reach[0].clearance[0]) != len(obstacles):
        raise DomainError(f"problem was built against {len(problem.reach[0].clearance[0])} obstacles, "
                          f"got {len(obstacles)}")
    model = scn.model
    partition = problem.partition
    rng = np.random.default_rng(seed)
    report = VerificationReport("containment")

    for s in range(n_samples):
        i = int(rng.integers(partition.n_intervals))
        lo, hi = partition.bounds(i)
        t = float(rng.uniform(lo, hi))
        k = rng.uniform(-1.0, 1.0, problem.n_k)
        x_ep = rng.uniform(-1.0, 1.0, model.n_q)
        x_ev = rng.uniform(-1.0, 1.0, model.n_q)
        params, x_params = _draw_parameters(scn, rng)
        beta = [rng.uniform(-1.0, 1.0, v.n_generators) for v in model.link_volumes]

        assignment: Dict[IndeterminateId, float] = {time_id(i): partition.indeterminate_value(i, t)}
        for j in range(model.n_q):
            assignment[parameter_id(j)] = float(k[j])
            assignment[position_error_id(j)] = float(x_ep[j])
            assignment[velocity_error_id(j)] = float(x_ev[j])
        for index, value in enumerate(x_params.reshape(-1)):
            assignment[inertial_id(index)] = float(value)

        reach = problem.reach[i]
        q_d, qd_d, qdd_d = eval_desired(problem.trajectory(k), t)
        q, qd, qd_aux, qdd_aux = _tracked_state(scn, q_d, qd_d, qdd_d, x_ep, x_ev)

        if "trajectory" in stages:
            for pz, value in zip(reach.tracked, (q, qd, qd_aux, qdd_aux)):
                _check(report, "trajectory", pz, value, assignment, seed, s, slack)
        if "fk" in stages:
            for (R_pz, p_pz), (R, p) in zip(reach.frames, fk(model, q)):
                _check(report, "fk", R_pz, R, assignment, seed, s, slack)
                _check(report, "fk", p_pz, p, assignment, seed, s, slack)
        occupancies = fo(model, q) if {"fo", "obstacle"} & set(stages) else []
        if "fo" in stages:
            for fo_pz, occupancy, b in zip(reach.occupancy, occupancies, beta):
                _check(report, "fo", fo_pz, occupancy.point(b), assignment, seed, s, slack)
        if "obstacle" in stages:
            for per_obstacle, occupancy in zip(reach.clearance, occupancies):
                for row_pz, obstacle in zip(per_obstacle, obstacles):
                    _check_clearance(report, row_pz, obstacle, occupancy, assignment, seed, s, slack)
        if {"wrench", "torque", "contact"} & set(stages):
            result = rnea(model, RneaInputs(q, qd, qd_aux, qdd_aux), params)
            wrench = result.wrench(model.object_link)
            force_pz, moment_pz = reach.wrenches.contact
            if "wrench" in stages:
                _check(report, "wrench", force_pz, wrench.f, assignment, seed, s, slack)
                _check(report, "wrench", moment_pz, wrench.n, assignment, seed, s, slack)
            if "torque" in stages:
                _check(report, "torque", reach.torque, result.torque, assignment, seed, s, slack)
            if "contact" in stages:
                residuals = contact_residuals(wrench, scn.contact)
                for pz, value in zip(reach.contact, residuals):
                    _check(report, "contact", pz, value, assignment, seed, s, slack)

    report.elapsed = time.perf_counter() - started
    logger.info("containment audit: %d samples, %d violations", n_samples, report.n_violations)
    return report


def segment_audit(
    scn: Scenario,
    segments: Iterable[CommittedSegment],
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    slack: float = CONTAINMENT_SLACK,
) -> VerificationReport:
    """
    Densely sample committed segments and check them pointwise.

    For each segment, times are drawn from its executed range (endpoints
    included), tracking errors from the controller's bounds and inertial
    parameters from their intervals. Contact residuals must be <= 0 and
    every link occupancy must be separated from every obstacle the
    segment's plan was built against. The segment's k must lie in the
    parameter box, outside which none of the sets apply.

    Args:
        n_samples: Samples per segment, at least 1.
    """
    if n_samples < 1:
        raise DomainError(f"segment audit needs at least one sample, got {n_samples}")
    started = time.perf_counter()
    model = scn.model
    rng = np.random.default_rng(seed)
    report = VerificationReport("segments")
    sample = 0
    for segment in segments:
        box_margin = 1.0 - float(np.max(np.abs(segment.k)))
        report.record("parameter_box", box_margin, seed, sample, slack, f"iteration {segment.iteration}")
        if box_margin < -slack:
            continue
        trajectory = segment.trajectory()
        times = rng.uniform(segment.t_start, segment.t_end, n_samples)
        times[0], times[-1] = segment.t_start, segment.t_end
        q_d, qd_d, qdd_d = trajectory.evaluate_many(times)
        x_ep = rng.uniform(-1.0, 1.0, q_d.shape)
        x_ev = rng.uniform(-1.0, 1.0, q_d.shape)
        q, qd, qd_aux, qdd_aux = _tracked_state(scn, q_d, qd_d, qdd_d, x_ep, x_ev)
        lower, upper = model.lower, model.upper
        params = lower + rng.uniform(0.0, 1.0, (n_samples,) + lower.shape) * (upper - lower)
        wrench = rnea(model, RneaInputs(q, qd, qd_aux, qdd_aux), params).wrench(model.object_link)
        residuals = contact_residuals(wrench, scn.contact)
        obstacles = scn.obstacles_at(segment.iteration)
        for n in range(n_samples):
            detail = f"iteration {segment.iteration} t={times[n]:.4f}"
            for name, value in zip(("sep", "slip", "tip"), residuals[n]):
                report.record(name, -float(value), seed, sample, slack, detail)
            if obstacles:
                for occupancy in fo(model, q[n]):
                    for obstacle in obstacles:
                        report.record("collision", -obstacle.separation(occupancy), seed, sample, slack,
                                      f"{detail} {obstacle.name}")
            sample += 1
    report.elapsed = time.perf_counter() - started
    logger.info("segment audit: %d samples, %d violations", sample, report.n_violations)
    return report

