"""
Degree-5 Bernstein desired trajectories parameterized by k in [-1, 1]^n.

Each joint follows

    q_j(t; k) = sum_l beta_{j,l} b_l(t / t_final),  b_l(s) = C(5, l) s^l (1 - s)^(5 - l),

where beta_{j,0..2} match the initial position, velocity and acceleration,
and beta_{j,3} = beta_{j,4} = beta_{j,5} = eta1_j k_j + eta2_j so that every
trajectory brakes to rest at t_final.
"""

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import binom

from ..config import DEFAULT_ETA_SCALE, DEFAULT_MAX_TERMS
from ..errors import DimensionError, DomainError
from ..setops import PolyZonotope, parameter_id, pz_reduce
from .partition import TimePartition

DEGREE = 5

_TIME_TOL = 1e-12
_K_TOL = 1e-12


def _bernstein_to_power() -> np.ndarray:
    """Matrix C with power coefficients a = C @ beta on s in [0, 1]."""
    n = DEGREE
    conversion = np.zeros((n + 1, n + 1))
    for l in range(n + 1):
        for m in range(l, n + 1):
            conversion[m, l] = binom(n, l) * binom(n - l, m - l) * (-1.0) ** (m - l)
    return conversion


BERNSTEIN_TO_POWER = _bernstein_to_power()


@dataclass(frozen=True)
class InitialCondition:
    """
    Desired state a trajectory starts from.

    Attributes:
        q0 (np.ndarray): Joint positions (rad).
        v0 (np.ndarray): Joint velocities (rad/s).
        a0 (np.ndarray): Joint accelerations (rad/s^2).
    """
    q0: np.ndarray
    v0: np.ndarray
    a0: np.ndarray

    def __post_init__(self):
        q0 = np.asarray(self.q0, dtype=float).reshape(-1)
        v0 = np.asarray(self.v0, dtype=float).reshape(-1)
        a0 = np.asarray(self.a0, dtype=float).reshape(-1)
        if not q0.shape == v0.shape == a0.shape:
            raise DimensionError(f"initial condition sizes differ: {q0.size}, {v0.size}, {a0.size}")
        if not (np.all(np.isfinite(q0)) and np.all(np.isfinite(v0)) and np.all(np.isfinite(a0))):
            raise DomainError("initial condition must be finite")
        object.__setattr__(self, "q0", q0)
        object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "a0", a0)

    @classmethod
    def at_rest(cls, q: np.ndarray) -> "InitialCondition":
        q = np.asarray(q, dtype=float).reshape(-1)
        return cls(q, np.zeros_like(q), np.zeros_like(q))

    @property
    def n_joints(self) -> int:
        return self.q0.size


def default_eta(ic: InitialCondition, scale: float = DEFAULT_ETA_SCALE) -> Tuple[np.ndarray, np.ndarray]:
    """Final-position scale eta1 and offset eta2 = q0 per joint."""
    return np.full(ic.n_joints, float(scale)), ic.q0.copy()


def _fixed_coefficients(ic: InitialCondition, t_final: float) -> np.ndarray:
    """Initial-condition part of beta with the final three coefficients zero."""
    beta = np.zeros((ic.n_joints, DEGREE + 1))
    beta[:, 0] = ic.q0
    beta[:, 1] = ic.q0 + ic.v0 * t_final / 5.0
    beta[:, 2] = ic.a0 * t_final ** 2 / 20.0 + 2.0 * beta[:, 1] - beta[:, 0]
    return beta


def power_coefficients(
    ic: InitialCondition, eta1: np.ndarray, eta2: np.ndarray, t_final: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Power-basis coefficients on s = t / t_final, affine in k.

    Returns:
        (a0, a1), each of shape (n_joints, 6), with q_j(s; k) = sum_m (a0[j, m] + a1[j, m] k_j) s^m.
    """
    eta1 = np.broadcast_to(np.asarray(eta1, dtype=float), (ic.n_joints,))
    eta2 = np.broadcast_to(np.asarray(eta2, dtype=float), (ic.n_joints,))
    beta = _fixed_coefficients(ic, t_final)
    beta[:, 3:] = eta2[:, None]
    unit = np.zeros(DEGREE + 1)
    unit[3:] = 1.0
    a0 = beta @ BERNSTEIN_TO_POWER.T
    a1 = eta1[:, None] * (BERNSTEIN_TO_POWER @ unit)[None, :]
    return a0, a1


@dataclass(frozen=True)
class BernsteinTrajectory:
    """
    One desired trajectory of the family, fixed by ic and k.

    Attributes:
        beta (np.ndarray): Bernstein coefficients, shape (n_joints, 6).
        t_final (float): Horizon length; the trajectory is defined on [0, t_final].
        eta1 (np.ndarray): Final-position scale per joint.
        eta2 (np.ndarray): Final-position offset per joint.
        k (np.ndarray): Trajectory parameter in [-1, 1]^n.
    """
    beta: np.ndarray
    t_final: float
    eta1: np.ndarray
    eta2: np.ndarray
    k: np.ndarray
    _power: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_power", np.asarray(self.beta, dtype=float) @ BERNSTEIN_TO_POWER.T)

    @property
    def n_joints(self) -> int:
        return self.beta.shape[0]

    @property
    def final_position(self) -> np.ndarray:
        return self.beta[:, DEGREE].copy()

    def evaluate(self, t: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return eval_desired(self, t)

    def evaluate_many(self, times: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorised evaluation; each output has shape (len(times), n_joints)."""
        s = np.asarray(times, dtype=float) / self.t_final
        coeffs = self._power.T
        q = P.polyval(s, coeffs).T
        qd = P.polyval(s, P.polyder(coeffs, axis=0)).T / self.t_final
        qdd = P.polyval(s, P.polyder(coeffs, 2, axis=0)).T / self.t_final ** 2
        return q, qd, qdd


def bernstein_from_ic(
    ic: InitialCondition,
    k: np.ndarray,
    eta1: np.ndarray,
    eta2: np.ndarray,
    t_final: float,
) -> BernsteinTrajectory:
    """
    Desired trajectory for parameter k from the initial condition.

    Raises:
        DomainError: If any k_j lies outside [-1, 1].
    """
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.size != ic.n_joints:
        raise DimensionError(f"parameter has {k.size} entries for {ic.n_joints} joints")
    if np.any(np.abs(k) > 1.0 + _K_TOL):
        raise DomainError(f"trajectory parameter outside [-1, 1]: {k}")
    eta1 = np.broadcast_to(np.asarray(eta1, dtype=float), (ic.n_joints,)).copy()
    eta2 = np.broadcast_to(np.asarray(eta2, dtype=float), (ic.n_joints,)).copy()
    beta = _fixed_coefficients(ic, t_final)
    beta[:, 3:] = (eta1 * k + eta2)[:, None]
    return BernsteinTrajectory(beta=beta, t_final=float(t_final), eta1=eta1, eta2=eta2, k=k)


def eval_desired(traj: BernsteinTrajectory, t: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Desired position, velocity and acceleration at time t.

    Raises:
        DomainError: If t lies outside [0, t_final].
    """
    if not -_TIME_TOL <= t <= traj.t_final + _TIME_TOL:
        raise DomainError(f"time {t} outside the horizon [0, {traj.t_final}]")
    q, qd, qdd = traj.evaluate_many(np.array([min(max(t, 0.0), traj.t_final)]))
    return q[0], qd[0], qdd[0]


class DesiredReach(NamedTuple):
    """Desired position, velocity and acceleration sets over one subinterval."""
    q: PolyZonotope
    qd: PolyZonotope
    qdd: PolyZonotope


def parameter_pz(n_joints: int) -> PolyZonotope:
    """The parameter box [-1, 1]^n with x_k_j as joint j's indeterminate."""
    return PolyZonotope.from_generators(
        np.zeros(n_joints), [(np.eye(n_joints)[j], parameter_id(j)) for j in range(n_joints)]
    )


def _horner(a0: np.ndarray, a1: np.ndarray, k_pz: PolyZonotope, s_pz: PolyZonotope) -> PolyZonotope:
    """sum_m (a0[:, m] + a1[:, m] * k) s^m by Horner's rule."""
    degree = a0.shape[1] - 1
    acc = a0[:, degree] + np.diag(a1[:, degree]) @ k_pz
    for m in range(degree - 1, -1, -1):
        acc = s_pz * acc + (a0[:, m] + np.diag(a1[:, m]) @ k_pz)
    return acc


def pz_desired(
    ic: InitialCondition,
    eta1: np.ndarray,
    eta2: np.ndarray,
    partition: TimePartition,
    intervals: Optional[List[int]] = None,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> List[DesiredReach]:
    """
    Polynomial zonotopes of the desired trajectories over each subinterval.

    The time indeterminate of subinterval i and the parameter indeterminates
    x_k_j are substituted into the power form of the Bernstein polynomial,
    so slicing x_k at k and x_t at the matching value reproduces
    eval_desired exactly.
    """
    a0, a1 = power_coefficients(ic, eta1, eta2, partition.t_final)
    da0, da1 = P.polyder(a0, axis=1), P.polyder(a1, axis=1)
    dda0, dda1 = P.polyder(a0, 2, axis=1), P.polyder(a1, 2, axis=1)
    k_pz = parameter_pz(ic.n_joints)
    t_final = partition.t_final
    if intervals is None:
        intervals = range(partition.n_intervals)
    reach = []
    for i in intervals:
        s_pz = partition.time_pz(i) * (1.0 / t_final)
        q = _horner(a0, a1, k_pz, s_pz)
        qd = _horner(da0, da1, k_pz, s_pz) * (1.0 / t_final)
        qdd = _horner(dda0, dda1, k_pz, s_pz) * (1.0 / t_final ** 2)
        reach.append(DesiredReach(pz_reduce(q, max_terms), pz_reduce(qd, max_terms), pz_reduce(qdd, max_terms)))
    return reach
