"""
Robust passivity-based tracking controller.

The applied input is u = tau - v: tau is Newton-Euler feedforward with the
nominal inertial parameters along the modified reference, and v is a robust
term that keeps the Lyapunov function V = 1/2 r^T M r below V_M for any
inertial parameters in their intervals. Here e = q_d - q and r = de + K_r e.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..config import DEFAULT_ALPHA_C, DEFAULT_KR, DEFAULT_V_MAX
from ..dynamics import RneaInputs, pz_rnea, rnea
from ..errors import ConfigurationError
from ..kinematics import ExtendedArmModel, local_rotations
from ..setops import Interval, PolyZonotope, fresh_remainder_id, pz_bounds
from ..traj import TrackingBoundsInflation


@dataclass(frozen=True, eq=False)
class ControllerConfig:
    """
    Constants of the robust controller.

    Attributes:
        kr (np.ndarray): Diagonal gains K_r per joint.
        v_max (float): Lyapunov threshold V_M.
        alpha_c (float): Slope of the class-K function alpha(h) = alpha_c h.
        sigma_m (float): Lower bound on mass-matrix eigenvalues.
        sigma_M (float): Upper bound on mass-matrix eigenvalues.
    """
    kr: np.ndarray
    sigma_m: float
    sigma_M: float
    v_max: float = DEFAULT_V_MAX
    alpha_c: float = DEFAULT_ALPHA_C

    def __post_init__(self):
        kr = np.atleast_1d(np.asarray(self.kr, dtype=float))
        if np.any(kr <= 0):
            raise ConfigurationError(f"controller gains must be positive, got {kr}")
        if self.v_max < 0:
            raise ConfigurationError(f"V_M must be nonnegative, got {self.v_max}")
        if self.alpha_c <= 0:
            raise ConfigurationError(f"alpha_c must be positive, got {self.alpha_c}")
        if self.sigma_m <= 0 or self.sigma_M <= 0:
            raise ConfigurationError("mass-matrix eigenvalue bounds must be positive")
        if self.sigma_m > self.sigma_M:
            raise ConfigurationError(f"sigma_m={self.sigma_m} exceeds sigma_M={self.sigma_M}")
        object.__setattr__(self, "kr", kr)

    @classmethod
    def uniform(cls, n_joints: int, sigma_m: float, sigma_M: float, kr: float = DEFAULT_KR, **kwargs) -> "ControllerConfig":
        return cls(np.full(n_joints, float(kr)), sigma_m, sigma_M, **kwargs)


@dataclass(frozen=True, eq=False)
class TrackingBounds:
    """
    Ultimate bounds guaranteed by the robust controller.

    Attributes:
        eps (float): Bound on the modified error norm |r|.
        eps_p (np.ndarray): Position error bound per joint.
        eps_v (np.ndarray): Velocity error bound per joint.
    """
    eps: float
    eps_p: np.ndarray
    eps_v: np.ndarray

    def inflation(self) -> TrackingBoundsInflation:
        return TrackingBoundsInflation(self.eps_p, self.eps_v)


def tracking_bounds(cfg: ControllerConfig) -> TrackingBounds:
    """eps = sqrt(2 V_M / sigma_m), eps_p = eps / K_r and eps_v = 2 eps."""
    eps = float(np.sqrt(2.0 * cfg.v_max / cfg.sigma_m))
    return TrackingBounds(eps=eps, eps_p=eps / cfg.kr, eps_v=np.full(cfg.kr.shape, 2.0 * eps))


class ModifiedReference(NamedTuple):
    e: np.ndarray
    de: np.ndarray
    qd_aux: np.ndarray
    qdd_aux: np.ndarray
    r: np.ndarray


def modified_reference(q, qd, q_d, qd_d, qdd_d, kr) -> ModifiedReference:
    """Errors e = q_d - q, de = qd_d - qd and qd_a = qd_d + K_r e, qdd_a = qdd_d + K_r de."""
    kr = np.asarray(kr, dtype=float)
    e = np.asarray(q_d, dtype=float) - np.asarray(q, dtype=float)
    de = np.asarray(qd_d, dtype=float) - np.asarray(qd, dtype=float)
    return ModifiedReference(e, de, np.asarray(qd_d) + kr * e, np.asarray(qdd_d) + kr * de, de + kr * e)


def nominal_input(
    model: ExtendedArmModel,
    q: np.ndarray,
    qd: np.ndarray,
    q_d: np.ndarray,
    qd_d: np.ndarray,
    qdd_d: np.ndarray,
    kr: np.ndarray,
    params: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Feedforward rnea(q, qd, qd_a, qdd_a) with nominal parameters."""
    ref = modified_reference(q, qd, q_d, qd_d, qdd_d, kr)
    return rnea(model, RneaInputs(q, qd, ref.qd_aux, ref.qdd_aux), params).torque


def disturbance_measure(
    model: ExtendedArmModel,
    q: np.ndarray,
    qd: np.ndarray,
    qd_aux: np.ndarray,
    qdd_aux: np.ndarray,
    nominal_torque: Optional[np.ndarray] = None,
    params: Optional[Interval] = None,
) -> np.ndarray:
    """
    Worst-case torque mismatch rho = max(|inf w|, |sup w|) per joint.

    w is the interval of rnea over all inertial parameters in ``params``
    (the model's intervals by default) minus the nominal torque.
    """
    if params is None:
        params = model.parameter_interval
    if nominal_torque is None:
        nominal_torque = rnea(model, RneaInputs(q, qd, qd_aux, qdd_aux)).torque
    inputs = RneaInputs(
        PolyZonotope.constant(q), PolyZonotope.constant(qd),
        PolyZonotope.constant(qd_aux), PolyZonotope.constant(qdd_aux),
    )
    rotations = [PolyZonotope.constant(R) for R in local_rotations(model, np.asarray(q, dtype=float))]
    torque_set, _ = pz_rnea(model, inputs, params, rotations=rotations)
    w = pz_bounds(torque_set - nominal_torque)
    return np.maximum(np.abs(w.lo), np.abs(w.hi))


def lyapunov_lower_bound(cfg: ControllerConfig, r: np.ndarray) -> float:
    """h = V_M - 1/2 sigma_M |r|^2, a lower bound of V_M - V over all parameters."""
    return float(cfg.v_max - 0.5 * cfg.sigma_M * np.dot(r, r))


def robust_input(cfg: ControllerConfig, r: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """
    Robust term v = -gamma r / |r| with
    gamma = max(0, -alpha(h) / |r| + |r|^T rho / |r|), and v = 0 when r = 0.
    """
    r = np.asarray(r, dtype=float)
    norm = float(np.linalg.norm(r))
    if norm == 0.0:
        return np.zeros_like(r)
    h = lyapunov_lower_bound(cfg, r)
    gamma = max(0.0, -cfg.alpha_c * h / norm + float(np.abs(r) @ np.asarray(rho, dtype=float)) / norm)
    return -gamma * r / norm


class ControlOutput(NamedTuple):
    """One evaluation of the controller."""
    u: np.ndarray
    tau: np.ndarray
    v: np.ndarray
    r: np.ndarray
    rho: np.ndarray


def control_step(
    model: ExtendedArmModel,
    cfg: ControllerConfig,
    q: np.ndarray,
    qd: np.ndarray,
    q_d: np.ndarray,
    qd_d: np.ndarray,
    qdd_d: np.ndarray,
    params: Optional[Interval] = None,
) -> ControlOutput:
    """Applied input u = tau - v at the current state and desired reference."""
    ref = modified_reference(q, qd, q_d, qd_d, qdd_d, cfg.kr)
    tau = rnea(model, RneaInputs(q, qd, ref.qd_aux, ref.qdd_aux)).torque
    rho = disturbance_measure(model, q, qd, ref.qd_aux, ref.qdd_aux, tau, params)
    v = robust_input(cfg, ref.r, rho)
    return ControlOutput(u=tau - v, tau=tau, v=v, r=ref.r, rho=rho)


def robust_input_bound(cfg: ControllerConfig, rho: np.ndarray) -> np.ndarray:
    """Per-joint bound (alpha_c eps (sigma_M - sigma_m) + |rho| + rho_j) / 2 on |v_j|."""
    rho = np.asarray(rho, dtype=float)
    eps = tracking_bounds(cfg).eps
    return (cfg.alpha_c * eps * (cfg.sigma_M - cfg.sigma_m) + np.linalg.norm(rho) + rho) / 2.0


def pz_input(tau: PolyZonotope, bound: np.ndarray) -> PolyZonotope:
    """Input set tau (-) v with v_j = bound_j x_v_j on fresh independent indeterminates."""
    bound = np.asarray(bound, dtype=float)
    n = bound.size
    v = PolyZonotope.from_generators(
        np.zeros(n), [(bound[j] * np.eye(n)[j], fresh_remainder_id()) for j in range(n)]
    )
    return tau - v
