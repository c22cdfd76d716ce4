"""Mass matrix extraction and sampled eigenvalue bounds."""

import logging
from typing import Optional, Tuple

import numpy as np

from ..config import DEFAULT_SEED, DEFAULT_SIGMA_SAMPLES
from ..errors import DomainError, ModelError
from ..kinematics import INERTIA, ExtendedArmModel, inertia_matrix
from .rnea import RneaInputs, rnea

logger = logging.getLogger(__name__)

_CHUNK = 4096


def mass_matrix(model: ExtendedArmModel, q: np.ndarray, params: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Joint-space mass matrix M(q).

    Column j is the torque of the recursion with qdd_aux = e_j, zero
    velocities and gravity off. ``q`` may be batched as (..., n_q).
    """
    q = np.asarray(q, dtype=float)
    n = model.n_q
    columns_q = np.broadcast_to(q[..., None, :], q.shape[:-1] + (n, n))
    zeros = np.zeros_like(columns_q)
    unit = np.broadcast_to(np.eye(n), columns_q.shape)
    if params is not None:
        params = np.asarray(params, dtype=float)
        if params.ndim > 2:
            params = params[..., None, :, :]
    torque = rnea(model, RneaInputs(columns_q, zeros, zeros, unit, gravity=False), params).torque
    return np.swapaxes(torque, -1, -2)


def _sample_configurations(model: ExtendedArmModel, rng: np.random.Generator, n: int) -> np.ndarray:
    if model.joint_limits is not None:
        lo, hi = model.joint_limits
        lo = np.maximum(lo, -np.pi)
        hi = np.minimum(hi, np.pi)
    else:
        lo, hi = -np.pi * np.ones(model.n_q), np.pi * np.ones(model.n_q)
    return lo + rng.uniform(0.0, 1.0, size=(n, model.n_q)) * (hi - lo)


def estimate_sigma_bounds(
    model: ExtendedArmModel,
    n_samples: int = DEFAULT_SIGMA_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> Tuple[float, float]:
    """
    Smallest and largest mass-matrix eigenvalues over sampled configurations
    and inertial parameters drawn from their intervals.

    Raises:
        DomainError: If n_samples < 1.
        ModelError: If a sampled inertia tensor is not positive semidefinite.
    """
    if n_samples < 1:
        raise DomainError(f"n_samples must be at least 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    sigma_m, sigma_M = np.inf, -np.inf
    remaining = n_samples
    while remaining > 0:
        size = min(_CHUNK, remaining)
        q = _sample_configurations(model, rng, size)
        params = model.sample_parameters(rng, size)
        inertia_eigs = np.linalg.eigvalsh(inertia_matrix(params[..., INERTIA]))
        if inertia_eigs.min() < -1e-12:
            raise ModelError("a sampled inertia tensor is not positive semidefinite; tighten the inertia intervals")
        eigs = np.linalg.eigvalsh(mass_matrix(model, q, params))
        sigma_m = min(sigma_m, float(eigs[:, 0].min()))
        sigma_M = max(sigma_M, float(eigs[:, -1].max()))
        remaining -= size
    logger.info("mass-matrix eigenvalues over %d samples: sigma_m=%.6g sigma_M=%.6g", n_samples, sigma_m, sigma_M)
    return sigma_m, sigma_M


def estimate_sigma_m(
    model: ExtendedArmModel,
    n_samples: int = DEFAULT_SIGMA_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> float:
    return estimate_sigma_bounds(model, n_samples, seed)[0]
