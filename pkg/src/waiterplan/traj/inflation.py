"""Inflation of desired trajectory sets by the controller's tracking-error bounds."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import DomainError
from ..setops import PolyZonotope, position_error_id, velocity_error_id
from .bernstein import DesiredReach


@dataclass(frozen=True)
class TrackingBoundsInflation:
    """
    Per-joint tracking-error radii.

    Attributes:
        eps_p (np.ndarray): Position error bound per joint (rad).
        eps_v (np.ndarray): Velocity error bound per joint (rad/s).
    """
    eps_p: np.ndarray
    eps_v: np.ndarray

    def __post_init__(self):
        eps_p = np.atleast_1d(np.asarray(self.eps_p, dtype=float))
        eps_v = np.broadcast_to(np.asarray(self.eps_v, dtype=float), eps_p.shape).copy()
        if np.any(eps_p < 0) or np.any(eps_v < 0):
            raise DomainError("tracking-error bounds must be nonnegative")
        object.__setattr__(self, "eps_p", eps_p)
        object.__setattr__(self, "eps_v", eps_v)


class TrackedReach(NamedTuple):
    """Sets of actual and modified-reference states over one subinterval."""
    q: PolyZonotope
    qd: PolyZonotope
    qd_aux: PolyZonotope
    qdd_aux: PolyZonotope


def error_pz(radii: np.ndarray, kind: str) -> PolyZonotope:
    """Box of per-joint errors with x_e_p (kind 'position') or x_e_v (kind 'velocity') ids."""
    make_id = position_error_id if kind == "position" else velocity_error_id
    n = radii.size
    return PolyZonotope.from_generators(
        np.zeros(n), [(radii[j] * np.eye(n)[j], make_id(j)) for j in range(n)]
    )


def inflate_tracking_error(
    desired: DesiredReach,
    bounds: TrackingBoundsInflation,
    kr: np.ndarray,
) -> TrackedReach:
    """
    Actual and modified-reference sets around one desired subinterval set.

    With position error e = q_d - q = eps_p x_e_p and velocity error
    de = qd_d - qd = eps_v x_e_v:

        q      = q_d    - eps_p x_e_p
        qd     = qd_d   - eps_v x_e_v
        qd_a   = qd_d   + K_r eps_p x_e_p
        qdd_a  = qdd_d  + K_r eps_v x_e_v

    As sets these are q_d (+) E_p and so on; sharing x_e_p between q and
    qd_a keeps their dependence.
    """
    kr = np.broadcast_to(np.asarray(kr, dtype=float), bounds.eps_p.shape)
    e_p = error_pz(bounds.eps_p, "position")
    e_v = error_pz(bounds.eps_v, "velocity")
    gain = np.diag(kr)
    return TrackedReach(
        q=desired.q - e_p,
        qd=desired.qd - e_v,
        qd_aux=desired.qd + gain @ e_p,
        qdd_aux=desired.qdd + gain @ e_v,
    )
