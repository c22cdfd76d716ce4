"""
Pointwise recursive Newton-Euler dynamics with an auxiliary reference.

The auxiliary variant takes two velocity arguments: qd enters only through
the angular velocities w, and the reference qd_aux, qdd_aux enter linearly,
so that

    rnea(q, qd, qd_aux, qdd_aux) = M(q) qdd_aux + C(q, qd) qd_aux + G(q).

With qd_aux = qd and qdd_aux = qdd it is the ordinary inverse dynamics.
Every array argument may carry leading batch dimensions.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..config import GRAVITY
from ..errors import DimensionError
from ..kinematics import COM, INERTIA, MASS, ExtendedArmModel, inertia_matrix, local_rotations


@dataclass(frozen=True)
class Wrench:
    """
    Force and moment acting through a joint, in that joint's frame.

    Attributes:
        f (np.ndarray): Force (N).
        n (np.ndarray): Moment (N m).
        frame (int): Link index of the joint frame.
    """
    f: np.ndarray
    n: np.ndarray
    frame: int


@dataclass(frozen=True)
class RneaInputs:
    """
    State and reference fed to the Newton-Euler recursion.

    The same container carries arrays for rnea and polynomial zonotopes
    for pz_rnea.

    Attributes:
        q: Joint positions.
        qd: Joint velocities.
        qd_aux: Auxiliary (modified reference) velocities.
        qdd_aux: Auxiliary accelerations.
        gravity (bool): Whether the base accelerates upward by g.
    """
    q: object
    qd: object
    qd_aux: object
    qdd_aux: object
    gravity: bool = True

    @classmethod
    def inverse_dynamics(cls, q, qd, qdd, gravity: bool = True) -> "RneaInputs":
        return cls(q, qd, qd, qdd, gravity)


class RneaResult(NamedTuple):
    """
    Outputs of rnea.

    Attributes:
        torque: Actuated joint torques, shape (..., n_q).
        forces: Joint forces, shape (..., n_links, 3).
        moments: Joint moments, shape (..., n_links, 3).
    """
    torque: np.ndarray
    forces: np.ndarray
    moments: np.ndarray

    def wrench(self, link: int) -> Wrench:
        return Wrench(self.forces[..., link, :], self.moments[..., link, :], link)


def _rotate_into_child(R: np.ndarray, v: np.ndarray) -> np.ndarray:
    """R^T v for parent-from-child rotations R."""
    return np.einsum("...ji,...j->...i", R, v)


def _apply(R: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", R, v)


def rnea(
    model: ExtendedArmModel,
    inputs: RneaInputs,
    params: Optional[np.ndarray] = None,
) -> RneaResult:
    """
    Joint torques and per-joint wrenches of the extended arm.

    Args:
        model: The arm.
        inputs: Arrays of shape (..., n_q).
        params: Inertial parameters (..., n_links, 10); defaults to the nominal ones.

    Returns:
        Torques and the wrench each link receives from its parent through
        its joint. The object joint's wrench is the contact wrench.
    """
    q = np.asarray(inputs.q, dtype=float)
    qd = np.asarray(inputs.qd, dtype=float)
    qd_aux = np.asarray(inputs.qd_aux, dtype=float)
    qdd_aux = np.asarray(inputs.qdd_aux, dtype=float)
    for name, arr in (("q", q), ("qd", qd), ("qd_aux", qd_aux), ("qdd_aux", qdd_aux)):
        if arr.shape[-1:] != (model.n_q,):
            raise DimensionError(f"{name} must end in dimension {model.n_q}, got {arr.shape}")
    params = model.nominal if params is None else np.asarray(params, dtype=float)
    batch = np.broadcast_shapes(q.shape[:-1], qd.shape[:-1], qd_aux.shape[:-1], qdd_aux.shape[:-1], params.shape[:-2])
    q, qd, qd_aux, qdd_aux = (np.broadcast_to(x, batch + (model.n_q,)) for x in (q, qd, qd_aux, qdd_aux))
    params = np.broadcast_to(params, batch + params.shape[-2:])

    local = local_rotations(model, q)
    zero = np.zeros(batch + (3,))
    w, w_aux, w_dot = zero, zero, zero
    v_dot = zero + (np.array([0.0, 0.0, GRAVITY]) if inputs.gravity else 0.0)

    F = np.empty(batch + (model.n_links, 3))
    N = np.empty(batch + (model.n_links, 3))
    for j, (joint, col) in enumerate(zip(model.joints, model.coordinate_of)):
        R = local[..., j, :, :]
        p = joint.offset
        v_dot = _rotate_into_child(R, v_dot + np.cross(w_dot, p) + np.cross(w, np.cross(w_aux, p)))
        w_aux_parent = _rotate_into_child(R, w_aux)
        if col is None:
            w = _rotate_into_child(R, w)
            w_dot = _rotate_into_child(R, w_dot)
            w_aux = w_aux_parent
        else:
            spin = qd[..., col, None] * joint.axis
            w_dot = _rotate_into_child(R, w_dot) + np.cross(w_aux_parent, spin) + qdd_aux[..., col, None] * joint.axis
            w = _rotate_into_child(R, w) + spin
            w_aux = w_aux_parent + qd_aux[..., col, None] * joint.axis

        com = params[..., j, COM]
        inertia = inertia_matrix(params[..., j, INERTIA])
        v_com = v_dot + np.cross(w_dot, com) + np.cross(w, np.cross(w_aux, com))
        F[..., j, :] = params[..., j, MASS, None] * v_com
        N[..., j, :] = _apply(inertia, w_dot) + np.cross(w_aux, _apply(inertia, w))

    forces = np.empty_like(F)
    moments = np.empty_like(N)
    f_child, n_child = zero, zero
    R_child = np.broadcast_to(np.eye(3), batch + (3, 3))
    p_child = np.zeros(3)
    torque = np.empty(batch + (model.n_q,))
    for j in range(model.n_links - 1, -1, -1):
        com = params[..., j, COM]
        transmitted = _apply(R_child, f_child)
        forces[..., j, :] = transmitted + F[..., j, :]
        moments[..., j, :] = (_apply(R_child, n_child) + np.cross(com, F[..., j, :])
                              + np.cross(p_child, transmitted) + N[..., j, :])
        col = model.coordinate_of[j]
        if col is not None:
            torque[..., col] = moments[..., j, :] @ model.joints[j].axis
        f_child, n_child = forces[..., j, :], moments[..., j, :]
        R_child = local[..., j, :, :]
        p_child = model.joints[j].offset
    return RneaResult(torque, forces, moments)


def inverse_dynamics(
    model: ExtendedArmModel,
    q: np.ndarray,
    qd: np.ndarray,
    qdd: np.ndarray,
    params: Optional[np.ndarray] = None,
    gravity: bool = True,
) -> RneaResult:
    return rnea(model, RneaInputs.inverse_dynamics(q, qd, qdd, gravity), params)


def bias_torque(
    model: ExtendedArmModel,
    q: np.ndarray,
    qd: np.ndarray,
    params: Optional[np.ndarray] = None,
) -> np.ndarray:
    """C(q, qd) qd + G(q)."""
    qd = np.asarray(qd, dtype=float)
    return rnea(model, RneaInputs(q, qd, qd, np.zeros_like(qd)), params).torque
