"""Forward kinematics and forward occupancy, pointwise and set-valued."""

from typing import List, Sequence, Tuple, Union

import numpy as np

from ..config import DEFAULT_MAX_TERMS, DEFAULT_TAYLOR_DEGREE
from ..errors import DimensionError
from ..setops import PolyZonotope, Zonotope, pz_reduce, pz_sin_cos, zonotope_to_pz
from .model import ExtendedArmModel, JointModel

Frame = Tuple[np.ndarray, np.ndarray]
PZFrame = Tuple[PolyZonotope, PolyZonotope]


def axis_rotation(joint: JointModel, q: Union[float, np.ndarray]) -> np.ndarray:
    """Rotations R0 (I + sin q K + (1 - cos q) K^2) for scalar or batched q."""
    q = np.asarray(q, dtype=float)
    K = joint.skew_axis
    s = np.sin(q)[..., None, None]
    c = np.cos(q)[..., None, None]
    return joint.rotation @ (np.eye(3) + s * K + (1.0 - c) * (K @ K))


def local_rotations(model: ExtendedArmModel, q: np.ndarray) -> np.ndarray:
    """
    Parent-from-child rotations R_j^{j-1}(q) of every joint.

    Args:
        q: Joint positions, shape (..., n_q).

    Returns:
        Array of shape (..., n_links, 3, 3).
    """
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != model.n_q:
        raise DimensionError(f"expected {model.n_q} joint positions, got {q.shape[-1]}")
    batch = q.shape[:-1]
    out = np.empty(batch + (model.n_links, 3, 3))
    for j, (joint, col) in enumerate(zip(model.joints, model.coordinate_of)):
        if col is None:
            out[..., j, :, :] = joint.rotation
        else:
            out[..., j, :, :] = axis_rotation(joint, q[..., col])
    return out


def fk(model: ExtendedArmModel, q: np.ndarray) -> List[Frame]:
    """
    World orientation and position of every joint frame.

    R_j = R_{j-1} R_j^{j-1}(q_j) and p_j = p_{j-1} + R_{j-1} p_j^{j-1}, with
    the base frame at the origin.
    """
    local = local_rotations(model, np.asarray(q, dtype=float))
    R, p = np.eye(3), np.zeros(3)
    frames = []
    for j, joint in enumerate(model.joints):
        p = p + R @ joint.offset
        R = R @ local[j]
        frames.append((R, p))
    return frames


def fo(model: ExtendedArmModel, q: np.ndarray) -> List[Zonotope]:
    """Occupancy p_j (+) R_j L_j of every link at configuration q."""
    return [
        Zonotope(p + R @ volume.center, volume.generators @ R.T)
        for (R, p), volume in zip(fk(model, q), model.link_volumes)
    ]


def pz_trig(q: PolyZonotope, degree: int = DEFAULT_TAYLOR_DEGREE) -> Tuple[PolyZonotope, PolyZonotope]:
    """Sine and cosine sets of a scalar joint-angle set."""
    return pz_sin_cos(q, degree)


def _joint_angles(model: ExtendedArmModel, q: Union[PolyZonotope, Sequence[PolyZonotope]]) -> List[PolyZonotope]:
    if isinstance(q, PolyZonotope):
        if q.shape != (model.n_q,):
            raise DimensionError(f"expected a joint set of shape ({model.n_q},), got {q.shape}")
        return [q[j] for j in range(model.n_q)]
    q = list(q)
    if len(q) != model.n_q:
        raise DimensionError(f"expected {model.n_q} joint sets, got {len(q)}")
    return q


def pz_local_rotation(joint: JointModel, q: PolyZonotope, degree: int = DEFAULT_TAYLOR_DEGREE) -> PolyZonotope:
    """Rotation set R0 (I + sin(q) K + (1 - cos(q)) K^2) of a revolute joint."""
    sin_q, cos_q = pz_trig(q, degree)
    K = joint.skew_axis
    return joint.rotation + sin_q * (joint.rotation @ K) + (1.0 - cos_q) * (joint.rotation @ K @ K)


def pz_local_rotations(
    model: ExtendedArmModel,
    q: Union[PolyZonotope, Sequence[PolyZonotope]],
    degree: int = DEFAULT_TAYLOR_DEGREE,
) -> List[PolyZonotope]:
    angles = _joint_angles(model, q)
    out = []
    for joint, col in zip(model.joints, model.coordinate_of):
        if col is None:
            out.append(PolyZonotope.constant(joint.rotation))
        else:
            out.append(pz_local_rotation(joint, angles[col], degree))
    return out


def pzfk(
    model: ExtendedArmModel,
    q: Union[PolyZonotope, Sequence[PolyZonotope]],
    max_terms: int = DEFAULT_MAX_TERMS,
    degree: int = DEFAULT_TAYLOR_DEGREE,
    rotations: List[PolyZonotope] = None,
) -> List[PZFrame]:
    """
    Set-valued forward kinematics.

    Same recursion as fk with polynomial zonotope products, reduced after
    each frame composition. For every member of the joint sets, the fk
    result lies in the returned frame sets.
    """
    local = rotations if rotations is not None else pz_local_rotations(model, q, degree)
    R = PolyZonotope.constant(np.eye(3))
    p = PolyZonotope.zeros((3,))
    frames = []
    for j, joint in enumerate(model.joints):
        p = pz_reduce(p + R @ joint.offset, max_terms)
        R = pz_reduce(R @ local[j], max_terms)
        frames.append((R, p))
    return frames


def pzfo(
    model: ExtendedArmModel,
    q: Union[PolyZonotope, Sequence[PolyZonotope]],
    max_terms: int = DEFAULT_MAX_TERMS,
    degree: int = DEFAULT_TAYLOR_DEGREE,
    frames: List[PZFrame] = None,
) -> List[PolyZonotope]:
    """Set-valued forward occupancy p_j (+) R_j L_j of every link."""
    if frames is None:
        frames = pzfk(model, q, max_terms, degree)
    occupancy = []
    for (R, p), volume in zip(frames, model.link_volumes):
        occupancy.append(pz_reduce(p + R @ zonotope_to_pz(volume), max_terms))
    return occupancy
