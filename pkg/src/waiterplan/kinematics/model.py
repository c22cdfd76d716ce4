"""Kinematic chain, inertial parameters and obstacles of the extended arm."""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionError, ModelError
from ..setops import Interval, Zonotope

logger = logging.getLogger(__name__)

# Layout of the per-link inertial parameter vector.
MASS = 0
COM = slice(1, 4)
INERTIA = slice(4, 10)
N_PARAMS = 10
PARAM_NAMES = ("m", "cx", "cy", "cz", "ixx", "iyy", "izz", "ixy", "ixz", "iyz")

_UNIT_TOL = 1e-9
_DEGENERATE_INFLATION = 1e-9


class JointKind(Enum):
    REVOLUTE = "revolute"
    FIXED = "fixed"


@dataclass(frozen=True)
class JointModel:
    """
    One joint of the chain, relating frame j to its parent frame j-1.

    Attributes:
        kind (JointKind): Revolute joints consume one coordinate; fixed ones none.
        axis (np.ndarray): Unit rotation axis z_j in frame j.
        offset (np.ndarray): Origin of frame j in frame j-1 (m).
        rotation (np.ndarray): Constant rotation of frame j in frame j-1 at q = 0.
    """
    kind: JointKind
    axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float).reshape(-1)
        offset = np.asarray(self.offset, dtype=float).reshape(-1)
        rotation = np.asarray(self.rotation, dtype=float)
        if axis.shape != (3,) or offset.shape != (3,) or rotation.shape != (3, 3):
            raise DimensionError("joint axis and offset must be 3-vectors and rotation 3x3")
        if self.kind == JointKind.REVOLUTE and abs(np.linalg.norm(axis) - 1.0) > _UNIT_TOL:
            raise ModelError(f"revolute joint axis must be a unit vector, got {axis}")
        if np.linalg.norm(rotation.T @ rotation - np.eye(3)) > 1e-9 or np.linalg.det(rotation) < 0:
            raise ModelError("joint rotation must be a proper orthonormal matrix")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "rotation", rotation)

    @property
    def is_revolute(self) -> bool:
        return self.kind == JointKind.REVOLUTE

    @property
    def skew_axis(self) -> np.ndarray:
        x, y, z = self.axis
        return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def inertia_matrix(values: np.ndarray) -> np.ndarray:
    """Symmetric inertia tensors from (..., 6) vectors (ixx, iyy, izz, ixy, ixz, iyz)."""
    values = np.asarray(values, dtype=float)
    out = np.empty(values.shape[:-1] + (3, 3))
    out[..., 0, 0], out[..., 1, 1], out[..., 2, 2] = values[..., 0], values[..., 1], values[..., 2]
    out[..., 0, 1] = out[..., 1, 0] = values[..., 3]
    out[..., 0, 2] = out[..., 2, 0] = values[..., 4]
    out[..., 1, 2] = out[..., 2, 1] = values[..., 5]
    return out


@dataclass(frozen=True)
class ExtendedArmModel:
    """
    Serial arm extended by the grasped tray and the carried object.

    The tray is rigidly attached to the last actuated link and its inertial
    values are part of that link's. The object hangs off a final fixed joint
    whose frame is the contact frame: origin at the projection of the
    object's center of mass onto the tray surface, z-axis along the tray
    normal.

    Attributes:
        joints (Tuple[JointModel, ...]): One joint per link; the last is fixed.
        link_volumes (Tuple[Zonotope, ...]): Link occupancy in each link frame (m).
        nominal (np.ndarray): Nominal inertial parameters, shape (n_links, 10).
        lower (np.ndarray): Lower inertial parameter bounds, shape (n_links, 10).
        upper (np.ndarray): Upper inertial parameter bounds, shape (n_links, 10).
        joint_limits (Optional[Tuple[np.ndarray, np.ndarray]]): Position limits of the actuated joints.
        name (str): Model name used in logs.
    """
    joints: Tuple[JointModel, ...]
    link_volumes: Tuple[Zonotope, ...]
    nominal: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    joint_limits: Optional[Tuple[np.ndarray, np.ndarray]] = None
    name: str = "arm"

    def __post_init__(self):
        joints = tuple(self.joints)
        volumes = tuple(self.link_volumes)
        n_links = len(joints)
        if n_links < 2:
            raise ModelError("an extended arm needs at least one actuated joint and the object joint")
        if joints[-1].kind != JointKind.FIXED:
            raise ModelError("the last joint must be the fixed object joint")
        if len(volumes) != n_links:
            raise ModelError(f"{len(volumes)} link volumes for {n_links} links")
        nominal = np.asarray(self.nominal, dtype=float)
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        for name, arr in (("nominal", nominal), ("lower", lower), ("upper", upper)):
            if arr.shape != (n_links, N_PARAMS):
                raise ModelError(f"{name} inertial parameters must have shape {(n_links, N_PARAMS)}, got {arr.shape}")
        if np.any(lower > upper):
            raise ModelError("inertial parameter interval with lower > upper")
        if np.any(nominal < lower - 1e-12) or np.any(nominal > upper + 1e-12):
            raise ModelError("nominal inertial parameters must lie inside their intervals")
        if np.any(lower[:, MASS] <= 0):
            raise ModelError("link masses must be positive")
        for j, values in enumerate(nominal[:, INERTIA]):
            if np.linalg.eigvalsh(inertia_matrix(values)).min() < -1e-12:
                raise ModelError(f"nominal inertia of link {j} is not positive semidefinite")
        object.__setattr__(self, "joints", joints)
        object.__setattr__(self, "link_volumes", volumes)
        object.__setattr__(self, "nominal", nominal)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.joint_limits is not None:
            lo, hi = (np.asarray(x, dtype=float).reshape(-1) for x in self.joint_limits)
            if lo.size != self.n_q or hi.size != self.n_q or np.any(lo > hi):
                raise ModelError("joint limits must be n_q ordered pairs")
            object.__setattr__(self, "joint_limits", (lo, hi))

    @property
    def n_links(self) -> int:
        return len(self.joints)

    @property
    def n_q(self) -> int:
        return sum(1 for joint in self.joints if joint.is_revolute)

    @property
    def actuated(self) -> List[int]:
        """Link indices of the revolute joints, in coordinate order."""
        return [j for j, joint in enumerate(self.joints) if joint.is_revolute]

    @property
    def coordinate_of(self) -> List[Optional[int]]:
        """For each link, the coordinate index of its joint or None for fixed joints."""
        out, count = [], 0
        for joint in self.joints:
            if joint.is_revolute:
                out.append(count)
                count += 1
            else:
                out.append(None)
        return out

    @property
    def object_link(self) -> int:
        return self.n_links - 1

    @property
    def parameter_interval(self) -> Interval:
        return Interval(self.lower, self.upper)

    @property
    def uncertain_parameters(self) -> np.ndarray:
        """Boolean mask of parameters with a nonzero interval width."""
        return self.upper > self.lower

    def within_limits(self, q: np.ndarray, tol: float = 0.0) -> bool:
        if self.joint_limits is None:
            return True
        lo, hi = self.joint_limits
        q = np.asarray(q, dtype=float)
        return bool(np.all(q >= lo - tol) and np.all(q <= hi + tol))

    def sample_parameters(self, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
        """Inertial parameters drawn uniformly from [lower, upper]."""
        shape = (self.n_links, N_PARAMS) if size is None else (size, self.n_links, N_PARAMS)
        return self.lower + rng.uniform(0.0, 1.0, size=shape) * (self.upper - self.lower)

    def with_parameters(self, nominal: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> "ExtendedArmModel":
        return ExtendedArmModel(self.joints, self.link_volumes, nominal, lower, upper, self.joint_limits, self.name)


def _has_full_rank(z: Zonotope) -> bool:
    return z.n_generators >= 3 and np.linalg.matrix_rank(z.generators, tol=1e-12) == 3


def _facet_normals(generators: np.ndarray) -> np.ndarray:
    normals = []
    for i, j in itertools.combinations(range(generators.shape[0]), 2):
        n = np.cross(generators[i], generators[j])
        norm = np.linalg.norm(n)
        if norm < 1e-12:
            continue
        n = n / norm
        # one representative per +-n pair
        lead = np.flatnonzero(np.abs(n) > 1e-12)[0]
        if n[lead] < 0:
            n = -n
        if not any(np.allclose(n, m, atol=1e-9) for m in normals):
            normals.append(n)
    return np.array(normals)


def obstacle_halfspaces(z: Zonotope) -> Tuple[np.ndarray, np.ndarray]:
    """
    Halfspace representation A p <= b of a 3-D zonotope.

    Facet normals are the normalized cross products of generator pairs;
    each normal n gives the two facets n.p <= n.c + sum|n.g| and
    -n.p <= -n.c + sum|n.g|. A flat zonotope is first inflated by 1e-9
    along each axis (logged as a warning).
    """
    z, _ = full_dimensional(z)
    normals = _facet_normals(z.generators)
    spread = np.abs(normals @ z.generators.T).sum(axis=1)
    offset = normals @ z.center
    A = np.vstack([normals, -normals])
    b = np.concatenate([offset + spread, -offset + spread])
    return A, b


def full_dimensional(z: Zonotope) -> Tuple[Zonotope, bool]:
    """z itself, or z inflated by 1e-9 per axis when it is not full-dimensional."""
    if z.dimension != 3:
        raise DimensionError(f"obstacles must be 3-D zonotopes, got dimension {z.dimension}")
    if _has_full_rank(z):
        return z, False
    logger.warning("degenerate obstacle zonotope inflated by %g per axis", _DEGENERATE_INFLATION)
    generators = np.vstack([z.generators, _DEGENERATE_INFLATION * np.eye(3)])
    return Zonotope(z.center, generators), True


@dataclass(frozen=True)
class Obstacle:
    """
    Static obstacle with its halfspace representation.

    Attributes:
        zonotope (Zonotope): Obstacle volume (m).
        A (np.ndarray): Facet normals, shape (n_f, 3).
        b (np.ndarray): Facet offsets, shape (n_f,).
        inflated (bool): Whether a flat zonotope had to be inflated.
        name (str): Label used in logs.
    """
    zonotope: Zonotope
    A: np.ndarray
    b: np.ndarray
    inflated: bool = False
    name: str = "obstacle"

    @classmethod
    def from_zonotope(cls, z: Zonotope, name: str = "obstacle") -> "Obstacle":
        solid, inflated = full_dimensional(z)
        A, b = obstacle_halfspaces(solid)
        return cls(zonotope=solid, A=A, b=b, inflated=inflated, name=name)

    @classmethod
    def box(cls, center: Sequence[float], half_extent: Sequence[float], name: str = "obstacle") -> "Obstacle":
        return cls.from_zonotope(Zonotope(np.asarray(center, float), np.diag(np.asarray(half_extent, float))), name)

    def contains(self, p: np.ndarray) -> bool:
        return bool(np.all(self.A @ np.asarray(p, dtype=float) - self.b <= 0))

    def separation(self, occupancy: Zonotope) -> float:
        """
        -max_row inf(A FO - b) for a pointwise link occupancy.

        Negative values certify that the occupancy lies outside the obstacle.
        """
        lower = self.A @ occupancy.center - self.b - np.abs(self.A @ occupancy.generators.T).sum(axis=1)
        return float(-lower.max())
