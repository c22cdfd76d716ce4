"""Newton-Euler recursion over polynomial zonotopes."""

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from ..config import DEFAULT_MAX_TERMS, DEFAULT_TAYLOR_DEGREE, GRAVITY
from ..errors import DimensionError
from ..kinematics import COM, INERTIA, MASS, N_PARAMS, ExtendedArmModel, pz_local_rotations
from ..setops import (
    Interval,
    PolyZonotope,
    as_pz,
    inertial_id,
    interval_to_pz,
    pz_cross,
    pz_reduce,
    pz_sum,
    stack,
)
from .rnea import RneaInputs

# symmetric basis matrices of the inertia tensor, in (ixx, iyy, izz, ixy, ixz, iyz) order
_INERTIA_BASIS = np.zeros((6, 3, 3))
for _k, (_a, _b) in enumerate(((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))):
    _INERTIA_BASIS[_k, _a, _b] = _INERTIA_BASIS[_k, _b, _a] = 1.0


@dataclass(frozen=True)
class WrenchSet:
    """
    Per-joint force and moment sets, each in its joint frame.

    Attributes:
        forces (Tuple[PolyZonotope, ...]): Force set per link.
        moments (Tuple[PolyZonotope, ...]): Moment set per link.
    """
    forces: Tuple[PolyZonotope, ...]
    moments: Tuple[PolyZonotope, ...]

    def wrench(self, link: int) -> Tuple[PolyZonotope, PolyZonotope]:
        return self.forces[link], self.moments[link]

    @property
    def contact(self) -> Tuple[PolyZonotope, PolyZonotope]:
        """Wrench through the object joint, in the contact frame."""
        return self.forces[-1], self.moments[-1]


@dataclass(frozen=True)
class LinkParameterSet:
    """Mass, center of mass and inertia tensor of one link as sets."""
    mass: PolyZonotope
    com: PolyZonotope
    inertia: PolyZonotope


def parameter_index(link: int, param: int) -> int:
    """Global index of one inertial parameter; its indeterminate is inertial_id of it."""
    return link * N_PARAMS + param


def link_parameter_sets(
    model: ExtendedArmModel,
    params: Union[np.ndarray, Interval, None] = None,
) -> List[LinkParameterSet]:
    """
    Inertial parameters as polynomial zonotopes.

    Point parameters become constants. For an interval, each uncertain
    parameter gets the single indeterminate inertial_id(link * 10 + p), used
    everywhere the parameter appears.
    """
    if params is None:
        params = model.nominal
    if isinstance(params, Interval):
        if params.shape != (model.n_links, N_PARAMS):
            raise DimensionError(f"parameter interval must have shape {(model.n_links, N_PARAMS)}")
        rows = [
            interval_to_pz(params[j], [inertial_id(parameter_index(j, p)) for p in range(N_PARAMS)])
            for j in range(model.n_links)
        ]
    else:
        params = np.asarray(params, dtype=float)
        if params.shape != (model.n_links, N_PARAMS):
            raise DimensionError(f"parameters must have shape {(model.n_links, N_PARAMS)}, got {params.shape}")
        rows = [PolyZonotope.constant(params[j]) for j in range(model.n_links)]
    sets = []
    for row in rows:
        entries = row[INERTIA]
        inertia = pz_sum([entries[k] * _INERTIA_BASIS[k] for k in range(6)])
        sets.append(LinkParameterSet(mass=row[MASS], com=row[COM], inertia=inertia))
    return sets


def pz_rnea(
    model: ExtendedArmModel,
    inputs: RneaInputs,
    params: Union[np.ndarray, Interval, None] = None,
    max_terms: int = DEFAULT_MAX_TERMS,
    degree: int = DEFAULT_TAYLOR_DEGREE,
    rotations: Optional[List[PolyZonotope]] = None,
) -> Tuple[PolyZonotope, WrenchSet]:
    """
    Torque and wrench sets containing rnea for every member of the inputs.

    Args:
        model: The arm.
        inputs: Vector polynomial zonotopes of shape (n_q,).
        params: Nominal parameters (array) or an interval of parameters.
        max_terms: Reduction order applied after each link step.
        degree: Taylor degree of the joint-angle trigonometry.
        rotations: Precomputed local rotation sets, as from pz_local_rotations.

    Returns:
        The torque set of shape (n_q,) and the per-joint wrench sets.
    """
    q, qd, qd_aux, qdd_aux = (as_pz(x) for x in (inputs.q, inputs.qd, inputs.qd_aux, inputs.qdd_aux))
    for name, x in (("q", q), ("qd", qd), ("qd_aux", qd_aux), ("qdd_aux", qdd_aux)):
        if x.shape != (model.n_q,):
            raise DimensionError(f"{name} must have shape ({model.n_q},), got {x.shape}")
    if rotations is None:
        rotations = pz_local_rotations(model, q, degree)
    link_params = link_parameter_sets(model, params)

    def reduce(x: PolyZonotope) -> PolyZonotope:
        return pz_reduce(x, max_terms)

    zero = PolyZonotope.zeros((3,))
    w, w_aux, w_dot = zero, zero, zero
    v_dot = as_pz(np.array([0.0, 0.0, GRAVITY if inputs.gravity else 0.0]))
    F, N = [], []
    for j, (joint, col) in enumerate(zip(model.joints, model.coordinate_of)):
        Rt = rotations[j].T
        p = joint.offset
        v_dot = reduce(Rt @ (v_dot + pz_cross(w_dot, p) + pz_cross(w, pz_cross(w_aux, p))))
        w_aux_parent = reduce(Rt @ w_aux)
        if col is None:
            w = reduce(Rt @ w)
            w_dot = reduce(Rt @ w_dot)
            w_aux = w_aux_parent
        else:
            spin = qd[col] * joint.axis
            w_dot = reduce(Rt @ w_dot + pz_cross(w_aux_parent, spin) + qdd_aux[col] * joint.axis)
            w = reduce(Rt @ w + spin)
            w_aux = reduce(w_aux_parent + qd_aux[col] * joint.axis)

        lp = link_params[j]
        v_com = v_dot + pz_cross(w_dot, lp.com) + pz_cross(w, pz_cross(w_aux, lp.com))
        F.append(reduce(lp.mass * reduce(v_com)))
        N.append(reduce(lp.inertia @ w_dot + pz_cross(w_aux, lp.inertia @ w)))

    forces: List[PolyZonotope] = [None] * model.n_links
    moments: List[PolyZonotope] = [None] * model.n_links
    f_child, n_child = zero, zero
    R_child = PolyZonotope.constant(np.eye(3))
    p_child = np.zeros(3)
    torques: List[PolyZonotope] = [None] * model.n_q
    for j in range(model.n_links - 1, -1, -1):
        transmitted = R_child @ f_child
        forces[j] = reduce(transmitted + F[j])
        moments[j] = reduce(R_child @ n_child + pz_cross(link_params[j].com, F[j])
                            + pz_cross(p_child, transmitted) + N[j])
        col = model.coordinate_of[j]
        if col is not None:
            torques[col] = moments[j] @ model.joints[j].axis
        f_child, n_child = forces[j], moments[j]
        R_child = rotations[j]
        p_child = model.joints[j].offset

    return stack(torques), WrenchSet(tuple(forces), tuple(moments))
