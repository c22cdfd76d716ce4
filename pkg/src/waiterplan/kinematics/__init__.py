"""Kinematic model of the extended arm, forward kinematics and occupancy."""

from .forward import axis_rotation, fk, fo, local_rotations, pz_local_rotations, pz_trig, pzfk, pzfo
from .model import (
    COM,
    INERTIA,
    MASS,
    N_PARAMS,
    PARAM_NAMES,
    ExtendedArmModel,
    JointKind,
    JointModel,
    Obstacle,
    full_dimensional,
    inertia_matrix,
    obstacle_halfspaces,
)

__all__ = [
    'COM',
    'INERTIA',
    'MASS',
    'N_PARAMS',
    'PARAM_NAMES',
    'ExtendedArmModel',
    'JointKind',
    'JointModel',
    'Obstacle',
    'axis_rotation',
    'fk',
    'fo',
    'full_dimensional',
    'inertia_matrix',
    'local_rotations',
    'obstacle_halfspaces',
    'pz_local_rotations',
    'pz_trig',
    'pzfk',
    'pzfo',
]
