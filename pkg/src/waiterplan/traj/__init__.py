"""Parameterized desired trajectories and their set over-approximations."""

from .bernstein import (
    BernsteinTrajectory,
    DesiredReach,
    InitialCondition,
    bernstein_from_ic,
    default_eta,
    eval_desired,
    parameter_pz,
    power_coefficients,
    pz_desired,
)
from .inflation import TrackedReach, TrackingBoundsInflation, error_pz, inflate_tracking_error
from .partition import TimePartition, time_partition

__all__ = [
    'BernsteinTrajectory',
    'DesiredReach',
    'InitialCondition',
    'TimePartition',
    'TrackedReach',
    'TrackingBoundsInflation',
    'bernstein_from_ic',
    'default_eta',
    'error_pz',
    'eval_desired',
    'inflate_tracking_error',
    'parameter_pz',
    'power_coefficients',
    'pz_desired',
    'time_partition',
]
