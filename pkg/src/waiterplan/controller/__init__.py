"""Robust tracking controller and its ultimate bounds."""

from .robust import (
    ControlOutput,
    ControllerConfig,
    ModifiedReference,
    TrackingBounds,
    control_step,
    disturbance_measure,
    lyapunov_lower_bound,
    modified_reference,
    nominal_input,
    pz_input,
    robust_input,
    robust_input_bound,
    tracking_bounds,
)

__all__ = [
    'ControlOutput',
    'ControllerConfig',
    'ModifiedReference',
    'TrackingBounds',
    'control_step',
    'disturbance_measure',
    'lyapunov_lower_bound',
    'modified_reference',
    'nominal_input',
    'pz_input',
    'robust_input',
    'robust_input_bound',
    'tracking_bounds',
]
