"""Set representations: intervals, zonotopes and polynomial zonotopes."""

from .analytic import pz_analytic, pz_sin_cos
from .dump import decode_dump, encode_dump, load_dump, save_dump
from .indeterminates import (
    IndeterminateId,
    IndeterminateTag,
    allocation_scope,
    fresh_remainder_id,
    inertial_id,
    parameter_id,
    position_error_id,
    time_id,
    velocity_error_id,
)
from .interval import Interval, interval_cos, interval_ops, interval_pow, interval_sin, skew_interval
from .polyzono import (
    PolyZonotope,
    as_pz,
    interval_to_pz,
    pz_add,
    pz_bounds,
    pz_cross,
    pz_differentiate,
    pz_evaluate,
    pz_inf,
    pz_mul,
    pz_reduce,
    pz_slice,
    pz_sum,
    pz_sup,
    skew,
    slice_many,
    stack,
    zonotope_to_pz,
)
from .zonotope import Zonotope, zono_to_interval

__all__ = [
    'IndeterminateId',
    'IndeterminateTag',
    'Interval',
    'PolyZonotope',
    'Zonotope',
    'allocation_scope',
    'as_pz',
    'decode_dump',
    'encode_dump',
    'fresh_remainder_id',
    'inertial_id',
    'interval_cos',
    'interval_ops',
    'interval_pow',
    'interval_sin',
    'interval_to_pz',
    'load_dump',
    'parameter_id',
    'position_error_id',
    'pz_add',
    'pz_analytic',
    'pz_bounds',
    'pz_cross',
    'pz_differentiate',
    'pz_evaluate',
    'pz_inf',
    'pz_mul',
    'pz_reduce',
    'pz_sin_cos',
    'pz_slice',
    'pz_sum',
    'pz_sup',
    'save_dump',
    'skew',
    'skew_interval',
    'slice_many',
    'stack',
    'time_id',
    'velocity_error_id',
    'zono_to_interval',
    'zonotope_to_pz',
]
