"""Newton-Euler dynamics of the extended arm, pointwise and set-valued."""

from .mass import estimate_sigma_bounds, estimate_sigma_m, mass_matrix
from .pz_rnea import LinkParameterSet, WrenchSet, link_parameter_sets, parameter_index, pz_rnea
from .rnea import RneaInputs, RneaResult, Wrench, bias_torque, inverse_dynamics, rnea

__all__ = [
    'LinkParameterSet',
    'RneaInputs',
    'RneaResult',
    'Wrench',
    'WrenchSet',
    'bias_torque',
    'estimate_sigma_bounds',
    'estimate_sigma_m',
    'inverse_dynamics',
    'link_parameter_sets',
    'mass_matrix',
    'parameter_index',
    'pz_rnea',
    'rnea',
]
