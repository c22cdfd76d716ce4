"""Non-prehensile contact constraints between tray and object."""

from .constraints import (
    ContactConstraints,
    ContactModel,
    contact_residuals,
    h_sep,
    h_slip,
    h_tip,
    pz_contact_constraints,
    zmp_point,
)

__all__ = [
    'ContactConstraints',
    'ContactModel',
    'contact_residuals',
    'h_sep',
    'h_slip',
    'h_tip',
    'pz_contact_constraints',
    'zmp_point',
]
