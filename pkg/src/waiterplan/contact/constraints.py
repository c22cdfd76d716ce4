"""
Separation, slip and tip residuals of the object resting on the tray.

Every residual is <= 0 exactly when the corresponding failure mode is
excluded. Slip and tip are written without square roots so that their
set versions need only polynomial zonotope products.
"""

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Optional, Tuple, Union

import numpy as np

from ..config import DEFAULT_MAX_TERMS
from ..errors import DomainError, UndefinedZMPError
from ..setops import IndeterminateId, Interval, PolyZonotope, pz_cross, pz_reduce, pz_sup, slice_many

_ZMP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ContactModel:
    """
    Circular contact patch between object and tray.

    Attributes:
        mu (float): Lower bound of the static friction coefficient.
        radius (float): Lower bound of the contact patch radius (m).
        normal (np.ndarray): Unit tray normal in the contact frame.
    """
    mu: float
    radius: float
    normal: np.ndarray = None

    def __post_init__(self):
        normal = np.array([0.0, 0.0, 1.0]) if self.normal is None else np.asarray(self.normal, dtype=float)
        if self.mu <= 0:
            raise DomainError(f"friction coefficient must be positive, got {self.mu}")
        if self.radius <= 0:
            raise DomainError(f"contact radius must be positive, got {self.radius}")
        if normal.shape != (3,) or abs(np.linalg.norm(normal) - 1.0) > 1e-9:
            raise DomainError(f"contact normal must be a unit 3-vector, got {normal}")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "_tangent_projector", np.eye(3) - np.outer(normal, normal))

    @classmethod
    def from_bounds(
        cls,
        mu: Union[float, Interval],
        radius: Union[float, Interval],
        normal: Optional[np.ndarray] = None,
    ) -> "ContactModel":
        """Model using the lower bounds of uncertain friction and radius."""
        mu = float(mu.lo) if isinstance(mu, Interval) else float(mu)
        radius = float(radius.lo) if isinstance(radius, Interval) else float(radius)
        return cls(mu, radius, normal)

    @property
    def tangent_projector(self) -> np.ndarray:
        return self._tangent_projector


WrenchLike = Union[Tuple[np.ndarray, np.ndarray], "Wrench"]


def _split(w) -> Tuple[np.ndarray, np.ndarray]:
    if hasattr(w, "f") and hasattr(w, "n"):
        return np.asarray(w.f, dtype=float), np.asarray(w.n, dtype=float)
    f, n = w
    return np.asarray(f, dtype=float), np.asarray(n, dtype=float)


def _normal(cm: Optional[ContactModel]) -> np.ndarray:
    return np.array([0.0, 0.0, 1.0]) if cm is None else cm.normal


def h_sep(w: WrenchLike, cm: Optional[ContactModel] = None) -> np.ndarray:
    """Vertical separation -n.f_c; the object stays pressed on the tray when <= 0."""
    f, _ = _split(w)
    return -(f @ _normal(cm))


def h_slip(w: WrenchLike, cm: ContactModel) -> np.ndarray:
    """Linear slip |f_t|^2 - (mu n.f_c)^2 with f_t the tangential force."""
    f, _ = _split(w)
    normal_force = f @ cm.normal
    tangential = f @ cm.tangent_projector.T
    return np.sum(tangential * tangential, axis=-1) - (cm.mu * normal_force) ** 2


def h_tip(w: WrenchLike, cm: ContactModel) -> np.ndarray:
    """Tip |n x n_c|^2 - r^2 (n.f_c)^2; the ZMP stays in the contact disk when <= 0."""
    f, n = _split(w)
    moment = np.cross(cm.normal, n)
    return np.sum(moment * moment, axis=-1) - cm.radius ** 2 * (f @ cm.normal) ** 2


def zmp_point(w: WrenchLike, cm: ContactModel) -> np.ndarray:
    """
    Zero moment point (n x n_c) / (n.f_c), xy components in the contact frame.

    Raises:
        UndefinedZMPError: If the normal force vanishes.
    """
    f, n = _split(w)
    denominator = f @ cm.normal
    if np.any(np.abs(denominator) < _ZMP_TOL):
        raise UndefinedZMPError("zero normal force: the zero moment point is undefined")
    return (np.cross(cm.normal, n) / np.asarray(denominator)[..., None])[..., :2]


def contact_residuals(w: WrenchLike, cm: ContactModel) -> np.ndarray:
    """Stacked (sep, slip, tip) residuals, shape (..., 3)."""
    return np.stack([h_sep(w, cm), h_slip(w, cm), h_tip(w, cm)], axis=-1)


class ContactConstraints(NamedTuple):
    """Residual sets of the three contact constraints over one subinterval."""
    sep: PolyZonotope
    slip: PolyZonotope
    tip: PolyZonotope

    def sup(self) -> np.ndarray:
        return np.array([float(pz_sup(p)) for p in self])

    def sup_at(self, assignment: Mapping[IndeterminateId, float]) -> np.ndarray:
        """Upper bounds of the residuals after slicing the given indeterminates."""
        return np.array([float(pz_sup(slice_many(p, assignment))) for p in self])


def pz_contact_constraints(
    force: PolyZonotope,
    moment: PolyZonotope,
    cm: ContactModel,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ContactConstraints:
    """
    Residual sets from the contact-frame wrench set.

    For every member of the wrench set the pointwise residual lies in the
    returned set, so sup <= 0 certifies the constraint.
    """
    normal_force = pz_reduce(force @ cm.normal, max_terms)
    tangential = pz_reduce(cm.tangent_projector @ force, max_terms)
    tipping = pz_reduce(pz_cross(cm.normal, moment), max_terms)
    sep = -normal_force
    slip = pz_reduce(tangential @ tangential - (cm.mu ** 2) * (normal_force * normal_force), max_terms)
    tip = pz_reduce(tipping @ tipping - (cm.radius ** 2) * (normal_force * normal_force), max_terms)
    return ContactConstraints(sep, slip, tip)
