"""Zonotopes: centrally symmetric polytopes given by a center and generators."""

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DimensionError
from .interval import Interval


@dataclass(frozen=True)
class Zonotope:
    """
    Z = {c + sum_i beta_i g_i : beta_i in [-1, 1]}.

    Attributes:
        center (np.ndarray): Center c, shape (n,).
        generators (np.ndarray): Generators g_i stacked as rows, shape (m, n).
    """
    center: np.ndarray
    generators: np.ndarray

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(-1)
        generators = np.asarray(self.generators, dtype=float)
        if generators.size == 0:
            generators = np.zeros((0, center.size))
        elif generators.ndim == 1:
            generators = generators.reshape(1, -1)
        if generators.ndim != 2 or generators.shape[1] != center.size:
            raise DimensionError(
                f"generators of shape {generators.shape} do not match center of dimension {center.size}"
            )
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "generators", generators)

    @classmethod
    def from_interval(cls, box: Interval) -> "Zonotope":
        center = box.center.reshape(-1)
        radius = box.radius.reshape(-1)
        return cls(center, np.diag(radius)[radius > 0])

    @property
    def dimension(self) -> int:
        return self.center.size

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]

    def to_interval(self) -> Interval:
        return zono_to_interval(self)

    def translate(self, offset: np.ndarray) -> "Zonotope":
        return Zonotope(self.center + np.asarray(offset, dtype=float), self.generators)

    def linear_map(self, matrix: np.ndarray) -> "Zonotope":
        matrix = np.asarray(matrix, dtype=float)
        return Zonotope(matrix @ self.center, self.generators @ matrix.T)

    def point(self, beta: np.ndarray) -> np.ndarray:
        """Member of the zonotope for coefficients beta in [-1, 1]^m."""
        return self.center + np.asarray(beta, dtype=float) @ self.generators

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n members with coefficients uniform in [-1, 1]^m."""
        beta = rng.uniform(-1.0, 1.0, size=(n, self.n_generators))
        return self.center[None, :] + beta @ self.generators

    def vertices(self, max_generators: Optional[int] = 16) -> np.ndarray:
        """
        All points c + sum(+-g_i); a superset of the true vertex set.

        Raises:
            DimensionError: If there are more than ``max_generators`` generators.
        """
        m = self.n_generators
        if max_generators is not None and m > max_generators:
            raise DimensionError(f"refusing to enumerate 2^{m} sign combinations")
        signs = np.array(list(itertools.product((-1.0, 1.0), repeat=m))).reshape(-1, m)
        return self.center[None, :] + signs @ self.generators


def zono_to_interval(z: Zonotope) -> Interval:
    """Interval hull [c - sum|g_i|, c + sum|g_i|] of a zonotope."""
    radius = np.abs(z.generators).sum(axis=0)
    return Interval(z.center - radius, z.center + radius)
