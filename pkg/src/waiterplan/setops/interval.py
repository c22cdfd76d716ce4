"""Interval vectors and matrices with conservative arithmetic."""

import math
from typing import Tuple, Union

import numpy as np

from ..errors import DimensionError, DomainError

ArrayLike = Union[float, np.ndarray]

_ORDER_TOL = 1e-12


class Interval:
    """
    An n-dimensional interval [lo, hi], stored element-wise.

    Scalars, vectors and matrices are all represented; ``lo`` and ``hi``
    always share a shape.

    Attributes:
        lo (np.ndarray): Element-wise infimum.
        hi (np.ndarray): Element-wise supremum.
    """

    __slots__ = ("lo", "hi")
    __array_ufunc__ = None

    def __init__(self, lo: ArrayLike, hi: ArrayLike = None):
        lo = np.array(lo, dtype=float)
        hi = lo.copy() if hi is None else np.array(hi, dtype=float)
        if lo.shape != hi.shape:
            raise DimensionError(f"interval bounds disagree in shape: {lo.shape} vs {hi.shape}")
        if np.any(lo > hi + _ORDER_TOL * np.maximum(1.0, np.abs(hi))):
            raise DomainError(f"interval with lo > hi: lo={lo}, hi={hi}")
        self.lo = np.minimum(lo, hi)
        self.hi = hi

    @classmethod
    def point(cls, value: ArrayLike) -> "Interval":
        return cls(value, value)

    @classmethod
    def from_center_radius(cls, center: ArrayLike, radius: ArrayLike) -> "Interval":
        center = np.asarray(center, dtype=float)
        radius = np.abs(np.asarray(radius, dtype=float))
        return cls(center - radius, center + radius)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.lo.shape

    @property
    def center(self) -> np.ndarray:
        return (self.hi + self.lo) / 2

    @property
    def radius(self) -> np.ndarray:
        return (self.hi - self.lo) / 2

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, value: ArrayLike, slack: float = 0.0) -> bool:
        value = np.asarray(value, dtype=float)
        return bool(np.all(value >= self.lo - slack) and np.all(value <= self.hi + slack))

    def is_subset_of(self, other: "Interval", slack: float = 0.0) -> bool:
        return bool(np.all(self.lo >= other.lo - slack) and np.all(self.hi <= other.hi + slack))

    def __getitem__(self, idx) -> "Interval":
        return Interval(self.lo[idx], self.hi[idx])

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        return interval_ops(self, _as_interval(other), "add")

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        return interval_ops(self, _as_interval(other), "sub")

    def __rsub__(self, other) -> "Interval":
        return interval_ops(_as_interval(other), self, "sub")

    def __mul__(self, other) -> "Interval":
        return interval_ops(self, _as_interval(other), "mul")

    __rmul__ = __mul__

    def __matmul__(self, other) -> "Interval":
        return interval_ops(self, _as_interval(other), "matmul")

    def __rmatmul__(self, other) -> "Interval":
        return interval_ops(_as_interval(other), self, "matmul")

    def cross(self, other) -> "Interval":
        return interval_ops(self, _as_interval(other), "cross")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __repr__(self) -> str:
        if self.lo.ndim == 0:
            return f"Interval([{self.lo:.6g}, {self.hi:.6g}])"
        return f"Interval(lo={self.lo!r}, hi={self.hi!r})"


def _as_interval(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


def _mul(a: Interval, b: Interval) -> Interval:
    products = np.stack(np.broadcast_arrays(a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi))
    return Interval(products.min(axis=0), products.max(axis=0))


def _matmul(a: Interval, b: Interval) -> Interval:
    if a.lo.ndim != 2 or b.lo.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply interval matrices of shape {a.shape} and {b.shape}")
    if b.lo.ndim == 1:
        terms = _mul(a, Interval(b.lo[None, :], b.hi[None, :]))
        return Interval(terms.lo.sum(axis=1), terms.hi.sum(axis=1))
    terms = _mul(Interval(a.lo[:, :, None], a.hi[:, :, None]), Interval(b.lo[None, :, :], b.hi[None, :, :]))
    return Interval(terms.lo.sum(axis=1), terms.hi.sum(axis=1))


def skew_interval(a: Interval) -> Interval:
    """Interval skew-symmetric matrix S with S(a) b = a x b."""
    if a.shape != (3,):
        raise DimensionError(f"cross product needs 3-vectors, got {a.shape}")
    lo = np.zeros((3, 3))
    hi = np.zeros((3, 3))
    for (i, j), (k, sign) in {(0, 1): (2, -1), (0, 2): (1, 1), (1, 0): (2, 1),
                              (1, 2): (0, -1), (2, 0): (1, -1), (2, 1): (0, 1)}.items():
        if sign > 0:
            lo[i, j], hi[i, j] = a.lo[k], a.hi[k]
        else:
            lo[i, j], hi[i, j] = -a.hi[k], -a.lo[k]
    return Interval(lo, hi)


def interval_ops(a: Interval, b: Interval, kind: str) -> Interval:
    """
    Apply a binary operation to two intervals.

    Args:
        a: Left operand.
        b: Right operand.
        kind: One of 'add', 'sub', 'mul' (element-wise), 'matmul', 'cross'.

    Returns:
        An interval containing {op(x, y) : x in a, y in b}.

    Raises:
        DimensionError: If the shapes are incompatible for ``kind``.
    """
    if kind in ("add", "sub", "mul"):
        try:
            np.broadcast_shapes(a.shape, b.shape)
        except ValueError:
            raise DimensionError(f"cannot {kind} intervals of shape {a.shape} and {b.shape}")
        if kind == "add":
            return Interval(a.lo + b.lo, a.hi + b.hi)
        if kind == "sub":
            return Interval(a.lo - b.hi, a.hi - b.lo)
        return _mul(a, b)
    if kind == "matmul":
        return _matmul(a, b)
    if kind == "cross":
        if b.shape != (3,):
            raise DimensionError(f"cross product needs 3-vectors, got {b.shape}")
        return _matmul(skew_interval(a), b)
    raise ValueError(f"unknown interval operation: {kind}")


def interval_sin(x: Interval) -> Interval:
    """Tight element-wise range of sin over an interval."""
    lo = np.atleast_1d(x.lo).astype(float)
    hi = np.atleast_1d(x.hi).astype(float)
    out_lo = np.minimum(np.sin(lo), np.sin(hi))
    out_hi = np.maximum(np.sin(lo), np.sin(hi))
    # a maximum at pi/2 + 2 pi n or a minimum at -pi/2 + 2 pi n inside the interval
    has_max = np.floor((hi - math.pi / 2) / (2 * math.pi)) >= np.ceil((lo - math.pi / 2) / (2 * math.pi))
    has_min = np.floor((hi + math.pi / 2) / (2 * math.pi)) >= np.ceil((lo + math.pi / 2) / (2 * math.pi))
    out_hi = np.where(has_max, 1.0, out_hi)
    out_lo = np.where(has_min, -1.0, out_lo)
    return Interval(out_lo.reshape(x.shape), out_hi.reshape(x.shape))


def interval_cos(x: Interval) -> Interval:
    return interval_sin(x + math.pi / 2)


def interval_pow(x: Interval, n: int) -> Interval:
    """Element-wise range of x**n for a nonnegative integer n."""
    if n == 0:
        return Interval(np.ones(x.shape))
    a, b = x.lo ** n, x.hi ** n
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    if n % 2 == 0:
        lo = np.where((x.lo <= 0) & (x.hi >= 0), 0.0, lo)
    return Interval(lo, hi)
