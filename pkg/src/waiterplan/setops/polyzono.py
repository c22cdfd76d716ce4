"""
Polynomial zonotopes: sets given as the image of a sparse multivariate
polynomial over indeterminates ranging in [-1, 1].

Terms are stored in the exponent-matrix form used by CORA-style
implementations: a sorted table of indeterminate ids, an integer exponent
matrix with one row per term and one column per id, and the stacked term
coefficients. The constant term (the center) is the all-zero row.
"""

import logging
from typing import Dict, Iterator, Mapping, Sequence, Tuple, Union

import numpy as np

from ..config import DEFAULT_MAX_TERMS, ZERO_COEFFICIENT_TOL
from ..errors import DimensionError, DomainError, IncompleteAssignmentError
from .indeterminates import IndeterminateId, fresh_remainder_id
from .interval import Interval
from .zonotope import Zonotope

logger = logging.getLogger(__name__)

_DOMAIN_TOL = 1e-12

Operand = Union["PolyZonotope", float, np.ndarray]


def _canonicalize(coeffs: np.ndarray, expmat: np.ndarray, ids: Tuple[IndeterminateId, ...]):
    """Merge equal exponent rows, drop negligible terms and unused ids."""
    shape = coeffs.shape[1:]
    n = coeffs.shape[0]
    if n == 0:
        return np.zeros((0,) + shape), np.zeros((0, 0), dtype=np.int64), ()
    if expmat.shape[1] == 0:
        total = coeffs.sum(axis=0, keepdims=True)
        if np.max(np.abs(total)) <= ZERO_COEFFICIENT_TOL:
            return np.zeros((0,) + shape), np.zeros((0, 0), dtype=np.int64), ()
        return total, np.zeros((1, 0), dtype=np.int64), ()

    uniq, inverse = np.unique(expmat, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    merged = np.zeros((uniq.shape[0],) + shape)
    if uniq.shape[0] == n:
        merged[inverse] = coeffs
    else:
        np.add.at(merged, inverse, coeffs)

    keep = np.abs(merged).reshape(uniq.shape[0], -1).max(axis=1) > ZERO_COEFFICIENT_TOL
    merged = merged[keep]
    uniq = uniq[keep]
    used = (uniq != 0).any(axis=0)
    if not used.all():
        uniq = uniq[:, used]
        ids = tuple(i for i, u in zip(ids, used) if u)
    return merged, uniq, ids


class PolyZonotope:
    """
    Immutable polynomial zonotope with scalar, vector or matrix values.

    Attributes:
        shape (Tuple[int, ...]): Shape of each member of the set.
        ids (Tuple[IndeterminateId, ...]): Sorted indeterminates the polynomial uses.
        expmat (np.ndarray): Exponents, shape (n_terms, len(ids)).
        coeffs (np.ndarray): Coefficients, shape (n_terms,) + shape.
    """

    __slots__ = ("_ids", "_expmat", "_coeffs", "_shape")
    __array_ufunc__ = None

    def __init__(self, coeffs: np.ndarray, expmat: np.ndarray, ids: Sequence[IndeterminateId]):
        coeffs = np.asarray(coeffs, dtype=float)
        ids = tuple(ids)
        expmat = np.asarray(expmat, dtype=np.int64)
        if expmat.size == 0:
            expmat = np.zeros((coeffs.shape[0], len(ids)), dtype=np.int64)
        if expmat.ndim != 2 or expmat.shape[0] != coeffs.shape[0]:
            raise DimensionError(f"exponent matrix of shape {expmat.shape} for {coeffs.shape[0]} terms")
        if expmat.shape[1] != len(ids):
            raise DimensionError(f"exponent matrix has {expmat.shape[1]} columns for {len(ids)} ids")
        if np.any(expmat < 0):
            raise DomainError("exponents must be nonnegative")
        if len(set(ids)) != len(ids) or list(ids) != sorted(ids):
            expmat, ids = _sort_columns(expmat, ids)
        self._set(*_canonicalize(coeffs, expmat, ids))

    def _set(self, coeffs, expmat, ids):
        coeffs.setflags(write=False)
        expmat.setflags(write=False)
        self._coeffs = coeffs
        self._expmat = expmat
        self._ids = ids
        self._shape = coeffs.shape[1:]

    @classmethod
    def _from_parts(cls, coeffs, expmat, ids) -> "PolyZonotope":
        obj = cls.__new__(cls)
        obj._set(*_canonicalize(np.asarray(coeffs, dtype=float), np.asarray(expmat, dtype=np.int64), tuple(ids)))
        return obj

    @classmethod
    def constant(cls, value: Union[float, np.ndarray]) -> "PolyZonotope":
        value = np.asarray(value, dtype=float)
        return cls._from_parts(value[None, ...], np.zeros((1, 0), dtype=np.int64), ())

    @classmethod
    def zeros(cls, shape: Tuple[int, ...] = ()) -> "PolyZonotope":
        return cls.constant(np.zeros(shape))

    @classmethod
    def from_generators(
        cls,
        center: Union[float, np.ndarray],
        generators: Sequence[Tuple[Union[float, np.ndarray], IndeterminateId]],
    ) -> "PolyZonotope":
        """Linear polynomial zonotope c + sum_i g_i x_i."""
        center = np.asarray(center, dtype=float)
        ids = sorted({ident for _, ident in generators})
        column = {ident: j for j, ident in enumerate(ids)}
        coeffs = [center]
        expmat = np.zeros((len(generators) + 1, len(ids)), dtype=np.int64)
        for row, (g, ident) in enumerate(generators, start=1):
            coeffs.append(np.broadcast_to(np.asarray(g, dtype=float), center.shape))
            expmat[row, column[ident]] = 1
        return cls._from_parts(np.stack(coeffs), expmat, ids)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._shape

    @property
    def ids(self) -> Tuple[IndeterminateId, ...]:
        return self._ids

    @property
    def expmat(self) -> np.ndarray:
        return self._expmat

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def _constant_row(self) -> int:
        if self._coeffs.shape[0] and not self._expmat[0].any():
            return 0
        return -1

    @property
    def center(self) -> np.ndarray:
        row = self._constant_row()
        if row < 0:
            return np.zeros(self._shape)
        return self._coeffs[row].copy()

    @property
    def generator_coeffs(self) -> np.ndarray:
        return self._coeffs[1:] if self._constant_row() == 0 else self._coeffs

    @property
    def generator_expmat(self) -> np.ndarray:
        return self._expmat[1:] if self._constant_row() == 0 else self._expmat

    @property
    def n_generators(self) -> int:
        return self.generator_coeffs.shape[0]

    @property
    def is_point(self) -> bool:
        return self.n_generators == 0

    def terms(self) -> Iterator[Tuple[np.ndarray, Dict[IndeterminateId, int]]]:
        """Iterate over (coefficient, {id: power}) pairs, constant term first."""
        for coeff, row in zip(self._coeffs, self._expmat):
            yield coeff, {ident: int(e) for ident, e in zip(self._ids, row) if e}

    @property
    def T(self) -> "PolyZonotope":
        if len(self._shape) != 2:
            raise DimensionError(f"transpose needs a matrix, got shape {self._shape}")
        return PolyZonotope._from_parts(np.swapaxes(self._coeffs, 1, 2), self._expmat, self._ids)

    def __getitem__(self, idx) -> "PolyZonotope":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return PolyZonotope._from_parts(self._coeffs[(slice(None),) + idx], self._expmat, self._ids)

    def __len__(self) -> int:
        if not self._shape:
            raise TypeError("scalar polynomial zonotope has no length")
        return self._shape[0]

    def __neg__(self) -> "PolyZonotope":
        return PolyZonotope._from_parts(-self._coeffs, self._expmat, self._ids)

    def __add__(self, other: Operand) -> "PolyZonotope":
        return pz_add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "PolyZonotope":
        return pz_add(self, -as_pz(other))

    def __rsub__(self, other: Operand) -> "PolyZonotope":
        return pz_add(as_pz(other), -self)

    def __mul__(self, other: Operand) -> "PolyZonotope":
        return pz_mul(self, other)

    def __rmul__(self, other: Operand) -> "PolyZonotope":
        return pz_mul(other, self)

    def __matmul__(self, other: Operand) -> "PolyZonotope":
        return pz_mul(self, other)

    def __rmatmul__(self, other: Operand) -> "PolyZonotope":
        return pz_mul(other, self)

    def bounds(self) -> Interval:
        return pz_bounds(self)

    def slice(self, ident: IndeterminateId, value: float) -> "PolyZonotope":
        return pz_slice(self, ident, value)

    def evaluate(self, assignment: Mapping[IndeterminateId, float]) -> np.ndarray:
        return pz_evaluate(self, assignment)

    def reduce(self, max_terms: int = DEFAULT_MAX_TERMS) -> "PolyZonotope":
        return pz_reduce(self, max_terms)

    def __repr__(self) -> str:
        return f"PolyZonotope(shape={self._shape}, terms={self._coeffs.shape[0]}, ids={len(self._ids)})"


def _sort_columns(expmat: np.ndarray, ids: Tuple[IndeterminateId, ...]):
    """Sort id columns and merge duplicated ids by adding their exponents."""
    unique = sorted(set(ids))
    column = {ident: j for j, ident in enumerate(unique)}
    out = np.zeros((expmat.shape[0], len(unique)), dtype=np.int64)
    for j, ident in enumerate(ids):
        out[:, column[ident]] += expmat[:, j]
    return out, tuple(unique)


def as_pz(value: Operand) -> PolyZonotope:
    """Wrap a constant as a polynomial zonotope; pass polynomial zonotopes through."""
    if isinstance(value, PolyZonotope):
        return value
    if isinstance(value, Interval):
        raise TypeError("convert intervals explicitly with interval_to_pz")
    return PolyZonotope.constant(value)


def _aligned(pzs: Sequence[PolyZonotope]):
    """Exponent matrices of every operand over the union of their ids."""
    if all(p.ids == pzs[0].ids for p in pzs):
        return pzs[0].ids, [p.expmat for p in pzs]
    ids = tuple(sorted(set().union(*(p.ids for p in pzs))))
    column = {ident: j for j, ident in enumerate(ids)}
    expmats = []
    for p in pzs:
        out = np.zeros((p.expmat.shape[0], len(ids)), dtype=np.int64)
        if p.ids:
            out[:, [column[i] for i in p.ids]] = p.expmat
        expmats.append(out)
    return ids, expmats


def pz_add(p: Operand, q: Operand) -> PolyZonotope:
    """
    Polynomial addition over the common representation of p and q.

    Shared indeterminates keep their dependence; disjoint ones add as a
    Minkowski sum.

    Raises:
        DimensionError: If the value shapes differ.
    """
    return pz_sum([p, q])


def pz_sum(items: Sequence[Operand]) -> PolyZonotope:
    """Sum of several polynomial zonotopes of equal shape."""
    pzs = [as_pz(x) for x in items]
    shape = pzs[0].shape
    for p in pzs[1:]:
        if p.shape != shape:
            raise DimensionError(f"cannot add polynomial zonotopes of shape {shape} and {p.shape}")
    ids, expmats = _aligned(pzs)
    coeffs = np.concatenate([p.coeffs for p in pzs], axis=0)
    return PolyZonotope._from_parts(coeffs, np.concatenate(expmats, axis=0), ids)


def _product_kind(sa: Tuple[int, ...], sb: Tuple[int, ...]) -> str:
    if sa == ():
        return "scalar_left"
    if sb == ():
        return "scalar_right"
    if len(sa) == 2 and len(sb) == 2 and sa[1] == sb[0]:
        return "matmat"
    if len(sa) == 2 and len(sb) == 1 and sa[1] == sb[0]:
        return "matvec"
    if len(sa) == 1 and len(sb) == 2 and sa[0] == sb[0]:
        return "vecmat"
    if len(sa) == 1 and len(sb) == 1 and sa[0] == sb[0]:
        return "dot"
    raise DimensionError(f"cannot multiply polynomial zonotopes of shape {sa} and {sb}")


def _pair_products(a: np.ndarray, b: np.ndarray, kind: str) -> np.ndarray:
    n1, n2 = a.shape[0], b.shape[0]
    if kind == "scalar_left":
        out = a.reshape((n1, 1) + (1,) * (b.ndim - 1)) * b[None]
    elif kind == "scalar_right":
        out = a[:, None] * b.reshape((1, n2) + (1,) * (a.ndim - 1))
    elif kind == "matmat":
        out = np.einsum("aij,bjk->abik", a, b)
    elif kind == "matvec":
        out = np.einsum("aij,bj->abi", a, b)
    elif kind == "vecmat":
        out = np.einsum("ai,bij->abj", a, b)
    else:
        out = np.einsum("ai,bi->ab", a, b)
    return out.reshape((n1 * n2,) + out.shape[2:])


def pz_mul(p: Operand, q: Operand) -> PolyZonotope:
    """
    Distributive product of two polynomial zonotopes.

    Scalar-valued operands multiply any shape element-wise; otherwise the
    product is matrix-matrix, matrix-vector, vector-matrix or a vector dot
    product. Exponents of paired terms add.

    Raises:
        DimensionError: If the inner dimensions do not agree.
    """
    p, q = as_pz(p), as_pz(q)
    kind = _product_kind(p.shape, q.shape)
    if q.is_point and q.coeffs.shape[0] <= 1:
        # linear map of p's coefficients
        value = q.center
        coeffs = _pair_products(p.coeffs, value[None], kind)
        return PolyZonotope._from_parts(coeffs, p.expmat, p.ids)
    if p.is_point and p.coeffs.shape[0] <= 1:
        value = p.center
        coeffs = _pair_products(value[None], q.coeffs, kind)
        return PolyZonotope._from_parts(coeffs, q.expmat, q.ids)
    ids, (ep, eq) = _aligned([p, q])
    expmat = (ep[:, None, :] + eq[None, :, :]).reshape(-1, len(ids))
    coeffs = _pair_products(p.coeffs, q.coeffs, kind)
    return PolyZonotope._from_parts(coeffs, expmat, ids)


def skew(p: Operand) -> PolyZonotope:
    """Skew-symmetric matrix polynomial zonotope S(p) with S(p) q = p x q."""
    p = as_pz(p)
    if p.shape != (3,):
        raise DimensionError(f"cross product needs 3-vectors, got {p.shape}")
    c = p.coeffs
    s = np.zeros((c.shape[0], 3, 3))
    s[:, 0, 1], s[:, 0, 2] = -c[:, 2], c[:, 1]
    s[:, 1, 0], s[:, 1, 2] = c[:, 2], -c[:, 0]
    s[:, 2, 0], s[:, 2, 1] = -c[:, 1], c[:, 0]
    return PolyZonotope._from_parts(s, p.expmat, p.ids)


def pz_cross(p: Operand, q: Operand) -> PolyZonotope:
    """
    Set-based cross product p x q, computed as S(p) q.

    Raises:
        DimensionError: If either operand is not a 3-vector.
    """
    q = as_pz(q)
    if q.shape != (3,):
        raise DimensionError(f"cross product needs 3-vectors, got {q.shape}")
    return pz_mul(skew(p), q)


def stack(items: Sequence[Operand]) -> PolyZonotope:
    """Vector polynomial zonotope whose j-th component is the scalar items[j]."""
    pzs = [as_pz(x) for x in items]
    for p in pzs:
        if p.shape != ():
            raise DimensionError(f"stack expects scalar polynomial zonotopes, got shape {p.shape}")
    ids, expmats = _aligned(pzs)
    n = len(pzs)
    blocks = []
    for j, p in enumerate(pzs):
        block = np.zeros((p.coeffs.shape[0], n))
        block[:, j] = p.coeffs
        blocks.append(block)
    return PolyZonotope._from_parts(np.concatenate(blocks, axis=0), np.concatenate(expmats, axis=0), ids)


def _check_domain(value: float, ident: IndeterminateId):
    if not -1.0 - _DOMAIN_TOL <= value <= 1.0 + _DOMAIN_TOL:
        raise DomainError(f"value {value} for {ident!r} lies outside [-1, 1]")


def pz_slice(p: PolyZonotope, ident: IndeterminateId, value: float, warn: bool = True) -> PolyZonotope:
    """
    Substitute ``value`` for one indeterminate; the result is a subset of p.

    An id the polynomial does not use leaves p unchanged (logged as a warning
    when ``warn`` is set).

    Raises:
        DomainError: If value lies outside [-1, 1].
    """
    value = float(value)
    _check_domain(value, ident)
    if ident not in p.ids:
        if warn:
            logger.warning("slice of %r which %r does not depend on", ident, p)
        return p
    return slice_many(p, {ident: value})


def slice_many(p: PolyZonotope, assignment: Mapping[IndeterminateId, float]) -> PolyZonotope:
    """Slice every id of ``assignment`` that p uses; other ids are ignored."""
    columns = [j for j, ident in enumerate(p.ids) if ident in assignment]
    if not columns:
        return p
    values = np.array([float(assignment[p.ids[j]]) for j in columns])
    for j, v in zip(columns, values):
        _check_domain(v, p.ids[j])
    factors = np.prod(np.clip(values, -1.0, 1.0)[None, :] ** p.expmat[:, columns], axis=1)
    coeffs = p.coeffs * factors.reshape((-1,) + (1,) * len(p.shape))
    expmat = p.expmat.copy()
    expmat[:, columns] = 0
    return PolyZonotope._from_parts(coeffs, expmat, p.ids)


def pz_sup(p: PolyZonotope) -> np.ndarray:
    return p.center + np.abs(p.generator_coeffs).sum(axis=0)


def pz_inf(p: PolyZonotope) -> np.ndarray:
    return p.center - np.abs(p.generator_coeffs).sum(axis=0)


def pz_bounds(p: PolyZonotope) -> Interval:
    """
    Interval enclosure center +- sum of absolute generator coefficients.

    Every non-constant term is treated as independent, so the enclosure may
    be loose but always contains the set.
    """
    radius = np.abs(p.generator_coeffs).sum(axis=0)
    return Interval(p.center - radius, p.center + radius)


def pz_evaluate(p: PolyZonotope, assignment: Mapping[IndeterminateId, float]) -> np.ndarray:
    """
    Exact polynomial value at an assignment of every indeterminate.

    Raises:
        IncompleteAssignmentError: If an id of p has no value.
        DomainError: If a value lies outside [-1, 1].
    """
    missing = [ident for ident in p.ids if ident not in assignment]
    if missing:
        raise IncompleteAssignmentError(f"no value for {missing!r}")
    values = np.array([float(assignment[ident]) for ident in p.ids])
    for ident, v in zip(p.ids, values):
        _check_domain(v, ident)
    monomials = np.prod(values[None, :] ** p.expmat, axis=1) if p.ids else np.ones(p.coeffs.shape[0])
    return np.tensordot(monomials, p.coeffs, axes=1)


def pz_differentiate(p: PolyZonotope, ident: IndeterminateId) -> PolyZonotope:
    """Formal partial derivative with respect to one indeterminate."""
    if ident not in p.ids:
        return PolyZonotope.zeros(p.shape)
    j = p.ids.index(ident)
    powers = p.expmat[:, j]
    coeffs = p.coeffs * powers.reshape((-1,) + (1,) * len(p.shape))
    expmat = p.expmat.copy()
    expmat[:, j] = np.maximum(powers - 1, 0)
    return PolyZonotope._from_parts(coeffs, expmat, p.ids)


def pz_reduce(p: PolyZonotope, max_terms: int = DEFAULT_MAX_TERMS) -> PolyZonotope:
    """
    Order reduction keeping at most ``max_terms`` generators.

    Dependent generators (those with a sliceable indeterminate) rank ahead
    of independent ones and each group ranks by magnitude, so independent
    generators are kept only while the dependent ones leave room. The
    remaining generators are replaced by one fresh independent
    indeterminate per value element, with radius equal to the sum of the
    dropped absolute coefficients, so the result contains p.

    Raises:
        DomainError: If max_terms < 1.
    """
    if max_terms < 1:
        raise DomainError(f"max_terms must be at least 1, got {max_terms}")
    gens = p.generator_coeffs
    if gens.shape[0] <= max_terms:
        return p
    gen_expmat = p.generator_expmat
    sliceable = np.array([ident.sliceable for ident in p.ids], dtype=bool)
    dependent = (gen_expmat[:, sliceable] > 0).any(axis=1)
    magnitude = np.abs(gens).reshape(gens.shape[0], -1).sum(axis=1)
    order = np.lexsort((-magnitude, (~dependent).astype(np.int8)))
    kept = np.sort(order[:max_terms])
    dropped = order[max_terms:]
    radius = np.abs(gens[dropped]).sum(axis=0).reshape(-1)

    flat_elements = np.flatnonzero(radius > ZERO_COEFFICIENT_TOL)
    new_ids = tuple(fresh_remainder_id() for _ in flat_elements)
    box = np.zeros((len(new_ids), radius.size))
    box[np.arange(len(new_ids)), flat_elements] = radius[flat_elements]

    n_old = len(p.ids)
    rows = [np.concatenate([p.center[None], gens[kept]], axis=0), box.reshape((-1,) + p.shape)]
    expmat = np.zeros((1 + kept.size + len(new_ids), n_old + len(new_ids)), dtype=np.int64)
    expmat[1:1 + kept.size, :n_old] = gen_expmat[kept]
    expmat[1 + kept.size:, n_old:] = np.eye(len(new_ids), dtype=np.int64)
    return PolyZonotope._from_parts(np.concatenate(rows, axis=0), expmat, p.ids + new_ids)


def interval_to_pz(x: Interval, ids: Sequence[IndeterminateId] = None) -> PolyZonotope:
    """
    Set-equal polynomial zonotope of an interval.

    Each element with nonzero width gets its own indeterminate: a fresh
    independent one, or ids[e] for the e-th flattened element when given.
    """
    center = x.center
    radius = x.radius.reshape(-1)
    if ids is not None and len(ids) != radius.size:
        raise DimensionError(f"{len(ids)} ids for an interval with {radius.size} elements")
    generators = []
    for e in np.flatnonzero(radius > 0):
        g = np.zeros(radius.size)
        g[e] = radius[e]
        ident = ids[e] if ids is not None else fresh_remainder_id()
        generators.append((g.reshape(x.shape), ident))
    return PolyZonotope.from_generators(center, generators)


def zonotope_to_pz(z: Zonotope) -> PolyZonotope:
    """Polynomial zonotope of a zonotope with one fresh id per generator."""
    return PolyZonotope.from_generators(z.center, [(g, fresh_remainder_id()) for g in z.generators])
