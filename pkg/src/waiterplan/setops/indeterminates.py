"""Globally unique identifiers for polynomial zonotope indeterminates."""

import itertools
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator


class IndeterminateTag(IntEnum):
    """
    Role of an indeterminate.

    The integer values fix the column order of exponent matrices, so
    time and parameter indeterminates always come first.
    """
    TIME = 0
    PARAMETER = 1
    POSITION_ERROR = 2
    VELOCITY_ERROR = 3
    INERTIAL = 4
    REMAINDER = 5


@dataclass(frozen=True, order=True)
class IndeterminateId:
    """
    Identifies one indeterminate x ranging over [-1, 1].

    Attributes:
        tag (IndeterminateTag): Role of the indeterminate.
        scope (int): Allocation scope; -1 for unscoped remainder ids and 0 for
                     every named id.
        index (int): Index within (tag, scope): interval, joint, parameter
                     or allocation counter.
    """
    tag: IndeterminateTag
    scope: int
    index: int

    @property
    def sliceable(self) -> bool:
        """Remainder indeterminates are independent and never sliced."""
        return self.tag != IndeterminateTag.REMAINDER

    def __repr__(self) -> str:
        if self.tag == IndeterminateTag.REMAINDER:
            return f"x_r[{self.scope}:{self.index}]"
        return f"x_{self.tag.name.lower()}[{self.index}]"


def time_id(interval: int) -> IndeterminateId:
    return IndeterminateId(IndeterminateTag.TIME, 0, interval)


def parameter_id(joint: int) -> IndeterminateId:
    return IndeterminateId(IndeterminateTag.PARAMETER, 0, joint)


def position_error_id(joint: int) -> IndeterminateId:
    return IndeterminateId(IndeterminateTag.POSITION_ERROR, 0, joint)


def velocity_error_id(joint: int) -> IndeterminateId:
    return IndeterminateId(IndeterminateTag.VELOCITY_ERROR, 0, joint)


def inertial_id(index: int) -> IndeterminateId:
    return IndeterminateId(IndeterminateTag.INERTIAL, 0, index)


class _Counter:
    """Thread-safe monotonically increasing counter."""

    def __init__(self):
        self._lock = threading.Lock()
        self._count = itertools.count()

    def next(self) -> int:
        with self._lock:
            return next(self._count)


_GLOBAL_COUNTER = _Counter()
_UNSCOPED = -1
_local = threading.local()


@contextmanager
def allocation_scope(scope: int) -> Iterator[None]:
    """
    Allocate remainder ids from a fresh counter tagged with ``scope``.

    Ids created inside the block are (REMAINDER, scope, 0), (REMAINDER,
    scope, 1), ... regardless of what other threads do, which keeps
    parallel construction reproducible. A scope must not be re-entered
    while sets built in an earlier use of it are still combined with new ones.
    """
    if scope < 0:
        raise ValueError(f"allocation scope must be nonnegative, got {scope}")
    previous = getattr(_local, "scope", None)
    _local.scope = (scope, _Counter())
    try:
        yield
    finally:
        _local.scope = previous


def fresh_remainder_id() -> IndeterminateId:
    """Allocate a new independent indeterminate."""
    scoped = getattr(_local, "scope", None)
    if scoped is None:
        return IndeterminateId(IndeterminateTag.REMAINDER, _UNSCOPED, _GLOBAL_COUNTER.next())
    scope, counter = scoped
    return IndeterminateId(IndeterminateTag.REMAINDER, scope, counter.next())
