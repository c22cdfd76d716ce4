"""Partition of the planning horizon into time subintervals."""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..config import DEFAULT_DT, DEFAULT_T_FINAL, DEFAULT_T_PLAN
from ..errors import ConfigurationError, DomainError
from ..setops import PolyZonotope, time_id

_RATIO_TOL = 1e-9


@dataclass(frozen=True)
class TimePartition:
    """
    The horizon [0, t_final] split into n_intervals subintervals of length dt.

    Attributes:
        dt (float): Subinterval length in seconds.
        n_intervals (int): Number of subintervals n_t.
        t_plan (float): Planning time t_p.
        t_final (float): Horizon length t_fin.
    """
    dt: float
    n_intervals: int
    t_plan: float
    t_final: float

    def bounds(self, i: int) -> Tuple[float, float]:
        """Closed time range of the 0-based subinterval i."""
        if not 0 <= i < self.n_intervals:
            raise DomainError(f"interval {i} outside 0..{self.n_intervals - 1}")
        return i * self.dt, (i + 1) * self.dt

    def time_pz(self, i: int) -> PolyZonotope:
        """Subinterval i as center (i + 1/2) dt plus (dt/2) x_t."""
        lo, hi = self.bounds(i)
        return PolyZonotope.from_generators((lo + hi) / 2, [(self.dt / 2, time_id(i))])

    def locate(self, t: float) -> int:
        """Index of a subinterval containing t; the last one for t = t_final."""
        if not 0.0 <= t <= self.t_final + _RATIO_TOL:
            raise DomainError(f"time {t} outside [0, {self.t_final}]")
        return int(min(self.n_intervals - 1, np.floor(t / self.dt)))

    def indeterminate_value(self, i: int, t: float) -> float:
        """Value of x_t for subinterval i that reproduces time t."""
        lo, hi = self.bounds(i)
        return float(np.clip((2 * t - lo - hi) / (hi - lo), -1.0, 1.0))


def time_partition(
    dt: float = DEFAULT_DT,
    t_final: float = DEFAULT_T_FINAL,
    t_plan: float = DEFAULT_T_PLAN,
) -> Tuple[TimePartition, List[PolyZonotope]]:
    """
    Split [0, t_final] into subintervals of length dt.

    Returns:
        The partition and the list of subinterval polynomial zonotopes.

    Raises:
        ConfigurationError: If t_final / dt is not an integer, or
            t_plan is not inside (0, t_final).
    """
    if dt <= 0 or t_final <= 0:
        raise ConfigurationError(f"dt and t_final must be positive, got dt={dt}, t_final={t_final}")
    ratio = t_final / dt
    n = int(round(ratio))
    if n < 1 or abs(ratio - n) > _RATIO_TOL * max(1.0, ratio):
        raise ConfigurationError(f"t_final={t_final} is not an integer multiple of dt={dt}")
    if not 0.0 < t_plan < t_final:
        raise ConfigurationError(f"t_plan={t_plan} must lie strictly inside (0, {t_final})")
    partition = TimePartition(dt=t_final / n, n_intervals=n, t_plan=t_plan, t_final=t_final)
    return partition, [partition.time_pz(i) for i in range(n)]
