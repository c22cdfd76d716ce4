"""Taylor over-approximation of sin and cos of scalar polynomial zonotopes."""

import math
from typing import Callable, Dict

from ..config import DEFAULT_MAX_TERMS, DEFAULT_TAYLOR_DEGREE
from ..errors import DimensionError, DomainError
from .interval import Interval, interval_pow, interval_sin
from .polyzono import PolyZonotope, interval_to_pz, pz_bounds, pz_mul, pz_reduce, pz_sum


def _sin_derivative(order: int) -> Callable[[float], float]:
    return lambda x: math.sin(x + order * math.pi / 2)


def _cos_derivative(order: int) -> Callable[[float], float]:
    return lambda x: math.cos(x + order * math.pi / 2)


_DERIVATIVES: Dict[str, Callable[[int], Callable[[float], float]]] = {
    "sin": _sin_derivative,
    "cos": _cos_derivative,
}

# phase of f relative to sin: cos(x) = sin(x + pi/2)
_PHASE = {"sin": 0.0, "cos": math.pi / 2}


def _interval_derivative(f: str, order: int, x: Interval) -> Interval:
    return interval_sin(x + (_PHASE[f] + order * math.pi / 2))


def pz_analytic(
    p: PolyZonotope,
    f: str,
    degree: int = DEFAULT_TAYLOR_DEGREE,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> PolyZonotope:
    """
    Over-approximate {f(x) : x in p} for f in {'sin', 'cos'}.

    The polynomial part is the degree-``degree`` Taylor expansion of f about
    the center c of p, evaluated on p - c. The truncation error is enclosed
    by the Lagrange remainder f^(d+1)([p]) * [(p - c)^(d+1)] / (d+1)!, with
    both factors bounded by interval arithmetic, and attached on a fresh
    independent indeterminate.

    Args:
        p: Scalar polynomial zonotope.
        f: 'sin' or 'cos'.
        degree: Taylor degree d >= 1.
        max_terms: Reduction order applied to each power of p - c.

    Raises:
        DimensionError: If p is not scalar-valued.
        DomainError: If f is unknown or degree < 1.
    """
    if p.shape != ():
        raise DimensionError(f"analytic functions apply to scalar polynomial zonotopes, got {p.shape}")
    if f not in _DERIVATIVES:
        raise DomainError(f"unsupported analytic function {f!r}; expected 'sin' or 'cos'")
    if degree < 1:
        raise DomainError(f"Taylor degree must be at least 1, got {degree}")

    c = float(p.center)
    delta = p - c
    terms = [PolyZonotope.constant(_DERIVATIVES[f](0)(c))]
    power = PolyZonotope.constant(1.0)
    for n in range(1, degree + 1):
        power = pz_reduce(pz_mul(power, delta), max_terms)
        coefficient = _DERIVATIVES[f](n)(c) / math.factorial(n)
        if coefficient != 0.0:
            terms.append(coefficient * power)

    bound_m = _interval_derivative(f, degree + 1, pz_bounds(p))
    bound_delta = interval_pow(pz_bounds(delta), degree + 1)
    remainder = (bound_m * bound_delta) * (1.0 / math.factorial(degree + 1))
    terms.append(interval_to_pz(remainder))
    return pz_reduce(pz_sum(terms), max_terms)


def pz_sin_cos(p: PolyZonotope, degree: int = DEFAULT_TAYLOR_DEGREE):
    """Return the pair (sin p, cos p)."""
    return pz_analytic(p, "sin", degree), pz_analytic(p, "cos", degree)

