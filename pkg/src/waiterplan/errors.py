"""Exception hierarchy shared by every waiterplan layer."""

from pathlib import Path
from typing import Optional


class WaiterPlanError(Exception):
    """Base class for all errors raised by waiterplan."""


class DimensionError(WaiterPlanError, ValueError):
    """Operand shapes are incompatible for the requested operation."""


class DomainError(WaiterPlanError, ValueError):
    """A value lies outside the domain an operation accepts."""


class IncompleteAssignmentError(DomainError):
    """An evaluation was requested without a value for every indeterminate."""


class UndefinedZMPError(DomainError):
    """The zero moment point is undefined because the normal force vanishes."""


class ConfigurationError(WaiterPlanError, ValueError):
    """A configuration value (partition, controller, environment) is invalid."""


class ModelError(WaiterPlanError, ValueError):
    """The robot model is inconsistent or physically invalid."""


class SimulationError(WaiterPlanError, RuntimeError):
    """The closed-loop simulation cannot continue."""


def _located(message: str, path: Optional[Path], line: Optional[int]) -> str:
    if path is None:
        return message
    location = f"{path}" if line is None else f"{path}:{line}"
    return f"{location}: {message}"


class ScenarioError(ConfigurationError):
    """
    A scenario file could not be read or failed validation.

    Attributes:
        path (Optional[Path]): File the error refers to.
        line (Optional[int]): 1-based line in the file, when known.
    """

    def __init__(self, message: str, path: Optional[Path] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        super().__init__(_located(message, path, line))


class PlanLogError(WaiterPlanError, ValueError):
    """A plan log is malformed or was written for another scenario."""

    def __init__(self, message: str, path: Optional[Path] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        super().__init__(_located(message, path, line))
