"""
waiterplan - certified motion planning for arms carrying unsecured objects.

waiterplan over-approximates the trajectories, contact wrenches and
occupancy of a manipulator carrying an object on a tray with polynomial
zonotopes, plans in receding horizon so that the object never separates,
slips or tips, and checks every over-approximation by sampling.
"""

__version__ = "0.1.0"

from .cli import WaiterPlanCLI
from .config import Config
from .errors import (
    ConfigurationError,
    DimensionError,
    DomainError,
    ModelError,
    PlanLogError,
    ScenarioError,
    SimulationError,
    WaiterPlanError,
)
from .planner import Outcome, PlanLog, Scenario, build_iteration, receding_horizon, solve
from .rendering import IOutputWriter, PlanLogWriter, ReportWriter, TraceCsvWriter, read_plan_log
from .scenario import load_bundled, load_scenario

__all__ = [
    'WaiterPlanCLI',
    'Config',
    'ConfigurationError',
    'DimensionError',
    'DomainError',
    'ModelError',
    'PlanLogError',
    'ScenarioError',
    'SimulationError',
    'WaiterPlanError',
    'Outcome',
    'PlanLog',
    'Scenario',
    'build_iteration',
    'receding_horizon',
    'solve',
    'IOutputWriter',
    'PlanLogWriter',
    'ReportWriter',
    'TraceCsvWriter',
    'read_plan_log',
    'load_bundled',
    'load_scenario',
]
