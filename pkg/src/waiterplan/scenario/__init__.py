"""Scenario files: versioned JSON documents describing one planning problem."""

from .loader import (
    DEFAULT_SCENARIO,
    SCENARIO_VERSION,
    bundled_scenario_path,
    load_bundled,
    load_scenario,
    parse_scenario,
    scenario_digest,
)

__all__ = [
    'DEFAULT_SCENARIO',
    'SCENARIO_VERSION',
    'bundled_scenario_path',
    'load_bundled',
    'load_scenario',
    'parse_scenario',
    'scenario_digest',
]
