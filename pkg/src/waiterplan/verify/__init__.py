"""Brute-force oracles: containment sampling, closed-loop simulation and plan audits."""

from .containment import CONTAINMENT_SLACK, STAGES, containment_audit, segment_audit
from .report import VIOLATION_EXIT_CODE, VerificationReport, Violation, audit_report, report_exit_code
from .simulate import TRACE_COLUMNS, SimulationTrace, closed_loop_sim, forward_dynamics, rk4_step
from .trials import random_trial_scenario

__all__ = [
    'CONTAINMENT_SLACK',
    'STAGES',
    'SimulationTrace',
    'TRACE_COLUMNS',
    'VIOLATION_EXIT_CODE',
    'VerificationReport',
    'Violation',
    'audit_report',
    'closed_loop_sim',
    'containment_audit',
    'forward_dynamics',
    'random_trial_scenario',
    'report_exit_code',
    'rk4_step',
    'segment_audit',
]
