"""Rendering package: plan logs, verification summaries and simulation traces."""

from .interface import IOutputWriter
from .planlog import LOG_FORMAT, LOG_VERSION, PlanLogFile, PlanLogWriter, read_plan_log
from .writers import ReportWriter, TraceCsvWriter

__all__ = [
    'IOutputWriter',
    'LOG_FORMAT',
    'LOG_VERSION',
    'PlanLogFile',
    'PlanLogWriter',
    'ReportWriter',
    'TraceCsvWriter',
    'read_plan_log',
]
