"""Text and CSV writers for verification results."""

import csv
import io
from typing import Iterable, List

import numpy as np

from ..verify import SimulationTrace, VerificationReport, audit_report
from .interface import IOutputWriter


class ReportWriter(IOutputWriter):
    """Verification summary as structured text."""

    suffix = ".txt"

    def format(self, reports: Iterable[VerificationReport]) -> str:
        text = audit_report(list(reports))
        return text + "\n" if text else ""


class TraceCsvWriter(IOutputWriter):
    """
    Closed-loop time series as CSV, one row per simulation step.

    Vector quantities are spread over one column per joint, named like
    ``q_0``, ``q_1``; the contact residuals keep their names.
    """

    suffix = ".csv"

    VECTOR_FIELDS = ("q", "qd", "q_d", "qd_d", "e", "de", "r", "u")
    RESIDUAL_FIELDS = ("sep", "slip", "tip")

    def columns(self, trace: SimulationTrace) -> List[str]:
        n = trace.q.shape[1] if trace.q.ndim == 2 else 1
        names = ["t"]
        for name in self.VECTOR_FIELDS:
            names.extend(f"{name}_{j}" for j in range(n))
        return names + list(self.RESIDUAL_FIELDS)

    def format(self, trace: SimulationTrace) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns(trace))
        for row in trace.rows():
            cells: List[float] = [float(row[0])]
            for value in row[1:1 + len(self.VECTOR_FIELDS)]:
                cells.extend(float(v) for v in np.atleast_1d(value))
            cells.extend(float(v) for v in row[1 + len(self.VECTOR_FIELDS):])
            writer.writerow([repr(c) for c in cells])
        return buffer.getvalue()
