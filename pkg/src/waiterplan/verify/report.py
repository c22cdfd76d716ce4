"""Verification reports and their text summary."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List

VIOLATION_EXIT_CODE = 3


@dataclass(frozen=True)
class Violation:
    """
    One failed check.

    Attributes:
        check (str): Name of the check, e.g. "contact" or "fo".
        seed (int): Seed that reproduces the run.
        sample (int): Index of the failing sample within that run.
        margin (float): Signed margin; negative means violated by that much.
        detail (str): Human-readable context.
    """
    check: str
    seed: int
    sample: int
    margin: float
    detail: str = ""


@dataclass
class VerificationReport:
    """Sample counts, violations and worst margins of one or more checks."""
    name: str
    samples: Dict[str, int] = field(default_factory=dict)
    worst_margin: Dict[str, float] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)
    elapsed: float = 0.0

    def record(self, check: str, margin: float, seed: int, sample: int, slack: float = 0.0, detail: str = ""):
        """Count one sample of ``check`` and keep a violation if margin < -slack."""
        self.samples[check] = self.samples.get(check, 0) + 1
        if check not in self.worst_margin or margin < self.worst_margin[check]:
            self.worst_margin[check] = float(margin)
        if margin < -slack:
            self.violations.append(Violation(check, seed, sample, float(margin), detail))

    @property
    def n_samples(self) -> int:
        return sum(self.samples.values())

    @property
    def n_violations(self) -> int:
        return len(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """Combined report; counts and elapsed times add, worst margins take the minimum."""
        merged = VerificationReport(self.name if self.name == other.name else f"{self.name}+{other.name}")
        for report in (self, other):
            for check, count in report.samples.items():
                merged.samples[check] = merged.samples.get(check, 0) + count
            for check, margin in report.worst_margin.items():
                merged.worst_margin[check] = min(margin, merged.worst_margin.get(check, margin))
            merged.violations.extend(report.violations)
            merged.elapsed += report.elapsed
        return merged


def audit_report(reports: Iterable[VerificationReport]) -> str:
    """
    Structured text summary of verification reports.

    One block per report listing every check with its sample count,
    violation count and worst margin, then each violation with the seed and
    sample index that reproduce it. No reports give an empty string.
    """
    lines: List[str] = []
    total_samples = total_violations = 0
    for report in reports:
        lines.append(f"[{report.name}] {report.n_samples} samples, {report.n_violations} violations, "
                     f"{report.elapsed:.2f} s")
        for check in sorted(report.samples):
            count = sum(1 for v in report.violations if v.check == check)
            lines.append(f"  {check}: samples={report.samples[check]} violations={count} "
                         f"worst_margin={report.worst_margin[check]:.3e}")
        for v in report.violations:
            suffix = f" ({v.detail})" if v.detail else ""
            lines.append(f"  VIOLATION {v.check} seed={v.seed} sample={v.sample} margin={v.margin:.3e}{suffix}")
        total_samples += report.n_samples
        total_violations += report.n_violations
    if not lines:
        return ""
    lines.append(f"total: {total_samples} samples, {total_violations} violations")
    return "\n".join(lines)


def report_exit_code(reports: Iterable[VerificationReport]) -> int:
    return VIOLATION_EXIT_CODE if any(not r.ok for r in reports) else 0
