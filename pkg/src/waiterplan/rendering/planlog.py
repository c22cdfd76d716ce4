"""
JSON-lines plan logs.

A log has one header line, one line per planning iteration and one
closing line with the outcome:

    {"type": "header", "format": "waiterplan-log", "version": 1, "scenario": ..., "digest": ..., "seed": ...}
    {"type": "iteration", "index": 0, "status": "feasible", "k": [...], "waypoint": [...], ...}
    {"type": "outcome", "outcome": "goal_reached", "tail": null}

Floats are written with repr precision so a log read back reproduces the
committed segments exactly.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import PlanLogError
from ..planner import CommittedSegment, IterationRecord, Outcome, PlanLog, PlanResult, PlanStatus
from ..traj import InitialCondition
from .interface import IOutputWriter

LOG_FORMAT = "waiterplan-log"
LOG_VERSION = 1


def _floats(values) -> Optional[List[float]]:
    if values is None:
        return None
    return [float(v) for v in np.asarray(values, dtype=float).reshape(-1)]


def _ic_dict(ic: InitialCondition) -> Dict[str, List[float]]:
    return {"q0": _floats(ic.q0), "v0": _floats(ic.v0), "a0": _floats(ic.a0)}


def _segment_dict(segment: Optional[CommittedSegment]) -> Optional[Dict[str, Any]]:
    if segment is None:
        return None
    return {
        "iteration": segment.iteration,
        "ic": _ic_dict(segment.ic),
        "k": _floats(segment.k),
        "eta1": _floats(segment.eta1),
        "eta2": _floats(segment.eta2),
        "t_final": segment.t_final,
        "t_start": segment.t_start,
        "t_end": segment.t_end,
        "braking": segment.braking,
    }


def _record_dict(record: IterationRecord) -> Dict[str, Any]:
    result = record.result
    return {
        "type": "iteration",
        "index": record.index,
        "status": result.status.value,
        "k": _floats(result.k),
        "waypoint": _floats(record.waypoint),
        "cost": float(result.cost),
        "constraint_max": {kind: float(v) for kind, v in result.constraint_max.items()},
        "solve_time": result.solve_time,
        "overrun": result.overrun,
        "iterations": result.iterations,
        "n_constraints": record.n_constraints,
        "build_time": record.build_time,
        "ic": _ic_dict(record.ic),
        "segment": _segment_dict(record.segment),
    }


class PlanLogWriter(IOutputWriter):
    """Writes a PlanLog as JSON lines tagged with the scenario file's digest."""

    suffix = ".jsonl"

    def __init__(self, digest: str, seed: int):
        self.digest = digest
        self.seed = seed

    def header(self, log: PlanLog) -> Dict[str, Any]:
        return {"type": "header", "format": LOG_FORMAT, "version": LOG_VERSION,
                "scenario": log.scenario, "digest": self.digest, "seed": self.seed}

    def format(self, log: PlanLog) -> str:
        lines = [self.header(log)]
        lines.extend(_record_dict(r) for r in log.records)
        lines.append({"type": "outcome", "outcome": log.outcome.value, "tail": _segment_dict(log.tail)})
        return "".join(json.dumps(line) + "\n" for line in lines)


@dataclass(eq=False)
class PlanLogFile:
    """A plan log read back from disk: its header and the reconstructed log."""
    header: Dict[str, Any]
    log: PlanLog

    @property
    def digest(self) -> str:
        return self.header["digest"]

    @property
    def segments(self) -> List[CommittedSegment]:
        return self.log.segments


class _LineReader:
    def __init__(self, path: Path):
        self.path = path
        self.line = 0

    def error(self, message: str) -> PlanLogError:
        return PlanLogError(message, self.path, self.line or None)

    def field(self, entry: Dict[str, Any], key: str):
        if key not in entry:
            raise self.error(f"missing field {key!r}")
        return entry[key]

    def array(self, entry: Dict[str, Any], key: str, optional: bool = False) -> Optional[np.ndarray]:
        value = entry.get(key) if optional else self.field(entry, key)
        if value is None:
            if optional:
                return None
            raise self.error(f"field {key!r} must not be null")
        try:
            return np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise self.error(f"field {key!r} must be a list of numbers")

    def ic(self, entry: Dict[str, Any]) -> InitialCondition:
        raw = self.field(entry, "ic")
        try:
            return InitialCondition(self.array(raw, "q0"), self.array(raw, "v0"), self.array(raw, "a0"))
        except (ValueError, TypeError) as e:
            raise self.error(f"invalid initial condition: {e}")

    def segment(self, raw: Optional[Dict[str, Any]]) -> Optional[CommittedSegment]:
        if raw is None:
            return None
        return CommittedSegment(
            iteration=int(self.field(raw, "iteration")),
            ic=self.ic(raw),
            k=self.array(raw, "k"),
            eta1=self.array(raw, "eta1"),
            eta2=self.array(raw, "eta2"),
            t_final=float(self.field(raw, "t_final")),
            t_start=float(self.field(raw, "t_start")),
            t_end=float(self.field(raw, "t_end")),
            braking=bool(raw.get("braking", False)),
        )

    def record(self, entry: Dict[str, Any]) -> IterationRecord:
        raw_status = self.field(entry, "status")
        try:
            status = PlanStatus(raw_status)
        except ValueError:
            raise self.error(f"unknown plan status {raw_status!r}")
        result = PlanResult(
            status=status,
            k=self.array(entry, "k", optional=True),
            cost=float(self.field(entry, "cost")),
            constraint_max=dict(entry.get("constraint_max", {})),
            solve_time=float(entry.get("solve_time", 0.0)),
            overrun=bool(entry.get("overrun", False)),
            iterations=int(entry.get("iterations", 0)),
        )
        return IterationRecord(
            index=int(self.field(entry, "index")),
            ic=self.ic(entry),
            waypoint=self.array(entry, "waypoint"),
            result=result,
            n_constraints=int(entry.get("n_constraints", 0)),
            build_time=float(entry.get("build_time", 0.0)),
            segment=self.segment(entry.get("segment")),
        )


def read_plan_log(path: Path, digest: Optional[str] = None) -> PlanLogFile:
    """
    Read a JSON-lines plan log.

    Args:
        path: The log file.
        digest: When given, the scenario digest the log must carry.

    Raises:
        PlanLogError: For unreadable files, malformed lines, unsupported
            versions, a missing outcome line or a digest mismatch.
    """
    path = Path(path)
    reader = _LineReader(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise PlanLogError(f"cannot read plan log: {e.strerror}", path) from e

    header: Optional[Dict[str, Any]] = None
    log: Optional[PlanLog] = None
    finished = False
    for reader.line, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            entry = json.loads(raw)
        except json.JSONDecodeError as e:
            raise reader.error(f"invalid JSON: {e.msg}") from e
        if not isinstance(entry, dict):
            raise reader.error("each line must be a JSON object")
        kind = entry.get("type")
        if header is None:
            if kind != "header" or entry.get("format") != LOG_FORMAT:
                raise reader.error("first line must be a waiterplan-log header")
            if entry.get("version") != LOG_VERSION:
                raise reader.error(f"unsupported log version {entry.get('version')}; expected {LOG_VERSION}")
            header = entry
            log = PlanLog(scenario=str(entry.get("scenario", "")))
        elif finished:
            raise reader.error("content after the outcome line")
        elif kind == "iteration":
            log.records.append(reader.record(entry))
        elif kind == "outcome":
            raw_outcome = reader.field(entry, "outcome")
            try:
                log.outcome = Outcome(raw_outcome)
            except ValueError:
                raise reader.error(f"unknown outcome {raw_outcome!r}")
            log.tail = reader.segment(entry.get("tail"))
            finished = True
        else:
            raise reader.error(f"unknown line type {kind!r}")

    if header is None:
        raise PlanLogError("empty plan log", path)
    if not finished:
        raise PlanLogError("plan log has no outcome line; the run did not finish", path)
    if digest is not None and header.get("digest") != digest:
        raise PlanLogError("plan log was written for a different scenario file (digest mismatch)", path)
    return PlanLogFile(header, log)
