"""Result assembly and formatting for the end of a campaign.

The report mirrors the printed-list layout users expect from this kind of
audit: the replicate-expanded sample sizes, then one block per resource
holding the best model tag, the extrapolated full-dataset cost, and the
significance p-value (null when the best model is CONSTANT).
"""

import json
from dataclasses import dataclass
from typing import Optional

import psutil

from .fitting import BenchmarkResult, MeasurementSeries, predict_at

_TIME_KEY = "TIME COMPLEXITY RESULTS"
_MEMORY_KEY = "MEMORY COMPLEXITY RESULTS"


def format_duration(seconds: float) -> str:
    """Two-decimal duration with a unit suffix: S below a minute, then M/H/D."""
    if not seconds >= 0:
        raise ValueError(f"duration must be finite and >= 0, got {seconds}")
    if seconds < 60:
        return f"{seconds:.2f}S"
    if seconds < 3600:
        return f"{seconds / 60:.2f}M"
    if seconds < 86400:
        return f"{seconds / 3600:.2f}H"
    return f"{seconds / 86400:.2f}D"


def format_memory(nbytes: float) -> str:
    """Whole mebibytes with an ' Mb' suffix (Mb here means MiB, 2**20 bytes)."""
    if not nbytes >= 0:
        raise ValueError(f"memory must be finite and >= 0, got {nbytes}")
    return f"{round(nbytes / 2**20)} Mb"


def parse_duration(text: str) -> float:
    """Inverse of format_duration, in seconds."""
    unit = text[-1]
    value = float(text[:-1])
    return value * {"S": 1, "M": 60, "H": 3600, "D": 86400}[unit]


def parse_memory(text: str) -> float:
    """Inverse of format_memory, in bytes."""
    if not text.endswith(" Mb"):
        raise ValueError(f"not a memory string: {text!r}")
    return float(text[:-3]) * 2**20


def system_memory_limit() -> Optional[int]:
    """Total physical memory in bytes, or None when unobtainable."""
    try:
        return int(psutil.virtual_memory().total)
    except Exception:
        return None


@dataclass(frozen=True)
class ResourceReport:
    """One resource's outcome block."""

    best_model: str
    prediction: str
    p_value: Optional[float]
    system_memory_limit: Optional[str] = None


@dataclass(frozen=True)
class ComplexityReport:
    """The final result object for a campaign."""

    sample_sizes: tuple
    time: ResourceReport
    memory: Optional[ResourceReport]
    advisories: tuple = ()


def build_report(
    time_result: BenchmarkResult,
    mem_result: Optional[BenchmarkResult],
    n_full: int,
    time_series: MeasurementSeries,
    mem_series: Optional[MeasurementSeries] = None,
    advisories=(),
) -> ComplexityReport:
    """Assemble the report from the fitted results.

    The prediction for each resource comes from its best model evaluated
    at the full dataset size (clamped at zero). When no memory result is
    available the memory block is omitted entirely.
    """
    if n_full < 1:
        raise ValueError(f"n_full must be >= 1, got {n_full}")

    time_block = ResourceReport(
        best_model=time_result.best.name,
        prediction=format_duration(predict_at(time_result.best_fit, n_full)),
        p_value=time_result.p_value,
    )
    memory_block = None
    if mem_result is not None:
        limit = system_memory_limit()
        memory_block = ResourceReport(
            best_model=mem_result.best.name,
            prediction=format_memory(predict_at(mem_result.best_fit, n_full)),
            p_value=mem_result.p_value,
            system_memory_limit=None if limit is None else format_memory(limit),
        )
    return ComplexityReport(
        sample_sizes=tuple(time_series.sizes),
        time=time_block,
        memory=memory_block,
        advisories=tuple(advisories),
    )


def serialize_report(report: ComplexityReport) -> str:
    """Canonical JSON document with stable key order.

    An absent p-value serializes as an explicit null; sample sizes stay
    replicate-expanded, matching the shape they were measured in.
    """
    doc = {"sample.sizes": list(report.sample_sizes)}
    doc[_TIME_KEY] = {
        "best.model": report.time.best_model,
        "computation.time.on.full.dataset": report.time.prediction,
        "p.value.model.significance": report.time.p_value,
    }
    if report.memory is not None:
        block = {
            "best.model": report.memory.best_model,
            "memory.usage.on.full.dataset": report.memory.prediction,
        }
        if report.memory.system_memory_limit is not None:
            block["system.memory.limit"] = report.memory.system_memory_limit
        block["p.value.model.significance"] = report.memory.p_value
        doc[_MEMORY_KEY] = block
    doc["advisories"] = list(report.advisories)
    return json.dumps(doc, indent=2)


def parse_report(text: str) -> ComplexityReport:
    """Inverse of serialize_report."""
    doc = json.loads(text)
    tblock = doc[_TIME_KEY]
    time_report = ResourceReport(
        best_model=tblock["best.model"],
        prediction=tblock["computation.time.on.full.dataset"],
        p_value=tblock["p.value.model.significance"],
    )
    memory_report = None
    if _MEMORY_KEY in doc:
        mblock = doc[_MEMORY_KEY]
        memory_report = ResourceReport(
            best_model=mblock["best.model"],
            prediction=mblock["memory.usage.on.full.dataset"],
            p_value=mblock["p.value.model.significance"],
            system_memory_limit=mblock.get("system.memory.limit"),
        )
    return ComplexityReport(
        sample_sizes=tuple(doc["sample.sizes"]),
        time=time_report,
        memory=memory_report,
        advisories=tuple(doc.get("advisories", ())),
    )
