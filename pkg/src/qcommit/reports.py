"""Experiment reports with byte-reproducible serialization.

JSON output is canonical: keys sorted, floats printed with 17 significant
digits (enough to round-trip doubles exactly). Wall-clock time is tracked
on the report object but deliberately left out of the serialized bytes so
that identical (config, seed) runs produce identical files.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

TOOL_VERSION = "0.1.0"


@dataclass
class ExperimentReport:
    config: dict
    metrics: dict
    bound: Optional[float] = None
    passed: Optional[bool] = None
    tool_version: str = TOOL_VERSION
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if (self.bound is None) != (self.passed is None):
            raise ValueError("bound and passed must be present together")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if value is None:
        return "null"
    if isinstance(value, str):
        out = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(value, dict):
        items = ", ".join(f'{_fmt(str(k))}: {_fmt(v)}' for k, v in sorted(value.items()))
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def emit_report(report: ExperimentReport, fmt: str = "json") -> bytes:
    """Serialize a report; deterministic given the report's contents."""
    if fmt == "json":
        payload = {
            "config": report.config,
            "metrics": report.metrics,
            "tool_version": report.tool_version,
        }
        if report.bound is not None:
            payload["bound"] = report.bound
            payload["pass"] = report.passed
        return (_fmt(payload) + "\n").encode()
    if fmt == "csv":
        out = io.StringIO()
        out.write("metric,value\n")
        for key in sorted(report.metrics):
            out.write(f"{key},{_fmt(report.metrics[key])}\n")
        if report.bound is not None:
            out.write(f"bound,{_fmt(report.bound)}\n")
            out.write(f"pass,{_fmt(report.passed)}\n")
        return out.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")
