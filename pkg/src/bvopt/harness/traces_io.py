"""Versioned JSON-lines persistence for optimization traces.

The main trace file holds only seed-determined content (one header
object, then one record per evaluation), so re-running an experiment
with the same master seed reproduces it byte for byte. Wall-clock
measurements go to a sidecar next to it; summaries read both.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..trace import OptimizationTrace, TraceRecord

TRACE_SCHEMA = "bvopt-trace-v1"
TIMINGS_SCHEMA = "bvopt-timings-v1"

__all__ = [
    "TRACE_SCHEMA",
    "TIMINGS_SCHEMA",
    "SchemaError",
    "write_trace",
    "read_trace",
    "write_timings",
    "read_timings",
    "timings_path",
]


class SchemaError(ValueError):
    """A persisted file does not carry the schema this code expects."""


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def timings_path(trace_path) -> Path:
    p = Path(trace_path)
    return p.with_name(p.name.replace(".trace.jsonl", "") + ".timings.jsonl")


def write_trace(path, trace: OptimizationTrace, problem: str = "",
                extra: dict | None = None) -> None:
    path = Path(path)
    header = {
        "schema": TRACE_SCHEMA,
        "method": trace.method,
        "problem": problem or trace.problem,
        "seed": trace.seed,
        "config": trace.config,
    }
    if extra:
        header.update(extra)
    lines = [_dumps(header)]
    for rec in trace.records:
        lines.append(_dumps({
            "iter": rec.iteration,
            "x": [int(v) for v in rec.x],
            "y": rec.y,
            "best": rec.best,
            "seed": trace.seed,
        }))
    path.write_text("\n".join(lines) + "\n")


def write_timings(path, trace: OptimizationTrace, wall_s: float) -> None:
    path = Path(path)
    header = {"schema": TIMINGS_SCHEMA, "wall_s": wall_s}
    lines = [_dumps(header)]
    for rec in trace.records:
        lines.append(_dumps({
            "iter": rec.iteration,
            "t_fit_ms": rec.t_fit_ms,
            "t_inner_ms": rec.t_inner_ms,
        }))
    path.write_text("\n".join(lines) + "\n")


def _read_jsonl(path, schema: str) -> tuple[dict, list[dict]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = json.loads(lines[0])
    if header.get("schema") != schema:
        raise SchemaError(
            f"{path}: schema mismatch, expected {schema}, got {header.get('schema')!r}"
        )
    return header, [json.loads(l) for l in lines[1:]]


def read_trace(path) -> tuple[dict, list[dict]]:
    """Header and records; raises SchemaError on any version mismatch."""
    return _read_jsonl(path, TRACE_SCHEMA)


def read_timings(path) -> tuple[dict, list[dict]]:
    return _read_jsonl(path, TIMINGS_SCHEMA)
