"""Iteration-aligned mean/std curves from persisted traces."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .traces_io import read_trace

CURVES_SCHEMA = "bvopt-curves-v1"

__all__ = ["CURVES_SCHEMA", "aggregate", "write_curves_csv", "read_curves_csv"]


def aggregate(trace_paths, label: str = "") -> dict:
    """Per-iteration mean and population std of best-so-far across runs."""
    trace_paths = [Path(p) for p in trace_paths]
    if not trace_paths:
        raise ValueError("aggregate needs at least one trace")
    curves = []
    lengths = {}
    for p in trace_paths:
        _, records = read_trace(p)
        curves.append([r["best"] for r in records])
        lengths.setdefault(len(records), []).append(str(p))
    if len(lengths) > 1:
        listing = "; ".join(f"{n} iterations: {files}" for n, files in sorted(lengths.items()))
        raise ValueError(f"mismatched budgets across traces ({listing})")
    best = np.asarray(curves)
    return {
        "label": label or "runs",
        "iters": np.arange(best.shape[1]),
        "mean": best.mean(axis=0),
        "std": best.std(axis=0),  # population convention
        "n_runs": best.shape[0],
    }


def write_curves_csv(path, curve: dict) -> None:
    lines = [
        f"# schema: {CURVES_SCHEMA}",
        "# std: population (divide by n)",
        "iter,mean_best,std_best,n_runs,label",
    ]
    for i, m, s in zip(curve["iters"], curve["mean"], curve["std"]):
        lines.append(f"{int(i)},{float(m)!r},{float(s)!r},{curve['n_runs']},{curve['label']}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_curves_csv(path) -> dict:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != f"# schema: {CURVES_SCHEMA}":
        raise ValueError(f"{path}: expected curves schema {CURVES_SCHEMA}")
    rows = [l.split(",") for l in lines if l and not l.startswith("#")][1:]
    return {
        "iters": np.array([int(r[0]) for r in rows]),
        "mean": np.array([float(r[1]) for r in rows]),
        "std": np.array([float(r[2]) for r in rows]),
        "n_runs": int(rows[0][3]) if rows else 0,
        "label": rows[0][4] if rows else "",
    }
