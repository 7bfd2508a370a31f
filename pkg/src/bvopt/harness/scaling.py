"""Wall-time scaling of one optimization round versus problem size.

Measures fit-plus-inner-loop time on synthetic categorical problems
(instance construction excluded), normalizes each series so the mean of
its first three points is 1, and fits a log-log slope by least squares.
The two modes differ in how surrogate training reacts to data size:
``fixed_batches`` holds the number of gradient steps constant while
``fixed_epochs`` holds passes over the data constant.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..acquisition import AcquisitionConfig
from ..optimizer import inner_optimize
from ..space import SearchSpace
from ..surrogate import BNNRegressor
from ..validation import spawn_generator

SCALING_SCHEMA = "bvopt-scaling-v1"
_MIN_RELIABLE_S = 0.010

logger = logging.getLogger(__name__)

__all__ = [
    "SCALING_SCHEMA",
    "ScalingRecord",
    "fit_loglog_slope",
    "scaling_study",
    "reference_records",
    "write_scaling_csv",
    "read_scaling_csv",
]


@dataclass
class ScalingRecord:
    series: str
    axis: str
    size: int
    time_s: float
    normalized: float
    slope: float


def fit_loglog_slope(sizes, times) -> float:
    """Least-squares slope of log(time) against log(size)."""
    sizes = np.asarray(sizes, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if sizes.size != times.size or sizes.size < 2:
        raise ValueError("need matching size/time arrays of length >= 2")
    if np.any(times <= 0) or np.any(sizes <= 0):
        raise ValueError("sizes and times must be positive")
    slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
    if not np.isfinite(slope):
        raise ValueError("slope is not finite")
    return float(slope)


def _one_round_time(dims: int, n_data: int, mode: str, seed: int,
                    categories: int = 5, hidden=(64, 64), epochs_fixed: int = 30,
                    total_batches: int = 30, batch_size: int = 64,
                    inner_steps: int = 20, proposal_batch: int = 32,
                    restarts: int = 4) -> float:
    """Fit plus one inner optimization; setup excluded from the clock."""
    space = SearchSpace.categorical(dims, categories)
    rng = spawn_generator(seed, dims, n_data)
    X = space.encode_batch(
        np.stack([space.random_point(rng) for _ in range(n_data)])
    )
    y = rng.normal(size=n_data)
    if mode == "fixed_batches":
        steps_per_epoch = max(1, int(np.ceil(n_data / batch_size)))
        epochs = max(1, round(total_batches / steps_per_epoch))
    else:
        epochs = epochs_fixed
    model = BNNRegressor(hidden_sizes=hidden, epochs=epochs, batch_size=batch_size,
                         mc_samples=1)

    t0 = time.perf_counter()
    model.fit(X, y, rng=rng)
    theta = model.sample_weights(rng)
    inner_optimize(
        theta, space, arch=model.arch_,
        acq_cfg=AcquisitionConfig(kind="ei", incumbent=0.0, mc_y_samples=8),
        obs_sigma=model.cfg_.obs_sigma, inner_steps=inner_steps,
        inner_lr=0.1, proposal_batch=proposal_batch, restarts=restarts, rng=rng,
    )
    return time.perf_counter() - t0


def scaling_study(axis: str, sizes, mode: str = "fixed_epochs", repeats: int = 3,
                  seed: int = 0, series: str = "bvo", **round_kwargs) -> list[ScalingRecord]:
    """Timing records over increasing sizes along one axis."""
    sizes = [int(s) for s in sizes]
    if axis not in ("dimension", "data_size"):
        raise ValueError("axis must be 'dimension' or 'data_size'")
    if mode not in ("fixed_batches", "fixed_epochs"):
        raise ValueError("mode must be 'fixed_batches' or 'fixed_epochs'")
    if len(sizes) < 4 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("need at least 4 strictly increasing sizes")
    fixed_dims = int(round_kwargs.pop("dims", 21))
    fixed_data = int(round_kwargs.pop("n_data", 100))
    times = []
    for size in sizes:
        dims = size if axis == "dimension" else fixed_dims
        n_data = size if axis == "data_size" else fixed_data
        reps = [
            _one_round_time(dims, n_data, mode, seed + r, **round_kwargs)
            for r in range(repeats)
        ]
        t = float(np.mean(reps))
        if t < _MIN_RELIABLE_S:
            logger.warning("scaling point %s=%d took %.1f ms, below timer comfort",
                           axis, size, t * 1e3)
        times.append(t)
    base = float(np.mean(times[:3]))
    normalized = [t / base for t in times]
    slope = fit_loglog_slope(sizes, times)
    return [
        ScalingRecord(series=series, axis=axis, size=s, time_s=t, normalized=n, slope=slope)
        for s, t, n in zip(sizes, times, normalized)
    ]


def reference_records(axis: str, sizes, order: float,
                      series: str | None = None) -> list[ScalingRecord]:
    """Analytic t = size^order series (normalized like measured ones)."""
    sizes = [int(s) for s in sizes]
    times = [float(s) ** order for s in sizes]
    base = float(np.mean(times[:3]))
    return [
        ScalingRecord(series=series or f"reference_order_{order:g}", axis=axis,
                      size=s, time_s=t, normalized=t / base, slope=float(order))
        for s, t in zip(sizes, times)
    ]


def write_scaling_csv(path, records: list[ScalingRecord]) -> None:
    lines = [
        f"# schema: {SCALING_SCHEMA}",
        "# normalization: mean of first 3 points per series = 1",
        "series,axis,size,time_s,normalized,slope",
    ]
    for r in records:
        lines.append(
            f"{r.series},{r.axis},{r.size},{r.time_s!r},{r.normalized!r},{r.slope!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_scaling_csv(path) -> list[ScalingRecord]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != f"# schema: {SCALING_SCHEMA}":
        raise ValueError(f"{path}: expected scaling schema {SCALING_SCHEMA}")
    rows = [l.split(",") for l in lines if l and not l.startswith("#")][1:]
    return [
        ScalingRecord(series=r[0], axis=r[1], size=int(r[2]), time_s=float(r[3]),
                      normalized=float(r[4]), slope=float(r[5]))
        for r in rows
    ]
