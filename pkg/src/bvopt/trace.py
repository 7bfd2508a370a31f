"""Per-iteration optimization records shared by every method."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["TraceRecord", "OptimizationTrace", "ObjectiveError"]


class ObjectiveError(ValueError):
    """Objective returned a non-finite value; ``x`` is the offending point."""

    def __init__(self, message: str, x=None):
        super().__init__(message)
        self.x = None if x is None else [int(v) for v in x]


@dataclass
class TraceRecord:
    iteration: int
    x: np.ndarray
    y: float
    best: float
    t_fit_ms: float = 0.0
    t_inner_ms: float = 0.0
    elbo_final: float | None = None
    acq_at_selection: float | None = None


@dataclass
class OptimizationTrace:
    """Evaluations in order, plus the config and seed that produced them."""

    records: list[TraceRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    seed: int | None = None
    method: str = ""
    problem: str = ""

    def append(self, x, y: float, *, t_fit_ms: float = 0.0, t_inner_ms: float = 0.0,
               elbo_final: float | None = None,
               acq_at_selection: float | None = None) -> TraceRecord:
        y = float(y)
        if not np.isfinite(y):
            raise ObjectiveError(f"non-finite objective value {y} at x={list(x)}", x=x)
        best = min(y, self.records[-1].best) if self.records else y
        rec = TraceRecord(
            iteration=len(self.records),
            x=np.asarray(x, dtype=np.int64),
            y=y,
            best=best,
            t_fit_ms=float(t_fit_ms),
            t_inner_ms=float(t_inner_ms),
            elbo_final=elbo_final,
            acq_at_selection=acq_at_selection,
        )
        self.records.append(rec)
        return rec

    def __len__(self) -> int:
        return len(self.records)

    @property
    def best_so_far(self) -> np.ndarray:
        return np.array([r.best for r in self.records])

    @property
    def values(self) -> np.ndarray:
        return np.array([r.y for r in self.records])

    @property
    def final_best(self) -> float:
        if not self.records:
            raise ValueError("trace is empty")
        return self.records[-1].best

    def validate(self) -> None:
        """best_so_far must be the running minimum of the values."""
        best = np.minimum.accumulate(self.values)
        if not np.array_equal(best, self.best_so_far):
            raise AssertionError("best_so_far is not the running minimum")
