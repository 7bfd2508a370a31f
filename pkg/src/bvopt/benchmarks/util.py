"""Exhaustive search oracle over small spaces."""

from __future__ import annotations

import numpy as np

from ..space import SearchSpace

__all__ = ["enumerate_optimum"]

_MAX_POINTS = 2**24


def enumerate_optimum(objective, space: SearchSpace) -> tuple[np.ndarray, float]:
    """Exhaustive minimum (first point wins ties); guarded by space size."""
    n = space.n_points()
    if n > _MAX_POINTS:
        raise ValueError(f"space has {n} points, enumeration is capped at {_MAX_POINTS}")
    best_x, best_f = None, np.inf
    for x in space.iter_points():
        f = float(objective(x))
        if f < best_f:
            best_x, best_f = x, f
    return best_x, best_f
