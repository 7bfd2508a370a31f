"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

__all__ = ["as_generator", "spawn_generator", "check_finite_scalar"]


def as_generator(random_state) -> np.random.Generator:
    """Coerce None, an int seed, a SeedSequence, or a Generator to a Generator."""
    if random_state is None:
        return np.random.default_rng()
    if isinstance(random_state, np.random.Generator):
        return random_state
    if isinstance(random_state, (int, np.integer, np.random.SeedSequence)):
        return np.random.default_rng(random_state)
    raise TypeError(f"cannot build a Generator from {type(random_state).__name__}")


def spawn_generator(master_seed: int, *key: int) -> np.random.Generator:
    """Deterministic derived stream: the same (seed, key) always yields the same rng.

    Keys, not spawn order, identify a stream, so parallel schedules cannot
    change which numbers a consumer sees.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def check_finite_scalar(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value
