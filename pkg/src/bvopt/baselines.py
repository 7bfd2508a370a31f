"""Random search and simulated annealing over the same discrete spaces."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .space import SearchSpace
from .trace import ObjectiveError, OptimizationTrace
from .validation import as_generator

__all__ = ["RandomSearchOptimizer", "SimulatedAnnealingOptimizer"]


def _evaluate(objective, x) -> float:
    y = float(objective(np.asarray(x, dtype=np.int64)))
    if not np.isfinite(y):
        raise ObjectiveError(f"objective returned non-finite value {y} at x={list(x)}", x=x)
    return y


class RandomSearchOptimizer(BaseEstimator):
    """Uniform draws over the space, best-so-far tracked.

    ``dedupe=True`` resamples already-seen points (up to 100x budget
    attempts overall, mirroring the initial-design rule) so small spaces
    get covered instead of wasting evaluations.
    """

    def __init__(self, budget=170, dedupe=True, random_state=None):
        self.budget = budget
        self.dedupe = dedupe
        self.random_state = random_state

    def minimize(self, objective, space: SearchSpace) -> OptimizationTrace:
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        rng = as_generator(self.random_state)
        trace = OptimizationTrace(
            config={k: v for k, v in self.get_params().items()},
            seed=self.random_state if isinstance(self.random_state, int) else None,
            method="rs",
        )
        seen: set[tuple[int, ...]] = set()
        attempts_left = 100 * self.budget
        for _ in range(self.budget):
            x = space.random_point(rng)
            attempts_left -= 1
            if self.dedupe:
                while tuple(int(v) for v in x) in seen and attempts_left > 0:
                    x = space.random_point(rng)
                    attempts_left -= 1
            seen.add(tuple(int(v) for v in x))
            trace.append(x, _evaluate(objective, x))
        trace.validate()
        return trace


class SimulatedAnnealingOptimizer(BaseEstimator):
    """Metropolis acceptance with a geometric cooling schedule.

    The neighbor move resamples one uniformly chosen variable to a
    uniformly chosen different category, which covers binary and
    categorical spaces with the same rule. ``budget`` counts objective
    evaluations (one for the start point, one per step).
    """

    def __init__(self, budget=170, initial_temp=1.0, cooling=0.99, random_state=None):
        self.budget = budget
        self.initial_temp = initial_temp
        self.cooling = cooling
        self.random_state = random_state

    def minimize(self, objective, space: SearchSpace) -> OptimizationTrace:
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if not (0.0 < self.cooling < 1.0):
            raise ValueError("cooling must be a geometric factor in (0, 1)")
        if self.initial_temp <= 0:
            raise ValueError("initial_temp must be positive")
        rng = as_generator(self.random_state)
        trace = OptimizationTrace(
            config={k: v for k, v in self.get_params().items()},
            seed=self.random_state if isinstance(self.random_state, int) else None,
            method="sa",
        )
        current = space.random_point(rng)
        f_current = _evaluate(objective, current)
        trace.append(current, f_current)
        temp = float(self.initial_temp)
        self.accepted_uphill_ = 0
        for _ in range(self.budget - 1):
            proposal = self._neighbor(current, space, rng)
            f_proposal = _evaluate(objective, proposal)
            trace.append(proposal, f_proposal)
            delta = f_proposal - f_current
            if self._accept(delta, temp, rng):
                if delta > 0:
                    self.accepted_uphill_ += 1
                current, f_current = proposal, f_proposal
            temp *= self.cooling
        trace.validate()
        return trace

    @staticmethod
    def _accept(delta: float, temp: float, rng: np.random.Generator) -> bool:
        """Metropolis rule: accept with probability min(1, exp(-delta/temp))."""
        if delta < 0:
            return True
        return rng.random() < np.exp(-delta / max(temp, 1e-300))

    @staticmethod
    def _neighbor(x: np.ndarray, space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
        out = x.copy()
        d = int(rng.integers(space.dims))
        k = space.cardinalities[d]
        shift = int(rng.integers(1, k))
        out[d] = (out[d] + shift) % k
        return out
