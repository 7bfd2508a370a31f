"""Staged pest control with one of several pesticides (or none) per stage.

Same threshold-penalty structure as the contamination task but with
five choices per stage and usage-dependent adjustments: every prior
application of a pesticide multiplies its stage cost by a decay factor
(bulk discount) and its control rate by a resistance factor, so
repeatedly spraying one product gets cheaper and less effective. There
is no L1 term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..space import SearchSpace
from ..validation import as_generator
from .config import load_constants

__all__ = ["PestInstance", "make_pest", "pest_objective"]


@dataclass
class PestInstance:
    """Frozen spread/initial draws plus per-pesticide tables."""

    spread_rates: np.ndarray     # (replicates, stages)
    init_fractions: np.ndarray   # (replicates,)
    control_rates: np.ndarray    # (categories,) category 0 is "no action"
    base_costs: np.ndarray       # (categories,)
    cost_decay_per_use: float
    resistance_per_use: float
    penalty: float
    threshold: float
    seed: int

    def __post_init__(self):
        if self.control_rates[0] != 0.0 or self.base_costs[0] != 0.0:
            raise ValueError("category 0 must be free no-action")
        if self.control_rates.shape != self.base_costs.shape:
            raise ValueError("pesticide tables must share a shape")
        if not ((self.spread_rates >= 0) & (self.spread_rates <= 1)).all():
            raise ValueError("spread rates must lie in [0, 1]")
        if not ((self.init_fractions >= 0) & (self.init_fractions <= 1)).all():
            raise ValueError("initial fractions must lie in [0, 1]")

    @property
    def n_stages(self) -> int:
        return self.spread_rates.shape[1]

    @property
    def n_replicates(self) -> int:
        return self.spread_rates.shape[0]

    @property
    def n_categories(self) -> int:
        return self.control_rates.size

    @property
    def space(self) -> SearchSpace:
        return SearchSpace.categorical(self.n_stages, self.n_categories)

    def stage_costs_and_rates(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Per-stage effective cost and control rate along a policy."""
        x = np.asarray(x)
        uses = np.zeros(self.n_categories, dtype=np.int64)
        costs = np.empty(self.n_stages)
        rates = np.empty(self.n_stages)
        for i, choice in enumerate(x):
            c = int(choice)
            if c == 0:
                costs[i] = 0.0
                rates[i] = 0.0
            else:
                costs[i] = self.base_costs[c] * self.cost_decay_per_use ** uses[c]
                rates[i] = self.control_rates[c] * self.resistance_per_use ** uses[c]
                uses[c] += 1
        return costs, rates

    def simulate(self, x) -> np.ndarray:
        """Infestation trajectories, shape (replicates, stages)."""
        x = np.asarray(x)
        _, rates = self.stage_costs_and_rates(x)
        z = self.init_fractions.copy()
        out = np.empty_like(self.spread_rates)
        for i in range(self.n_stages):
            if int(x[i]) == 0:
                z = self.spread_rates[:, i] * (1.0 - z) + z
            else:
                z = (1.0 - rates[i]) * z
            out[:, i] = z
        return out


def make_pest(seed: int, n_stages: int | None = None,
              constants: dict | None = None) -> PestInstance:
    consts = (constants or load_constants())["pest"]
    n_stages = consts["n_stages"] if n_stages is None else int(n_stages)
    T = consts["n_replicates"]
    rng = as_generator(seed)
    return PestInstance(
        spread_rates=rng.beta(*consts["spread_beta"], size=(T, n_stages)),
        init_fractions=rng.beta(*consts["init_beta"], size=T),
        control_rates=np.asarray(consts["control_rates"], dtype=np.float64),
        base_costs=np.asarray(consts["base_costs"], dtype=np.float64),
        cost_decay_per_use=float(consts["cost_decay_per_use"]),
        resistance_per_use=float(consts["resistance_per_use"]),
        penalty=float(consts["penalty"]),
        threshold=float(consts["threshold"]),
        seed=int(seed),
    )


def pest_objective(inst: PestInstance, x) -> float:
    """Effective pesticide cost plus threshold-exceedance penalty."""
    x = np.asarray(x)
    if x.shape != (inst.n_stages,) or not np.isin(x, np.arange(inst.n_categories)).all():
        raise ValueError(
            f"x must have {inst.n_stages} categories in [0, {inst.n_categories})"
        )
    costs, _ = inst.stage_costs_and_rates(x)
    z = inst.simulate(x)
    exceed = (z > inst.threshold).mean(axis=0)
    return float(costs.sum()) + inst.penalty * float(exceed.sum())
