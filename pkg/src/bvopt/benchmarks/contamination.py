"""Staged contamination control with binary decontamination decisions.

Contaminated fraction at each stage follows
z_i = a_i (1 - x_i)(1 - z_{i-1}) + (1 - G_i x_i) z_{i-1}
over a fixed set of replicates (rates and initial fractions are frozen
into the instance, so the objective is a deterministic black box). Cost
per stage is the control charge plus the penalty times the fraction of
replicates above the threshold, with an optional L1 charge on controls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..space import SearchSpace
from ..validation import as_generator
from .config import load_constants

__all__ = ["ContaminationInstance", "make_contamination", "contamination_objective"]


@dataclass
class ContaminationInstance:
    """Frozen rate and initial-contamination draws."""

    alpha_rates: np.ndarray      # (replicates, stages) contamination rates
    gamma_rates: np.ndarray      # (replicates, stages) decontamination rates
    init_fractions: np.ndarray   # (replicates,) starting contamination
    stage_cost: float
    penalty: float
    threshold: float
    reg_lambda: float
    seed: int

    def __post_init__(self):
        for name in ("alpha_rates", "gamma_rates", "init_fractions"):
            arr = getattr(self, name)
            if not ((arr >= 0.0) & (arr <= 1.0)).all():
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.alpha_rates.shape != self.gamma_rates.shape:
            raise ValueError("rate tables must share a shape")

    @property
    def n_stages(self) -> int:
        return self.alpha_rates.shape[1]

    @property
    def n_replicates(self) -> int:
        return self.alpha_rates.shape[0]

    @property
    def space(self) -> SearchSpace:
        return SearchSpace.binary(self.n_stages)

    def simulate(self, x) -> np.ndarray:
        """Contamination trajectories, shape (replicates, stages)."""
        x = np.asarray(x)
        z = self.init_fractions.copy()
        out = np.empty_like(self.alpha_rates)
        for i in range(self.n_stages):
            if x[i]:
                z = (1.0 - self.gamma_rates[:, i]) * z
            else:
                z = self.alpha_rates[:, i] * (1.0 - z) + z
            out[:, i] = z
        return out


def make_contamination(seed: int, reg_lambda: float = 0.0,
                       n_stages: int | None = None,
                       constants: dict | None = None) -> ContaminationInstance:
    consts = (constants or load_constants())["contamination"]
    n_stages = consts["n_stages"] if n_stages is None else int(n_stages)
    T = consts["n_replicates"]
    rng = as_generator(seed)
    return ContaminationInstance(
        alpha_rates=rng.beta(*consts["contamination_beta"], size=(T, n_stages)),
        gamma_rates=rng.beta(*consts["decontamination_beta"], size=(T, n_stages)),
        init_fractions=rng.beta(*consts["init_beta"], size=T),
        stage_cost=float(consts["stage_cost"]),
        penalty=float(consts["penalty"]),
        threshold=float(consts["threshold"]),
        reg_lambda=float(reg_lambda),
        seed=int(seed),
    )


def contamination_objective(inst: ContaminationInstance, x) -> float:
    """Control cost plus threshold-exceedance penalty plus L1 charge."""
    x = np.asarray(x)
    if x.shape != (inst.n_stages,) or not np.isin(x, (0, 1)).all():
        raise ValueError(f"x must be a 0/1 vector of length {inst.n_stages}")
    z = inst.simulate(x)
    exceed = (z > inst.threshold).mean(axis=0)
    cost = inst.stage_cost * float(x.sum())
    penalty = inst.penalty * float(exceed.sum())
    return cost + penalty + inst.reg_lambda * float(x.sum())
