"""Benchmark objectives with seeded instances and deterministic evaluation."""

from .config import load_constants
from .ising import IsingInstance, ising_objective, make_ising
from .contamination import ContaminationInstance, contamination_objective, make_contamination
from .pest import PestInstance, make_pest, pest_objective
from .synthetic import make_linear_objective
from .external import ExternalObjective
from .util import enumerate_optimum

__all__ = [
    "load_constants",
    "IsingInstance",
    "make_ising",
    "ising_objective",
    "ContaminationInstance",
    "make_contamination",
    "contamination_objective",
    "PestInstance",
    "make_pest",
    "pest_objective",
    "make_linear_objective",
    "ExternalObjective",
    "enumerate_optimum",
]
