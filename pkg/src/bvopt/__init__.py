"""Bayesian variational optimization over binary and categorical spaces."""

from .space import SearchSpace
from .relaxation import ProposalParams
from .surrogate import BNNRegressor, Dataset, MlpArchitecture, VariationalPosterior
from .acquisition import AcquisitionConfig
from .optimizer import BVOptimizer, initial_design, inner_optimize
from .baselines import RandomSearchOptimizer, SimulatedAnnealingOptimizer
from .trace import OptimizationTrace

__version__ = "0.1.0"

__all__ = [
    "SearchSpace",
    "ProposalParams",
    "BNNRegressor",
    "Dataset",
    "MlpArchitecture",
    "VariationalPosterior",
    "AcquisitionConfig",
    "BVOptimizer",
    "initial_design",
    "inner_optimize",
    "RandomSearchOptimizer",
    "SimulatedAnnealingOptimizer",
    "OptimizationTrace",
    "__version__",
]
