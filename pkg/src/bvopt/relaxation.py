"""Relaxed proposal distributions over discrete assignments.

A proposal holds one logit vector per variable; sampling pushes Gumbel
noise through a temperature-controlled softmax so that draws live on the
simplex but stay differentiable with respect to the logits. Binary
variables can equivalently use the scalar sigmoid form with logistic
noise; both are kept because they agree in distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autodiff import NumericError, Tape, Var
from .space import SearchSpace
from .validation import as_generator

__all__ = [
    "ProposalParams",
    "gumbel_from_uniform",
    "sample_gumbel",
    "sample_concrete",
    "sample_binary_concrete",
    "concrete_graph",
    "discretize",
    "discretize_sample",
    "pathwise_grad",
]

# Uniform draws are clamped away from {0, 1} before log transforms.
_U_EPS = 1e-10


@dataclass
class ProposalParams:
    """Per-variable logits and a shared temperature."""

    logits: list[np.ndarray]
    temperature: float = 0.5

    def __post_init__(self):
        self.logits = [np.asarray(l, dtype=np.float64) for l in self.logits]
        if self.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        for i, l in enumerate(self.logits):
            if l.ndim != 1 or l.size < 2:
                raise ValueError(f"logits for dimension {i} must be a vector of length >= 2")
            if not np.all(np.isfinite(l)):
                raise ValueError(f"logits for dimension {i} must be finite")

    @property
    def dims(self) -> int:
        return len(self.logits)

    @classmethod
    def random_init(cls, space: SearchSpace, rng, temperature: float = 0.5,
                    scale: float = 1.0) -> "ProposalParams":
        rng = as_generator(rng)
        logits = [rng.normal(0.0, scale, size=k) for k in space.cardinalities]
        return cls(logits, temperature)


def gumbel_from_uniform(u) -> np.ndarray:
    """g = -log(-log u), with u clamped inside the open unit interval."""
    u = np.clip(np.asarray(u, dtype=np.float64), _U_EPS, 1.0 - _U_EPS)
    return -np.log(-np.log(u))


def sample_gumbel(shape, rng) -> np.ndarray:
    """Gumbel noise from clamped uniform draws."""
    rng = as_generator(rng)
    return gumbel_from_uniform(rng.random(shape))


def sample_concrete(params: ProposalParams, g: np.ndarray, dim: int) -> np.ndarray:
    """softmax((logits + g) / temperature) for one dimension.

    ``g`` may be a (k,) vector or a (k, b) matrix of independent noise
    columns; the result has the same shape with simplex columns.
    """
    if params.temperature <= 0:
        raise ValueError("temperature must be positive")
    logits = params.logits[dim]
    g = np.asarray(g, dtype=np.float64)
    if g.shape[0] != logits.size:
        raise ValueError(f"noise for dimension {dim} must have leading size {logits.size}")
    z = (logits.reshape(-1, *([1] * (g.ndim - 1))) + g) / params.temperature
    z -= z.max(axis=0, keepdims=True)
    e = np.exp(z)
    out = e / e.sum(axis=0, keepdims=True)
    # Extreme logit gaps saturate float64 to an exact one-hot; nudge back
    # inside the open simplex (samples must stay interior).
    out = np.clip(out, 1e-12, 1.0 - 1e-12)
    return out / out.sum(axis=0, keepdims=True)


def sample_binary_concrete(log_alpha: float, temperature: float, u: float) -> float:
    """sigmoid((log_alpha + logit(u)) / temperature) with logistic noise."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    u = np.clip(u, _U_EPS, 1.0 - _U_EPS)
    g = np.log(u) - np.log1p(-u)
    z = (log_alpha + g) / temperature
    return float(1.0 / (1.0 + np.exp(-z)))


def concrete_graph(tape: Tape, logits: Var, g: np.ndarray, temperature: float) -> Var:
    """Taped concrete sample: softmax((logits + g) / temperature).

    ``logits`` is a (k,) or (k, 1) variable and ``g`` a (k,) or (k, b)
    noise array held constant, so gradients flow to the logits only.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    z = (logits + tape.constant(g)) * (1.0 / temperature)
    return tape.softmax(z)


def discretize(params_or_samples) -> np.ndarray:
    """Mode of a proposal, or hard assignment of one relaxed sample.

    Ties break toward the lowest category index.
    """
    if isinstance(params_or_samples, ProposalParams):
        vectors = params_or_samples.logits
    else:
        vectors = params_or_samples
    return np.array([int(np.argmax(v)) for v in vectors], dtype=np.int64)


def discretize_sample(sample: list[np.ndarray]) -> np.ndarray:
    """Hard assignment from per-dimension simplex vectors."""
    return discretize(sample)


def pathwise_grad(objective, params: ProposalParams, batch: int, rng) -> list[np.ndarray]:
    """Monte-Carlo average of per-sample reparameterized logit gradients.

    ``objective(tape, sample)`` must build a scalar from per-dimension
    simplex variables. Noise is frozen per sample, so each term is an
    exact gradient of the objective along that sample path.
    """
    if batch < 1:
        raise ValueError("batch must be at least 1")
    rng = as_generator(rng)
    grads = [np.zeros_like(l) for l in params.logits]
    for b in range(batch):
        tape = Tape()
        logit_vars = [tape.leaf(l) for l in params.logits]
        sample = [
            concrete_graph(tape, lv, sample_gumbel(l.size, rng), params.temperature)
            for lv, l in zip(logit_vars, params.logits)
        ]
        out = objective(tape, sample)
        leaf_grads = tape.backward(out)
        for i, g in enumerate(leaf_grads[: params.dims]):
            if not np.all(np.isfinite(g)):
                raise NumericError(f"non-finite pathwise gradient at sample {b}")
            grads[i] += g / batch
    return grads
