"""Monte-Carlo acquisition utilities under a Thompson-sampled surrogate.

Minimization convention throughout: the incumbent is the best (lowest)
observed objective, utilities are defined so that larger acquisition
values mark more desirable candidates, and the proposal ascends them.

Kinds:
  ``ei``  expected improvement  E[max(0, incumbent - y)]
  ``pi``  smoothed probability of improvement  E[sigmoid(sharpness * (incumbent - y))]
  ``sr``  simple regret  -E[y], closed form

Expectations are over y ~ Normal(predicted mean, obs_sigma^2) using
reparameterized draws, so the whole chain stays differentiable in the
predicted mean. The raw improvement indicator has a zero gradient almost
everywhere, hence the sigmoid-smoothed ``pi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autodiff import Tape, Var
from .surrogate import MlpArchitecture, _split_params, build_mlp
from .validation import as_generator

__all__ = ["AcquisitionConfig", "acq_value", "acq_graph", "expected_acq_over_batch"]

_KINDS = ("ei", "pi", "sr")


@dataclass
class AcquisitionConfig:
    """Utility choice plus the incumbent it improves upon."""

    kind: str = "ei"
    incumbent: float = 0.0
    mc_y_samples: int = 64
    pi_sharpness: float = 10.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.mc_y_samples < 1:
            raise ValueError("mc_y_samples must be at least 1")
        if self.pi_sharpness <= 0:
            raise ValueError("pi_sharpness must be positive")
        if not np.isfinite(self.incumbent):
            raise ValueError("incumbent must be finite")


def acq_graph(tape: Tape, cfg: AcquisitionConfig, mean_row: Var,
              obs_sigma: float, eps: np.ndarray | None) -> Var:
    """Per-candidate acquisition values from a (1, n) row of predicted means.

    ``eps`` is a frozen (mc_y_samples, n) noise block for ei and pi;
    sr is closed form and ignores it. Returns a (1, n) row.
    """
    if cfg.kind == "sr":
        return -mean_row
    if eps is None:
        raise ValueError(f"{cfg.kind} needs frozen noise draws")
    draws = mean_row + tape.constant(eps * obs_sigma)
    gap = cfg.incumbent - draws
    if cfg.kind == "ei":
        util = tape.relu(gap)
    else:
        util = tape.sigmoid(gap * cfg.pi_sharpness)
    mc = eps.shape[0]
    return tape.matmul(tape.constant(np.full((1, mc), 1.0 / mc)), util)


def acq_value(cfg: AcquisitionConfig, predicted_mean: float, obs_sigma: float,
              rng) -> float:
    """Acquisition at one predicted mean; higher is better."""
    if obs_sigma < 0:
        raise ValueError("obs_sigma must be nonnegative")
    tape = Tape()
    mean = tape.leaf(np.array([[float(predicted_mean)]]))
    if cfg.kind == "sr":
        eps = None
    else:
        eps = as_generator(rng).standard_normal((cfg.mc_y_samples, 1))
    out = acq_graph(tape, cfg, mean, obs_sigma, eps)
    return float(out.value[0, 0])


def acq_value_with_grad(cfg: AcquisitionConfig, predicted_mean: float,
                        obs_sigma: float, rng) -> tuple[float, float]:
    """Acquisition and its derivative in the predicted mean (frozen noise)."""
    tape = Tape()
    mean = tape.leaf(np.array([[float(predicted_mean)]]))
    eps = None if cfg.kind == "sr" else as_generator(rng).standard_normal((cfg.mc_y_samples, 1))
    out = acq_graph(tape, cfg, mean, obs_sigma, eps)
    (g,) = tape.backward(tape.sum(out))
    return float(out.value[0, 0]), float(g[0, 0])


def expected_acq_over_batch(samples: np.ndarray, theta: np.ndarray,
                            arch: MlpArchitecture, cfg: AcquisitionConfig,
                            obs_sigma: float, rng) -> tuple[np.ndarray, float]:
    """Acquisition per relaxed sample plus the batch mean.

    ``samples`` is (n, input_dim); rows are points on the concatenated
    simplex blocks. The same taped chain (predict, then utility) the
    proposal gradient ascends is evaluated here, just with the inputs
    held constant.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError("samples must be a nonempty (n, input_dim) array")
    if samples.shape[1] != arch.input_dim:
        raise ValueError(
            f"samples have width {samples.shape[1]}, architecture wants {arch.input_dim}"
        )
    tape = Tape()
    x = tape.constant(samples.T)
    pred = build_mlp(tape, _split_params(arch, theta), x, arch)
    eps = None
    if cfg.kind != "sr":
        eps = as_generator(rng).standard_normal((cfg.mc_y_samples, samples.shape[0]))
    per_sample = acq_graph(tape, cfg, pred, obs_sigma, eps)
    values = per_sample.value.ravel().copy()
    return values, float(values.mean())
