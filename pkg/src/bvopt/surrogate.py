"""Mean-field variational Bayesian neural network surrogate.

The regressor keeps a diagonal Gaussian over MLP weights, trained by
stochastic ascent on the evidence lower bound: a reparameterized
Monte-Carlo estimate of the Gaussian log-likelihood plus a closed-form
KL penalty against the prior. Prediction under one weight draw is what
the acquisition layer consumes (Thompson sampling), so a fitted model
exposes both a point draw and the deterministic mean-weight forward
pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .autodiff import NumericError, Tape, Var, softplus
from .optim import AdamState
from .validation import as_generator

__all__ = [
    "MlpArchitecture",
    "LikelihoodConfig",
    "VariationalPosterior",
    "Dataset",
    "ElboResult",
    "BNNRegressor",
    "build_mlp",
    "elbo",
    "thompson_sample",
    "predict",
    "init_posterior",
    "save_checkpoint",
    "load_checkpoint",
]

_ACTIVATIONS = ("relu", "tanh")
_CHECKPOINT_SCHEMA = "bvopt-posterior-v1"
# softplus underflows to exactly 0 below about -745; the floor only
# guards log(0) and is invisible for any representable positive sigma.
_SIGMA_FLOOR = 1e-300


@dataclass(frozen=True)
class MlpArchitecture:
    """Fully connected net mapping one-hot inputs to one scalar output."""

    input_dim: int
    hidden_sizes: tuple[int, ...] = (100, 100, 100)
    activation: str = "relu"

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        if self.input_dim < 1:
            raise ValueError("input_dim must be at least 1")
        if any(h < 1 for h in self.hidden_sizes):
            raise ValueError("hidden sizes must be at least 1")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"activation must be one of {_ACTIVATIONS}")

    @property
    def output_dim(self) -> int:
        return 1

    def layer_dims(self) -> list[tuple[int, int]]:
        sizes = [self.input_dim, *self.hidden_sizes, self.output_dim]
        return [(sizes[i + 1], sizes[i]) for i in range(len(sizes) - 1)]

    def param_shapes(self) -> list[tuple[int, ...]]:
        shapes: list[tuple[int, ...]] = []
        for out_dim, in_dim in self.layer_dims():
            shapes.append((out_dim, in_dim))
            shapes.append((out_dim, 1))
        return shapes

    @property
    def n_params(self) -> int:
        return int(sum(np.prod(s) for s in self.param_shapes()))


@dataclass
class LikelihoodConfig:
    """Gaussian likelihood plus prior scales for the ELBO."""

    obs_sigma: float = 0.1
    kl_weight: float = 1.0
    prior_sigma: float = 1.0

    def __post_init__(self):
        if self.obs_sigma <= 0:
            raise ValueError("obs_sigma must be positive")
        if self.prior_sigma <= 0:
            raise ValueError("prior_sigma must be positive")
        if self.kl_weight < 0:
            raise ValueError("kl_weight must be nonnegative")


@dataclass
class VariationalPosterior:
    """Per-weight Gaussian: mean mu and sigma = softplus(rho)."""

    mu: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=np.float64)
        self.rho = np.asarray(self.rho, dtype=np.float64)
        if self.mu.shape != self.rho.shape or self.mu.ndim != 1:
            raise ValueError("mu and rho must be flat vectors of equal length")

    @property
    def sigma(self) -> np.ndarray:
        return _softplus_np(self.rho)

    def copy(self) -> "VariationalPosterior":
        return VariationalPosterior(self.mu.copy(), self.rho.copy())


@dataclass
class Dataset:
    """Evaluated points: categories, one-hot encodings, objective values."""

    xs: list = field(default_factory=list)
    one_hots: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    iterations: list = field(default_factory=list)

    def append(self, x, one_hot, y, iteration: int) -> None:
        y = float(y)
        if not np.isfinite(y):
            raise ValueError(f"objective value must be finite, got {y}")
        self.xs.append(np.asarray(x, dtype=np.int64))
        self.one_hots.append(np.asarray(one_hot, dtype=np.float64))
        self.ys.append(y)
        self.iterations.append(int(iteration))

    def __len__(self) -> int:
        return len(self.ys)

    @property
    def X(self) -> np.ndarray:
        return np.asarray(self.one_hots)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.ys)

    def contains(self, x) -> bool:
        key = tuple(int(v) for v in x)
        return key in {tuple(int(v) for v in row) for row in self.xs}


@dataclass
class ElboResult:
    value: float
    log_lik: float
    kl: float
    grad_mu: np.ndarray
    grad_rho: np.ndarray


def _softplus_np(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _inverse_softplus(y: float) -> float:
    # exact for the init scales used here; expm1 keeps small y accurate
    return float(np.log(np.expm1(y)))


def init_posterior(arch: MlpArchitecture, rng, mu_scale: float = 0.05,
                   sigma_init: float = 0.01) -> VariationalPosterior:
    """Small random means and small initial uncertainty."""
    rng = as_generator(rng)
    mu = rng.normal(0.0, mu_scale, size=arch.n_params)
    rho = np.full(arch.n_params, _inverse_softplus(sigma_init))
    return VariationalPosterior(mu, rho)


def _split_params(arch: MlpArchitecture, flat: np.ndarray) -> list[np.ndarray]:
    shapes = arch.param_shapes()
    out = []
    offset = 0
    for s in shapes:
        size = int(np.prod(s))
        out.append(flat[offset:offset + size].reshape(s))
        offset += size
    return out


def build_mlp(tape: Tape, params: list, x: Var, arch: MlpArchitecture) -> Var:
    """Forward pass producing a (1, n) output row.

    ``params`` alternates weight and bias entries per layer, each either
    a Var or a plain array (held constant). ``x`` is (input_dim, n).
    """
    act = tape.relu if arch.activation == "relu" else tape.tanh
    h = x
    n_layers = len(arch.layer_dims())
    for layer in range(n_layers):
        W = params[2 * layer]
        b = params[2 * layer + 1]
        W = W if isinstance(W, Var) else tape.constant(W)
        b = b if isinstance(b, Var) else tape.constant(b)
        h = tape.matmul(W, h) + b
        if layer < n_layers - 1:
            h = act(h)
    return h


def forward_np(theta: np.ndarray, arch: MlpArchitecture, X: np.ndarray) -> np.ndarray:
    """Plain numpy forward pass: rows of X are inputs, returns (n,)."""
    parts = _split_params(arch, np.asarray(theta, dtype=np.float64))
    h = np.asarray(X, dtype=np.float64).T
    n_layers = len(arch.layer_dims())
    for layer in range(n_layers):
        h = parts[2 * layer] @ h + parts[2 * layer + 1]
        if layer < n_layers - 1:
            h = np.maximum(h, 0.0) if arch.activation == "relu" else np.tanh(h)
    return h[0]


def _elbo_graph(posterior: VariationalPosterior, cfg: LikelihoodConfig,
                arch: MlpArchitecture, X_cols: np.ndarray, y_row: np.ndarray,
                n_total: int, mc_samples: int, rng: np.random.Generator):
    """Build the ELBO tape; returns (tape, elbo var, loglik var, kl var, leaves)."""
    shapes = arch.param_shapes()
    mu_parts = _split_params(arch, posterior.mu)
    rho_parts = _split_params(arch, posterior.rho)

    tape = Tape()
    mu_vars = [tape.leaf(m) for m in mu_parts]
    rho_vars = [tape.leaf(r) for r in rho_parts]
    sigma_vars = [softplus(r) for r in rho_vars]

    # KL(q || prior) in closed form for diagonal Gaussians.
    sp = cfg.prior_sigma
    kl = None
    for mu_v, sigma_v in zip(mu_vars, sigma_vars):
        sigma_safe = sigma_v + _SIGMA_FLOOR
        term = (
            tape.constant(np.log(sp))
            - tape.log(sigma_safe)
            + (sigma_v * sigma_v + mu_v * mu_v) * (0.5 / sp**2)
            - 0.5
        )
        t = tape.sum(term)
        kl = t if kl is None else kl + t
    assert kl is not None

    # Reparameterized Monte-Carlo log-likelihood, scaled to the full
    # dataset when fed a minibatch.
    n_batch = X_cols.shape[1]
    scale = n_total / n_batch
    const_term = -0.5 * n_total * np.log(2.0 * np.pi * cfg.obs_sigma**2)
    loglik = None
    for _ in range(mc_samples):
        theta_parts = []
        for mu_v, sigma_v, shape in zip(mu_vars, sigma_vars, shapes):
            eps = rng.standard_normal(shape)
            theta_parts.append(mu_v + sigma_v * eps)
        pred = build_mlp(tape, theta_parts, tape.constant(X_cols), arch)
        diff = tape.constant(y_row) - pred
        sse = tape.sum(diff * diff)
        ll = sse * (-scale / (2.0 * cfg.obs_sigma**2)) + const_term
        loglik = ll if loglik is None else loglik + ll
    loglik = loglik * (1.0 / mc_samples)

    value = loglik + kl * (-cfg.kl_weight)
    return tape, value, loglik, kl, mu_vars, rho_vars


def elbo(posterior: VariationalPosterior, cfg: LikelihoodConfig, data: Dataset,
         mc_samples: int, rng, arch: MlpArchitecture) -> ElboResult:
    """ELBO value and gradients with respect to (mu, rho)."""
    if len(data) == 0:
        raise ValueError("elbo needs a nonempty dataset")
    if mc_samples < 1:
        raise ValueError("mc_samples must be at least 1")
    rng = as_generator(rng)
    X_cols = data.X.T
    y_row = data.y.reshape(1, -1)
    tape, value, loglik, kl, mu_vars, rho_vars = _elbo_graph(
        posterior, cfg, arch, X_cols, y_row, len(data), mc_samples, rng
    )
    grads = tape.backward(value)
    n_tensors = len(mu_vars)
    grad_mu = np.concatenate([g.ravel() for g in grads[:n_tensors]])
    grad_rho = np.concatenate([g.ravel() for g in grads[n_tensors:2 * n_tensors]])
    return ElboResult(
        value=float(value.value),
        log_lik=float(loglik.value),
        kl=float(kl.value),
        grad_mu=grad_mu,
        grad_rho=grad_rho,
    )


def thompson_sample(posterior: VariationalPosterior, rng) -> np.ndarray:
    """One weight draw theta = mu + sigma * eps."""
    rng = as_generator(rng)
    eps = rng.standard_normal(posterior.mu.size)
    return posterior.mu + posterior.sigma * eps


def predict(theta: np.ndarray, arch: MlpArchitecture, x_relaxed: np.ndarray) -> float:
    """Network output at one (possibly relaxed) input vector."""
    x_relaxed = np.asarray(x_relaxed, dtype=np.float64)
    if x_relaxed.shape != (arch.input_dim,):
        raise ValueError(f"expected input of shape ({arch.input_dim},), got {x_relaxed.shape}")
    return float(forward_np(theta, arch, x_relaxed.reshape(1, -1))[0])


def predict_with_grad(theta: np.ndarray, arch: MlpArchitecture,
                      x_relaxed: np.ndarray) -> tuple[float, np.ndarray]:
    """Output and its gradient with respect to the input vector."""
    x_relaxed = np.asarray(x_relaxed, dtype=np.float64)
    if x_relaxed.shape != (arch.input_dim,):
        raise ValueError(f"expected input of shape ({arch.input_dim},), got {x_relaxed.shape}")
    parts = _split_params(arch, np.asarray(theta, dtype=np.float64))
    tape = Tape()
    x = tape.leaf(x_relaxed.reshape(-1, 1))
    out = tape.sum(build_mlp(tape, parts, x, arch))
    (g,) = tape.backward(out)
    return float(out.value), g.ravel()


class BNNRegressor(BaseEstimator, RegressorMixin):
    """Variational Bayesian MLP regressor on one-hot inputs.

    Targets are standardized internally (predictions come back in raw
    units); ``obs_sigma`` and the posterior therefore live in
    standardized-target space. ``kl_weight="auto"`` scales the KL term
    by 1/n, the per-datum convention.

    Parameters mirror the usual estimator contract: everything passed to
    ``__init__`` is stored verbatim and learned state carries a trailing
    underscore.
    """

    def __init__(self, hidden_sizes=(100, 100, 100), activation="relu",
                 obs_sigma=0.1, prior_sigma=1.0, kl_weight="auto",
                 epochs=200, lr=0.01, batch_size=None, mc_samples=1,
                 warm_start=False, standardize=True, mu_init_scale=0.05,
                 sigma_init=0.01, random_state=None):
        self.hidden_sizes = hidden_sizes
        self.activation = activation
        self.obs_sigma = obs_sigma
        self.prior_sigma = prior_sigma
        self.kl_weight = kl_weight
        self.epochs = epochs
        self.lr = lr
        self.batch_size = batch_size
        self.mc_samples = mc_samples
        self.warm_start = warm_start
        self.standardize = standardize
        self.mu_init_scale = mu_init_scale
        self.sigma_init = sigma_init
        self.random_state = random_state

    # -- fitting ---------------------------------------------------------

    def fit(self, X, y, rng=None):
        """Stochastic gradient ascent on the ELBO.

        ``rng`` overrides ``random_state`` when the caller manages its
        own seed ladder (the outer optimization loop does).
        """
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64).ravel()
        if X.ndim != 2 or X.shape[0] != y.size or y.size == 0:
            raise ValueError("fit needs a nonempty 2d X with matching y")
        rng = as_generator(rng if rng is not None else self.random_state)

        arch = MlpArchitecture(X.shape[1], tuple(self.hidden_sizes), self.activation)
        if self.standardize:
            self.y_mean_ = float(y.mean())
            std = float(y.std())
            self.y_std_ = std if std > 1e-12 else 1.0
        else:
            self.y_mean_, self.y_std_ = 0.0, 1.0
        y_std = (y - self.y_mean_) / self.y_std_

        warm = (
            self.warm_start
            and getattr(self, "posterior_", None) is not None
            and getattr(self, "arch_", None) == arch
        )
        if not warm:
            self.posterior_ = init_posterior(arch, rng, self.mu_init_scale, self.sigma_init)
        self.arch_ = arch

        kl_w = 1.0 / y.size if self.kl_weight == "auto" else float(self.kl_weight)
        cfg = LikelihoodConfig(self.obs_sigma, kl_w, self.prior_sigma)
        self.cfg_ = cfg

        n = y.size
        batch = n if self.batch_size is None else min(int(self.batch_size), n)
        adam = AdamState(2 * arch.n_params, lr=self.lr)
        flat = np.concatenate([self.posterior_.mu, self.posterior_.rho])
        P = arch.n_params

        final = None
        for epoch in range(self.epochs):
            order = rng.permutation(n) if batch < n else np.arange(n)
            for start in range(0, n, batch):
                idx = order[start:start + batch]
                posterior = VariationalPosterior(flat[:P], flat[P:])
                tape, value, loglik, kl, mu_vars, rho_vars = _elbo_graph(
                    posterior, cfg, arch, X[idx].T, y_std[idx].reshape(1, -1),
                    n, self.mc_samples, rng,
                )
                if not np.isfinite(value.value):
                    raise NumericError(
                        f"non-finite ELBO at epoch {epoch}, batch {start // batch}"
                    )
                grads = tape.backward(value)
                grad_flat = np.concatenate([g.ravel() for g in grads])
                adam.step(flat, grad_flat, maximize=True)
                final = float(value.value)

        self.posterior_ = VariationalPosterior(flat[:P].copy(), flat[P:].copy())
        self.final_elbo_ = final
        self.n_fits_ = getattr(self, "n_fits_", 0) + 1
        return self

    def _check_fitted(self):
        if getattr(self, "posterior_", None) is None:
            raise NotFittedError("this BNNRegressor is not fitted yet")

    # -- prediction --------------------------------------------------------

    def predict(self, X) -> np.ndarray:
        """Mean-weight predictions in raw target units."""
        self._check_fitted()
        X = np.asarray(X, dtype=np.float64)
        out = forward_np(self.posterior_.mu, self.arch_, X)
        return out * self.y_std_ + self.y_mean_

    def predict_sample(self, X, theta: np.ndarray) -> np.ndarray:
        """Predictions under one weight draw, in raw target units."""
        self._check_fitted()
        out = forward_np(theta, self.arch_, np.asarray(X, dtype=np.float64))
        return out * self.y_std_ + self.y_mean_

    def sample_weights(self, rng=None) -> np.ndarray:
        """Thompson draw from the posterior."""
        self._check_fitted()
        return thompson_sample(self.posterior_, rng if rng is not None else self.random_state)

    def to_standardized(self, y_raw: float) -> float:
        self._check_fitted()
        return (float(y_raw) - self.y_mean_) / self.y_std_


def save_checkpoint(model: BNNRegressor, path) -> None:
    """Versioned JSON checkpoint of (architecture, posterior, scales)."""
    model._check_fitted()
    payload = {
        "schema": _CHECKPOINT_SCHEMA,
        "input_dim": model.arch_.input_dim,
        "hidden_sizes": list(model.arch_.hidden_sizes),
        "activation": model.arch_.activation,
        "mu": model.posterior_.mu.tolist(),
        "rho": model.posterior_.rho.tolist(),
        "obs_sigma": model.cfg_.obs_sigma,
        "kl_weight": model.cfg_.kl_weight,
        "prior_sigma": model.cfg_.prior_sigma,
        "y_mean": model.y_mean_,
        "y_std": model.y_std_,
        "params": {k: v for k, v in model.get_params().items()
                   if isinstance(v, (int, float, str, bool, type(None), tuple, list))},
    }
    Path(path).write_text(json.dumps(payload))


def load_checkpoint(path) -> BNNRegressor:
    payload = json.loads(Path(path).read_text())
    if payload.get("schema") != _CHECKPOINT_SCHEMA:
        raise ValueError(
            f"checkpoint schema mismatch: expected {_CHECKPOINT_SCHEMA}, "
            f"got {payload.get('schema')!r}"
        )
    params = dict(payload.get("params", {}))
    params["hidden_sizes"] = tuple(payload["hidden_sizes"])
    params["activation"] = payload["activation"]
    model = BNNRegressor(**{k: v for k, v in params.items()
                            if k in BNNRegressor().get_params()})
    model.arch_ = MlpArchitecture(
        payload["input_dim"], tuple(payload["hidden_sizes"]), payload["activation"]
    )
    model.posterior_ = VariationalPosterior(
        np.asarray(payload["mu"]), np.asarray(payload["rho"])
    )
    model.cfg_ = LikelihoodConfig(
        payload["obs_sigma"], payload["kl_weight"], payload["prior_sigma"]
    )
    model.y_mean_ = payload["y_mean"]
    model.y_std_ = payload["y_std"]
    model.final_elbo_ = None
    return model
