"""The full variational optimization loop over discrete spaces.

Each round fits the variational surrogate on everything evaluated so
far, draws one weight sample, and ascends the proposal logits along
pathwise acquisition gradients through the concrete relaxation. The
best relaxed candidate from a final sampled batch (and optionally the
proposal mode) is discretized, evaluated, and appended.

Restarts run as independent column blocks of one batched graph, so a
whole ascent step is a handful of matrix ops regardless of the restart
count.
"""

from __future__ import annotations

import logging
import time

import numpy as np
from sklearn.base import BaseEstimator, clone

from .acquisition import AcquisitionConfig, acq_graph, expected_acq_over_batch
from .autodiff import Tape
from .optim import AdamState
from .relaxation import concrete_graph, sample_gumbel
from .space import SearchSpace
from .surrogate import BNNRegressor, MlpArchitecture, _split_params, build_mlp
from .trace import ObjectiveError, OptimizationTrace
from .validation import as_generator, spawn_generator

__all__ = ["BVOptimizer", "initial_design", "inner_optimize"]

logger = logging.getLogger(__name__)


def initial_design(space: SearchSpace, n: int, rng) -> list[np.ndarray]:
    """n uniform points, de-duplicated by resampling up to 100 n attempts."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = as_generator(rng)
    points: list[np.ndarray] = []
    seen: set[tuple[int, ...]] = set()
    attempts = 0
    while len(points) < n and attempts < 100 * n:
        x = space.random_point(rng)
        attempts += 1
        key = tuple(int(v) for v in x)
        if key not in seen:
            seen.add(key)
            points.append(x)
    while len(points) < n:
        points.append(space.random_point(rng))
    return points


def _discretize_columns(space: SearchSpace, blocks: list[np.ndarray]) -> np.ndarray:
    """Per-dimension argmax over (k_i, n) blocks, giving (n, dims) ints."""
    return np.stack([b.argmax(axis=0) for b in blocks], axis=1)


def inner_optimize(theta: np.ndarray, space: SearchSpace, *, arch: MlpArchitecture,
                   acq_cfg: AcquisitionConfig, obs_sigma: float, inner_steps: int = 100,
                   inner_lr: float = 0.1, proposal_batch: int = 128, restarts: int = 16,
                   temperature: float = 0.5, anneal_temperature: bool = False,
                   final_temperature: float = 0.1, inner_optimizer: str = "adam",
                   rng=None, exclude: frozenset = frozenset(),
                   score_proposal_mode: bool = True) -> tuple[np.ndarray, float]:
    """Ascend proposal logits, then pick the best discretized candidate.

    Candidates already in ``exclude`` are skipped unless every candidate
    is excluded, in which case duplicates are allowed so the loop stays
    total. Restarts whose acquisition goes non-finite are dropped.
    """
    if inner_steps < 0:
        raise ValueError("inner_steps must be nonnegative")
    if proposal_batch < 1 or restarts < 1:
        raise ValueError("proposal_batch and restarts must be at least 1")
    if inner_lr <= 0:
        raise ValueError("inner_lr must be positive")
    if inner_optimizer not in ("sgd", "adam"):
        raise ValueError("inner_optimizer must be 'sgd' or 'adam'")
    rng = as_generator(rng)

    R, B = restarts, proposal_batch
    n_cols = R * B
    cards = space.cardinalities
    logits = [rng.normal(0.0, 1.0, size=(k, R)) for k in cards]
    expand = np.kron(np.eye(R), np.ones((1, B)))
    theta_parts = _split_params(arch, theta)
    alive = np.ones(R, dtype=bool)
    adam = (
        [AdamState(k * R, lr=inner_lr) for k in cards]
        if inner_optimizer == "adam" else None
    )

    def temperature_at(step: int) -> float:
        if not anneal_temperature or inner_steps <= 1:
            return temperature
        frac = step / (inner_steps - 1)
        return temperature + (final_temperature - temperature) * frac

    for step in range(inner_steps):
        lam = temperature_at(step)
        tape = Tape()
        logit_vars = [tape.leaf(l) for l in logits]
        expand_const = tape.constant(expand)
        blocks = []
        for d, k in enumerate(cards):
            wide = tape.matmul(logit_vars[d], expand_const)
            blocks.append(concrete_graph(tape, wide, sample_gumbel((k, n_cols), rng), lam))
        x_full = tape.concat_rows(blocks)
        pred = build_mlp(tape, theta_parts, x_full, arch)
        eps = None
        if acq_cfg.kind != "sr":
            eps = rng.standard_normal((acq_cfg.mc_y_samples, n_cols))
        per_sample = acq_graph(tape, acq_cfg, pred, obs_sigma, eps)
        col_ok = np.isfinite(per_sample.value.ravel())
        if not col_ok.all():
            bad = np.unique(np.nonzero(~col_ok)[0] // B)
            newly_dead = [r for r in bad if alive[r]]
            if newly_dead:
                alive[newly_dead] = False
                logger.warning("dropping restarts %s: non-finite acquisition", newly_dead)
            if not alive.any():
                break
        total = tape.sum(per_sample) * (1.0 / B)
        grads = tape.backward(total)
        for d in range(space.dims):
            g = grads[d]
            g[:, ~alive] = 0.0
            g = np.nan_to_num(g, nan=0.0, posinf=0.0, neginf=0.0)
            if adam is not None:
                flat = logits[d].reshape(-1)
                adam[d].step(flat, g.reshape(-1), maximize=True)
            else:
                logits[d] += inner_lr * g

    # Final relaxed batch plus (optionally) each restart's proposal mode.
    lam = temperature_at(max(inner_steps - 1, 0))
    blocks = []
    for d, k in enumerate(cards):
        g = sample_gumbel((k, n_cols), rng)
        z = (logits[d] @ expand + g) / lam
        z -= z.max(axis=0, keepdims=True)
        e = np.exp(z)
        blocks.append(e / e.sum(axis=0, keepdims=True))
    hard = _discretize_columns(space, blocks)
    samples = np.zeros((n_cols, space.one_hot_dim))
    for d, b in enumerate(blocks):
        samples[:, space.offsets[d]:space.offsets[d] + cards[d]] = b.T

    col_alive = np.repeat(alive, B)
    if score_proposal_mode:
        modes = np.stack([l.argmax(axis=0) for l in logits], axis=1)
        samples = np.vstack([samples, space.encode_batch(modes)])
        hard = np.vstack([hard, modes])
        col_alive = np.concatenate([col_alive, alive])

    values, _ = expected_acq_over_batch(samples, theta, arch, acq_cfg, obs_sigma, rng)
    values = np.where(col_alive & np.isfinite(values), values, -np.inf)
    if not np.isfinite(values).any():
        logger.error("all inner-loop candidates invalid; falling back to a random point")
        return space.random_point(rng), float("nan")

    order = np.argsort(-values)
    for idx in order:
        if not np.isfinite(values[idx]):
            break
        point = hard[idx]
        if tuple(int(v) for v in point) not in exclude:
            return point, float(values[idx])
    best = order[0]
    return hard[best], float(values[best])


class BVOptimizer(BaseEstimator):
    """Surrogate-guided minimization over binary/categorical spaces.

    The estimator follows scikit-learn conventions: constructor args are
    stored verbatim and ``get_params``/``set_params`` work as usual; the
    entry point is :meth:`minimize`, which returns the full trace.

    Parameters
    ----------
    n_init : random points evaluated before the surrogate loop starts.
    n_iter : surrogate-guided evaluations after the initial design.
    inner_steps : proposal ascent steps per round (0 degenerates to
        screening random proposal samples).
    inner_lr : proposal step size.
    proposal_batch : relaxed samples per restart per step.
    restarts : independent proposal initializations per round.
    temperature : concrete relaxation temperature; optionally annealed
        linearly to ``final_temperature`` over the inner loop.
    acquisition : "ei", "pi", or "sr".
    mc_y_samples : outcome draws per acquisition evaluation.
    inner_optimizer : "adam" (default) or plain "sgd" ascent.
    surrogate : a BNNRegressor prototype; cloned per run. None uses a
        warm-started default.
    dedupe : skip candidates already evaluated when possible.
    score_proposal_mode : also score each restart's proposal mode as a
        candidate alongside the sampled batch.
    random_state : master seed for the whole run; every internal stream
        derives from it deterministically.
    """

    def __init__(self, n_init=20, n_iter=150, inner_steps=100, inner_lr=0.1,
                 proposal_batch=128, restarts=16, temperature=0.5,
                 anneal_temperature=False, final_temperature=0.1,
                 acquisition="ei", mc_y_samples=16, pi_sharpness=10.0,
                 inner_optimizer="adam", surrogate=None, dedupe=True,
                 score_proposal_mode=True, random_state=None):
        self.n_init = n_init
        self.n_iter = n_iter
        self.inner_steps = inner_steps
        self.inner_lr = inner_lr
        self.proposal_batch = proposal_batch
        self.restarts = restarts
        self.temperature = temperature
        self.anneal_temperature = anneal_temperature
        self.final_temperature = final_temperature
        self.acquisition = acquisition
        self.mc_y_samples = mc_y_samples
        self.pi_sharpness = pi_sharpness
        self.inner_optimizer = inner_optimizer
        self.surrogate = surrogate
        self.dedupe = dedupe
        self.score_proposal_mode = score_proposal_mode
        self.random_state = random_state

    def _config_snapshot(self) -> dict:
        params = self.get_params(deep=False)
        surrogate = params.pop("surrogate")
        if surrogate is not None:
            params["surrogate"] = {
                "class": type(surrogate).__name__,
                "params": {k: (list(v) if isinstance(v, tuple) else v)
                           for k, v in surrogate.get_params().items()},
            }
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}

    def minimize(self, objective, space: SearchSpace) -> OptimizationTrace:
        """Run the full loop: initial design then n_iter guided rounds."""
        if self.n_init < 1 or self.n_iter < 0:
            raise ValueError("n_init must be >= 1 and n_iter >= 0")
        master = (
            int(self.random_state)
            if self.random_state is not None
            else int(np.random.SeedSequence().entropy % (2**63))
        )
        model: BNNRegressor = (
            clone(self.surrogate) if self.surrogate is not None
            else BNNRegressor(warm_start=True)
        )

        trace = OptimizationTrace(config=self._config_snapshot(), seed=master, method="bvo")
        evaluated: set[tuple[int, ...]] = set()

        X_rows: list[np.ndarray] = []
        ys: list[float] = []
        for x in initial_design(space, self.n_init, spawn_generator(master, 0)):
            y = _evaluate(objective, x)
            trace.append(x, y)
            evaluated.add(tuple(int(v) for v in x))
            X_rows.append(space.encode(x))
            ys.append(y)

        for t in range(self.n_iter):
            t0 = time.perf_counter()
            model.fit(np.asarray(X_rows), np.asarray(ys), rng=spawn_generator(master, 1, t))
            t_fit = (time.perf_counter() - t0) * 1e3

            theta = model.sample_weights(spawn_generator(master, 2, t))
            incumbent = model.to_standardized(min(ys))
            acq_cfg = AcquisitionConfig(
                kind=self.acquisition,
                incumbent=incumbent,
                mc_y_samples=self.mc_y_samples,
                pi_sharpness=self.pi_sharpness,
            )
            t1 = time.perf_counter()
            x_m, acq = inner_optimize(
                theta, space,
                arch=model.arch_,
                acq_cfg=acq_cfg,
                obs_sigma=model.cfg_.obs_sigma,
                inner_steps=self.inner_steps,
                inner_lr=self.inner_lr,
                proposal_batch=self.proposal_batch,
                restarts=self.restarts,
                temperature=self.temperature,
                anneal_temperature=self.anneal_temperature,
                final_temperature=self.final_temperature,
                inner_optimizer=self.inner_optimizer,
                rng=spawn_generator(master, 3, t),
                exclude=frozenset(evaluated) if self.dedupe else frozenset(),
                score_proposal_mode=self.score_proposal_mode,
            )
            t_inner = (time.perf_counter() - t1) * 1e3

            y = _evaluate(objective, x_m)
            trace.append(
                x_m, y,
                t_fit_ms=t_fit,
                t_inner_ms=t_inner,
                elbo_final=model.final_elbo_,
                acq_at_selection=acq if np.isfinite(acq) else None,
            )
            evaluated.add(tuple(int(v) for v in x_m))
            X_rows.append(space.encode(x_m))
            ys.append(y)

        trace.validate()
        return trace


def _evaluate(objective, x) -> float:
    y = float(objective(np.asarray(x, dtype=np.int64)))
    if not np.isfinite(y):
        raise ObjectiveError(f"objective returned non-finite value {y} at x={list(x)}", x=x)
    return y
