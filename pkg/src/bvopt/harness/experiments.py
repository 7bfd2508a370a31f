"""Experiment driver: repeated runs, persistence, and summaries.

Runs are independent given their derived seeds, so they can execute in
a process pool without changing any result. The summary is always
computed from the files on disk (never from in-memory state), which
makes "recompute the summary from the traces" a byte-identical no-op.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..baselines import RandomSearchOptimizer, SimulatedAnnealingOptimizer
from ..benchmarks import (
    ExternalObjective,
    contamination_objective,
    ising_objective,
    load_constants,
    make_contamination,
    make_ising,
    make_linear_objective,
    make_pest,
    pest_objective,
)
from ..optimizer import BVOptimizer
from ..space import SearchSpace
from ..surrogate import BNNRegressor
from .traces_io import read_timings, read_trace, timings_path, write_timings, write_trace

SUMMARY_SCHEMA = "bvopt-summary-v1"
TIMING_SUMMARY_SCHEMA = "bvopt-timing-summary-v1"

_PROBLEMS = ("ising", "contamination", "pest", "external", "synthetic")
_METHODS = ("bvo", "rs", "sa")

__all__ = ["ExperimentSpec", "RunSummary", "run_experiment", "summarize", "make_problem"]


@dataclass
class ExperimentSpec:
    """Everything one experiment needs, flags-over-config style."""

    problem: str
    method: str
    out_dir: str
    reg_lambda: float = 0.0
    runs: int = 10
    n_init: int = 20
    n_iter: int = 150
    seed: int = 0
    problem_seed: int = 0
    jobs: int = 1
    method_params: dict = field(default_factory=dict)
    surrogate_params: dict = field(default_factory=dict)
    external_cmd: list | None = None
    constants_path: str | None = None

    def __post_init__(self):
        if self.problem not in _PROBLEMS:
            raise ValueError(f"problem must be one of {_PROBLEMS}")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.runs < 1 or self.n_init < 1 or self.n_iter < 0 or self.jobs < 1:
            raise ValueError("runs, n_init, jobs must be >= 1 and n_iter >= 0")
        if self.problem == "external" and not self.external_cmd:
            raise ValueError("external problem needs external_cmd")

    @property
    def budget(self) -> int:
        return self.n_init + self.n_iter

    def to_dict(self) -> dict:
        return {
            "problem": self.problem, "method": self.method, "out_dir": str(self.out_dir),
            "reg_lambda": self.reg_lambda, "runs": self.runs, "n_init": self.n_init,
            "n_iter": self.n_iter, "seed": self.seed, "problem_seed": self.problem_seed,
            "jobs": self.jobs, "method_params": self.method_params,
            "surrogate_params": self.surrogate_params, "external_cmd": self.external_cmd,
            "constants_path": self.constants_path,
        }


@dataclass
class RunSummary:
    problem: str
    method: str
    reg_lambda: float
    finals: list[float]
    failed: int
    wall_s: list[float]

    @property
    def runs(self) -> int:
        return len(self.finals)

    @property
    def mean(self) -> float:
        return float(np.mean(self.finals))

    @property
    def std(self) -> float:
        """Population convention (divide by n)."""
        return float(np.std(self.finals))

    def to_csv_text(self) -> str:
        """Seed-determined fields only, so reruns reproduce it exactly."""
        lines = [
            f"# schema: {SUMMARY_SCHEMA}",
            "# std: population (divide by n)",
            "problem,method,reg_lambda,runs,failed,mean_final,std_final,"
            "min_final,max_final",
        ]
        lines.append(
            f"{self.problem},{self.method},{self.reg_lambda!r},{self.runs},{self.failed},"
            f"{self.mean!r},{self.std!r},{min(self.finals)!r},{max(self.finals)!r}"
        )
        return "\n".join(lines) + "\n"

    def to_timing_csv_text(self) -> str:
        lines = [
            f"# schema: {TIMING_SUMMARY_SCHEMA}",
            "problem,method,runs,mean_wall_s,min_wall_s,max_wall_s",
        ]
        wall = self.wall_s or [0.0]
        lines.append(
            f"{self.problem},{self.method},{self.runs},"
            f"{float(np.mean(wall))!r},{float(np.min(wall))!r},{float(np.max(wall))!r}"
        )
        return "\n".join(lines) + "\n"


def make_problem(spec: ExperimentSpec):
    """Objective and space for a spec; the instance is seed-frozen."""
    constants = load_constants(spec.constants_path) if spec.constants_path else None
    if spec.problem == "ising":
        inst = make_ising(spec.problem_seed, spec.reg_lambda, constants=constants)
        return (lambda x: ising_objective(inst, x)), inst.space
    if spec.problem == "contamination":
        inst = make_contamination(spec.problem_seed, spec.reg_lambda, constants=constants)
        return (lambda x: contamination_objective(inst, x)), inst.space
    if spec.problem == "pest":
        inst = make_pest(spec.problem_seed, constants=constants)
        return (lambda x: pest_objective(inst, x)), inst.space
    if spec.problem == "synthetic":
        space = SearchSpace.categorical(8, 3)
        objective, _, _ = make_linear_objective(space, rng=spec.problem_seed)
        return objective, space
    objective = ExternalObjective(spec.external_cmd)
    dims = spec.method_params.get("external_dims", 8)
    cards = spec.method_params.get("external_cardinality", 2)
    return objective, SearchSpace.categorical(dims, cards)


def _derived_seed(master: int, run_idx: int) -> int:
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=(int(run_idx),))
    return int(ss.generate_state(1, dtype=np.uint64)[0] % (2**63))


def _build_method(spec: ExperimentSpec, run_seed: int):
    params = dict(spec.method_params)
    params.pop("external_dims", None)
    params.pop("external_cardinality", None)
    if spec.method == "bvo":
        surrogate = BNNRegressor(warm_start=True, **spec.surrogate_params)
        return BVOptimizer(
            n_init=spec.n_init, n_iter=spec.n_iter, surrogate=surrogate,
            random_state=run_seed, **params,
        )
    if spec.method == "rs":
        return RandomSearchOptimizer(budget=spec.budget, random_state=run_seed, **params)
    return SimulatedAnnealingOptimizer(budget=spec.budget, random_state=run_seed, **params)


def _trace_name(spec: ExperimentSpec, run_idx: int) -> str:
    return f"{spec.problem}_{spec.method}_run{run_idx:03d}.trace.jsonl"


def _run_one(spec_dict: dict, run_idx: int) -> dict:
    """One seeded run; module-level so a process pool can pickle it."""
    spec = ExperimentSpec(**spec_dict)
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_seed = _derived_seed(spec.seed, run_idx)
    try:
        objective, space = make_problem(spec)
        method = _build_method(spec, run_seed)
        t0 = time.perf_counter()
        trace = method.minimize(objective, space)
        wall = time.perf_counter() - t0
        trace.problem = spec.problem
        path = out_dir / _trace_name(spec, run_idx)
        write_trace(path, trace, problem=spec.problem,
                    extra={"reg_lambda": spec.reg_lambda, "run": run_idx,
                           "n_init": spec.n_init, "n_iter": spec.n_iter})
        write_timings(timings_path(path), trace, wall_s=wall)
        return {"run": run_idx, "status": "ok", "path": str(path)}
    except Exception as err:  # a failed run must not sink the others
        return {"run": run_idx, "status": "failed", "error": f"{type(err).__name__}: {err}"}


def summarize(trace_paths, expected_runs: int | None = None) -> RunSummary:
    """Summary statistics recomputed purely from persisted files."""
    trace_paths = sorted(Path(p) for p in trace_paths)
    if not trace_paths:
        raise ValueError("no trace files to summarize")
    finals, walls = [], []
    problem = method = ""
    reg_lambda = 0.0
    for p in trace_paths:
        header, records = read_trace(p)
        problem = header.get("problem", problem)
        method = header.get("method", method)
        reg_lambda = header.get("reg_lambda", reg_lambda)
        finals.append(float(records[-1]["best"]))
        tp = timings_path(p)
        if tp.exists():
            walls.append(float(read_timings(tp)[0].get("wall_s", 0.0)))
    failed = 0 if expected_runs is None else max(0, expected_runs - len(trace_paths))
    return RunSummary(
        problem=problem, method=method, reg_lambda=reg_lambda,
        finals=finals, failed=failed, wall_s=walls,
    )


def run_experiment(spec: ExperimentSpec) -> RunSummary:
    """Execute all runs (optionally in parallel), persist, summarize."""
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec_dict = spec.to_dict()
    if spec.jobs > 1 and spec.runs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(_run_one, [spec_dict] * spec.runs, range(spec.runs)))
    else:
        results = [_run_one(spec_dict, i) for i in range(spec.runs)]

    ok_paths = [r["path"] for r in results if r["status"] == "ok"]
    for r in results:
        if r["status"] == "failed":
            import logging

            logging.getLogger(__name__).error("run %d failed: %s", r["run"], r["error"])
    if not ok_paths:
        raise RuntimeError(f"all {spec.runs} runs failed; first error: {results[0].get('error')}")
    summary = summarize(ok_paths, expected_runs=spec.runs)
    (out_dir / "summary.csv").write_text(summary.to_csv_text())
    (out_dir / "timing_summary.csv").write_text(summary.to_timing_csv_text())
    return summary
