"""Variant sweep for the pest acceptance configuration."""

import time

import numpy as np

from bvopt import BVOptimizer, BNNRegressor, RandomSearchOptimizer, SimulatedAnnealingOptimizer
from bvopt.benchmarks import make_pest, pest_objective

inst = make_pest(0)
objective = lambda x: pest_objective(inst, x)
space = inst.space
budget = 320

for seed in (0, 1, 2):
    rs = RandomSearchOptimizer(budget=budget, random_state=seed).minimize(objective, space)
    sa = SimulatedAnnealingOptimizer(budget=budget, random_state=seed).minimize(objective, space)
    print(f"seed {seed}: SA {sa.final_best:.4f}  RS {rs.final_best:.4f}", flush=True)

variants = {
    "sr_anneal": dict(acq="sr", anneal=True, steps=40, epochs=60),
    "ei": dict(acq="ei", anneal=False, steps=40, epochs=60),
}
for name, v in variants.items():
    finals = []
    t0 = time.perf_counter()
    for seed in (0, 1, 2):
        bvo = BVOptimizer(
            n_init=20, n_iter=300, inner_steps=v["steps"], inner_lr=0.1,
            proposal_batch=48, restarts=6, mc_y_samples=8,
            acquisition=v["acq"], anneal_temperature=v["anneal"],
            surrogate=BNNRegressor(hidden_sizes=(64, 64), epochs=v["epochs"],
                                   warm_start=True),
            random_state=seed,
        ).minimize(objective, space)
        finals.append(bvo.final_best)
        print(f"  {name} seed {seed}: {bvo.final_best:.4f}", flush=True)
    print(f"{name}: mean {np.mean(finals):.4f} ({time.perf_counter() - t0:.0f}s)", flush=True)
