"""Variant sweep for the contamination acceptance configuration."""

import time

import numpy as np

from bvopt import BVOptimizer, BNNRegressor
from bvopt.benchmarks import contamination_objective, make_contamination

inst = make_contamination(0, reg_lambda=1e-4)
objective = lambda x: contamination_objective(inst, x)
space = inst.space

variants = {
    "B_obs0.05_ei": dict(acq="ei", obs=0.05, epochs=60, anneal=False, steps=40),
    "C_sr_anneal": dict(acq="sr", obs=0.1, epochs=60, anneal=True, steps=40),
    "E_ei_anneal": dict(acq="ei", obs=0.1, epochs=60, anneal=True, steps=40),
    "F_ei_obs05_anneal": dict(acq="ei", obs=0.05, epochs=80, anneal=True, steps=40),
}
for name, v in variants.items():
    finals = []
    t0 = time.perf_counter()
    for seed in (1, 3, 4):
        bvo = BVOptimizer(
            n_init=20, n_iter=250, inner_steps=v["steps"], inner_lr=0.1,
            proposal_batch=48, restarts=6, mc_y_samples=8,
            acquisition=v["acq"],
            anneal_temperature=v["anneal"],
            surrogate=BNNRegressor(hidden_sizes=(64, 64), epochs=v["epochs"],
                                   obs_sigma=v["obs"], warm_start=True),
            random_state=seed,
        ).minimize(objective, space)
        finals.append(bvo.final_best)
    print(f"{name}: {[round(f, 3) for f in finals]} mean {np.mean(finals):.3f}"
          f" ({time.perf_counter() - t0:.0f}s)", flush=True)
