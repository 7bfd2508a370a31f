"""Command-line entry points: run experiments, time scaling, aggregate curves.

Precedence is flags over config file over defaults. Failures print one
machine-readable JSON object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    ExperimentSpec,
    aggregate,
    reference_records,
    run_experiment,
    scaling_study,
    write_curves_csv,
    write_scaling_csv,
)

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvopt",
        description="Black-box optimization experiments over discrete spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute repeated optimization runs")
    run.add_argument("--problem", choices=["ising", "contamination", "pest", "external",
                                           "synthetic"])
    run.add_argument("--method", choices=["bvo", "rs", "sa"])
    run.add_argument("--lambda", dest="reg_lambda", type=float, default=None,
                     help="L1 regularization weight where the problem uses one")
    run.add_argument("--runs", type=int, default=None)
    run.add_argument("--iters", dest="n_iter", type=int, default=None)
    run.add_argument("--init", dest="n_init", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--problem-seed", type=int, default=None)
    run.add_argument("--config", type=str, default=None, help="JSON file with spec fields")
    run.add_argument("--out", dest="out_dir", type=str, default=None)
    run.add_argument("--jobs", type=int, default=None)

    scale = sub.add_parser("scale", help="timing study over dimension or data size")
    scale.add_argument("--axis", choices=["dimension", "data_size"], required=True)
    scale.add_argument("--sizes", type=int, nargs="+", required=True)
    scale.add_argument("--mode", choices=["fixed_batches", "fixed_epochs"],
                       default="fixed_epochs")
    scale.add_argument("--repeats", type=int, default=3)
    scale.add_argument("--seed", type=int, default=0)
    scale.add_argument("--reference-order", type=float, default=None,
                       help="add an analytic size^order reference series")
    scale.add_argument("--out", required=True, help="output CSV path")

    agg = sub.add_parser("aggregate", help="mean/std best-so-far curves from traces")
    agg.add_argument("--in", dest="inputs", nargs="+", required=True)
    agg.add_argument("--label", default="")
    agg.add_argument("--out", required=True, help="output CSV path")

    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = {}
    if args.config:
        config = json.loads(Path(args.config).read_text())
    for key in ("problem", "method", "reg_lambda", "runs", "n_iter", "n_init",
                "seed", "problem_seed", "out_dir", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    config.setdefault("reg_lambda", 0.0)
    config.setdefault("out_dir", "results")
    spec = ExperimentSpec(**config)
    summary = run_experiment(spec)
    print(f"{spec.problem}/{spec.method}: mean final {summary.mean:.6g} "
          f"+- {summary.std:.6g} over {summary.runs} runs "
          f"({summary.failed} failed); summary in {spec.out_dir}/summary.csv")
    return 0


def _cmd_scale(args: argparse.Namespace) -> int:
    records = scaling_study(args.axis, args.sizes, mode=args.mode,
                            repeats=args.repeats, seed=args.seed)
    if args.reference_order is not None:
        records = records + reference_records(args.axis, args.sizes, args.reference_order)
    write_scaling_csv(args.out, records)
    slope = records[0].slope
    print(f"{args.axis} slope {slope:.3f} over sizes {args.sizes}; wrote {args.out}")
    return 0


def _cmd_aggregate(args: argparse.Namespace) -> int:
    curve = aggregate(args.inputs, label=args.label)
    write_curves_csv(args.out, curve)
    print(f"aggregated {curve['n_runs']} runs into {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "scale":
            return _cmd_scale(args)
        return _cmd_aggregate(args)
    except Exception as err:
        print(json.dumps({"error": type(err).__name__, "message": str(err)}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
