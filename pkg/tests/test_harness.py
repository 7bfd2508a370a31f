"""Experiment driver: persistence, determinism, aggregation, scaling."""

import json
from pathlib import Path

import numpy as np
import pytest

from bvopt.harness import (
    ExperimentSpec,
    SchemaError,
    aggregate,
    fit_loglog_slope,
    read_curves_csv,
    read_scaling_csv,
    read_trace,
    reference_records,
    run_experiment,
    scaling_study,
    summarize,
    timings_path,
    write_curves_csv,
    write_scaling_csv,
    write_trace,
)
from bvopt.trace import OptimizationTrace


def _tiny_spec(tmp_path, method="rs", **overrides):
    params = dict(
        problem="synthetic", method=method, out_dir=str(tmp_path / method),
        runs=2, n_init=3, n_iter=4, seed=5, problem_seed=1,
    )
    if method == "bvo":
        params["method_params"] = dict(inner_steps=5, proposal_batch=8, restarts=2,
                                       mc_y_samples=4)
        params["surrogate_params"] = dict(hidden_sizes=(8,), epochs=10)
    params.update(overrides)
    return ExperimentSpec(**params)


class TestRunExperiment:
    def test_single_run_summary_equals_final_best(self, tmp_path):
        spec = _tiny_spec(tmp_path, runs=1)
        summary = run_experiment(spec)
        header, records = read_trace(next(Path(spec.out_dir).glob("*.trace.jsonl")))
        assert summary.mean == records[-1]["best"]
        assert summary.runs == 1 and summary.failed == 0

    def test_rerun_same_seeds_identical_files(self, tmp_path):
        spec_a = _tiny_spec(tmp_path / "a")
        spec_b = _tiny_spec(tmp_path / "b")
        run_experiment(spec_a)
        run_experiment(spec_b)
        for pa, pb in zip(sorted(Path(spec_a.out_dir).glob("*.trace.jsonl")),
                          sorted(Path(spec_b.out_dir).glob("*.trace.jsonl"))):
            assert pa.read_bytes() == pb.read_bytes()
        assert (Path(spec_a.out_dir) / "summary.csv").read_bytes() == (
            Path(spec_b.out_dir) / "summary.csv"
        ).read_bytes()

    def test_parallel_jobs_match_serial_bytes(self, tmp_path):
        serial = _tiny_spec(tmp_path / "serial", runs=3, jobs=1)
        parallel = _tiny_spec(tmp_path / "par", runs=3, jobs=2)
        run_experiment(serial)
        run_experiment(parallel)
        for pa, pb in zip(sorted(Path(serial.out_dir).glob("*.trace.jsonl")),
                          sorted(Path(parallel.out_dir).glob("*.trace.jsonl"))):
            assert pa.read_bytes() == pb.read_bytes()

    def test_bvo_method_round_trip(self, tmp_path):
        spec = _tiny_spec(tmp_path, method="bvo", runs=1)
        summary = run_experiment(spec)
        assert summary.runs == 1
        header, records = read_trace(next(Path(spec.out_dir).glob("*.trace.jsonl")))
        assert header["method"] == "bvo"
        assert len(records) == spec.budget

    def test_summary_recompute_from_files_is_byte_identical(self, tmp_path):
        spec = _tiny_spec(tmp_path)
        run_experiment(spec)
        out = Path(spec.out_dir)
        recomputed = summarize(sorted(out.glob("*.trace.jsonl")), expected_runs=spec.runs)
        assert recomputed.to_csv_text() == (out / "summary.csv").read_text()

    def test_failed_runs_marked_but_not_fatal(self, tmp_path, monkeypatch):
        import bvopt.harness.experiments as exp

        real = exp._run_one

        def flaky(spec_dict, run_idx):
            if run_idx == 1:
                return {"run": run_idx, "status": "failed", "error": "boom"}
            return real(spec_dict, run_idx)

        monkeypatch.setattr(exp, "_run_one", flaky)
        spec = _tiny_spec(tmp_path, runs=3)
        summary = run_experiment(spec)
        assert summary.runs == 2 and summary.failed == 1

    def test_invalid_spec_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            ExperimentSpec(problem="nope", method="rs", out_dir=str(tmp_path))
        with pytest.raises(ValueError):
            ExperimentSpec(problem="ising", method="rs", out_dir=str(tmp_path), runs=0)
        with pytest.raises(ValueError):
            ExperimentSpec(problem="external", method="rs", out_dir=str(tmp_path))

    def test_timings_live_in_sidecar_not_trace(self, tmp_path):
        spec = _tiny_spec(tmp_path, method="bvo", runs=1)
        run_experiment(spec)
        trace_file = next(Path(spec.out_dir).glob("*.trace.jsonl"))
        assert "t_fit_ms" not in trace_file.read_text()
        sidecar = timings_path(trace_file)
        assert sidecar.exists()
        assert "t_fit_ms" in sidecar.read_text()


class TestTraceSchema:
    def test_schema_mismatch_is_hard_error(self, tmp_path):
        path = tmp_path / "bad.trace.jsonl"
        path.write_text('{"schema":"bvopt-trace-v99"}\n')
        with pytest.raises(SchemaError):
            read_trace(path)

    def test_round_trip(self, tmp_path):
        trace = OptimizationTrace(config={"a": 1}, seed=7, method="rs")
        trace.append([0, 1], 3.0)
        trace.append([1, 1], 2.0)
        path = tmp_path / "t.trace.jsonl"
        write_trace(path, trace, problem="synthetic")
        header, records = read_trace(path)
        assert header["seed"] == 7
        assert [r["best"] for r in records] == [3.0, 2.0]


class TestAggregate:
    def _write(self, tmp_path, name, bests, seed=0):
        trace = OptimizationTrace(seed=seed, method="rs")
        value_stream = bests
        for v in value_stream:
            trace.append([0], v)
        path = tmp_path / f"{name}.trace.jsonl"
        write_trace(path, trace, problem="synthetic")
        return path

    def test_single_trace_curve_matches_best_so_far(self, tmp_path):
        p = self._write(tmp_path, "a", [5.0, 4.0, 4.0, 1.0])
        curve = aggregate([p])
        np.testing.assert_array_equal(curve["mean"], [5.0, 4.0, 4.0, 1.0])
        np.testing.assert_array_equal(curve["std"], np.zeros(4))

    def test_identical_traces_zero_std(self, tmp_path):
        p1 = self._write(tmp_path, "a", [3.0, 2.0])
        p2 = self._write(tmp_path, "b", [3.0, 2.0])
        curve = aggregate([p1, p2])
        np.testing.assert_array_equal(curve["std"], np.zeros(2))

    def test_population_std_convention(self, tmp_path):
        p1 = self._write(tmp_path, "a", [0.0])
        p2 = self._write(tmp_path, "b", [2.0])
        curve = aggregate([p1, p2])
        assert curve["mean"][0] == 1.0
        assert curve["std"][0] == 1.0  # population: sqrt(((0-1)^2 + (2-1)^2)/2)

    def test_mismatched_budgets_listed(self, tmp_path):
        p1 = self._write(tmp_path, "a", [1.0, 0.5])
        p2 = self._write(tmp_path, "b", [1.0])
        with pytest.raises(ValueError, match="mismatched budgets"):
            aggregate([p1, p2])

    def test_csv_round_trip(self, tmp_path):
        p1 = self._write(tmp_path, "a", [1.0, 0.5, 0.25])
        curve = aggregate([p1], label="rs")
        out = tmp_path / "curves.csv"
        write_curves_csv(out, curve)
        loaded = read_curves_csv(out)
        np.testing.assert_allclose(loaded["mean"], curve["mean"])
        assert loaded["label"] == "rs"
        with pytest.raises(ValueError):
            read_curves_csv(p1)


class TestScaling:
    def test_slope_fitter_exact_quadratic(self):
        sizes = [100, 200, 400, 800, 1600]
        times = [3e-9 * s**2 for s in sizes]
        assert fit_loglog_slope(sizes, times) == pytest.approx(2.0, abs=0.01)

    def test_slope_fitter_constant_series(self):
        rng = np.random.default_rng(0)
        sizes = [10, 20, 40, 80, 160]
        times = [0.05 * (1 + 0.02 * rng.standard_normal()) for _ in sizes]
        assert abs(fit_loglog_slope(sizes, times)) < 0.15

    def test_reference_series_normalization(self):
        recs = reference_records("dimension", [10, 20, 40, 80], order=1.93)
        first3 = np.array([r.normalized for r in recs[:3]])
        assert first3.mean() == pytest.approx(1.0)
        assert recs[0].slope == pytest.approx(1.93)

    def test_study_runs_and_csv_round_trip(self, tmp_path):
        records = scaling_study(
            "dimension", [4, 6, 8, 10], mode="fixed_epochs", repeats=1, seed=0,
            hidden=(8,), epochs_fixed=3, inner_steps=3, proposal_batch=8, restarts=2,
        )
        assert len(records) == 4
        assert all(r.time_s > 0 for r in records)
        assert np.isfinite(records[0].slope)
        first3 = np.array([r.normalized for r in records[:3]])
        assert first3.mean() == pytest.approx(1.0)
        out = tmp_path / "scaling.csv"
        write_scaling_csv(out, records)
        loaded = read_scaling_csv(out)
        assert [r.size for r in loaded] == [4, 6, 8, 10]
        assert loaded[0].slope == pytest.approx(records[0].slope)

    def test_invalid_study_arguments(self):
        with pytest.raises(ValueError):
            scaling_study("volume", [1, 2, 3, 4])
        with pytest.raises(ValueError):
            scaling_study("dimension", [4, 6, 8])
        with pytest.raises(ValueError):
            scaling_study("dimension", [4, 6, 6, 8])
        with pytest.raises(ValueError):
            fit_loglog_slope([1, 2], [0.0, 1.0])
