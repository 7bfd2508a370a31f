"""Experiment driver, persistence, aggregation, and timing studies."""

from .aggregate import CURVES_SCHEMA, aggregate, read_curves_csv, write_curves_csv
from .experiments import ExperimentSpec, RunSummary, make_problem, run_experiment, summarize
from .scaling import (
    SCALING_SCHEMA,
    ScalingRecord,
    fit_loglog_slope,
    read_scaling_csv,
    reference_records,
    scaling_study,
    write_scaling_csv,
)
from .traces_io import (
    TIMINGS_SCHEMA,
    TRACE_SCHEMA,
    SchemaError,
    read_timings,
    read_trace,
    timings_path,
    write_timings,
    write_trace,
)

__all__ = [
    "ExperimentSpec",
    "RunSummary",
    "make_problem",
    "run_experiment",
    "summarize",
    "aggregate",
    "write_curves_csv",
    "read_curves_csv",
    "scaling_study",
    "reference_records",
    "fit_loglog_slope",
    "ScalingRecord",
    "write_scaling_csv",
    "read_scaling_csv",
    "write_trace",
    "read_trace",
    "write_timings",
    "read_timings",
    "timings_path",
    "SchemaError",
    "TRACE_SCHEMA",
    "TIMINGS_SCHEMA",
    "CURVES_SCHEMA",
    "SCALING_SCHEMA",
]
