"""Benchmark constants live in one versioned JSON file.

Every number the simulators rely on (rate distributions, costs,
penalties, usage-dependent factors) can be swapped by pointing at an
alternate file with the same schema; nothing is hardcoded in the
simulators themselves.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

CONSTANTS_SCHEMA = "bvopt-benchmark-constants-v1"

__all__ = ["load_constants", "CONSTANTS_SCHEMA"]


def load_constants(path=None) -> dict:
    """Load the shipped constants file, or a drop-in replacement."""
    if path is None:
        text = resources.files("bvopt.benchmarks").joinpath("constants.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    if data.get("schema") != CONSTANTS_SCHEMA:
        raise ValueError(
            f"constants schema mismatch: expected {CONSTANTS_SCHEMA}, "
            f"got {data.get('schema')!r}"
        )
    return data
