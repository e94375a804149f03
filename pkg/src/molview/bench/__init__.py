"""Benchmark harness reproducing the evaluation protocol at desk scale."""

from .harness import (BenchReport, BenchRow, DEFAULT_TIMEOUT_S,
                      grade_frame_time, parse_manifest, run_benchmark)
from .synthetic import generate_synthetic

__all__ = [
    "generate_synthetic", "run_benchmark", "parse_manifest",
    "grade_frame_time", "BenchReport", "BenchRow", "DEFAULT_TIMEOUT_S",
]
