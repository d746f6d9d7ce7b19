"""Benchmark harness: task datasets, scoring metrics, sweep runner, reports."""

from .dataset import DatasetError, Task, load_tasks, reference_program_path, validate
from .metrics import (
    AccuracyResult,
    PrefixMatch,
    completeness,
    evaluation_accuracy,
    match_prefix,
    observation_accuracy,
    success,
)
from .runner import (
    BenchRow,
    MethodAggregate,
    MetricsReport,
    run_benchmark,
    score_code,
    write_report,
)

__all__ = [
    "AccuracyResult",
    "BenchRow",
    "DatasetError",
    "MethodAggregate",
    "MetricsReport",
    "PrefixMatch",
    "Task",
    "completeness",
    "evaluation_accuracy",
    "load_tasks",
    "match_prefix",
    "observation_accuracy",
    "reference_program_path",
    "run_benchmark",
    "score_code",
    "success",
    "validate",
    "write_report",
]
