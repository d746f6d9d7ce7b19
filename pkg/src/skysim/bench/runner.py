"""Benchmark sweeps: (task x method x repetition) cells and report emission.

Each cell runs the corrective loop, then scores the loop's final code by
parsing and executing it with the static interpreter and comparing the
resulting transitions against the task's ground truth.  A cell that cannot
be scored (unparseable final code, transport failure, order-violating
trace) is recorded with completeness 0 rather than aborting the sweep.

Reports: a CSV with one row per cell, a rendered text table of per-method
aggregates, and (on request) matplotlib figures saved next to the CSV.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ..interpreter import DroneState, DslError, execute, parse, transitions_of
from ..llm_client import BackendError
from ..pipeline import MethodConfig, run_task
from .dataset import Task
from .metrics import completeness as eq_completeness
from .metrics import match_prefix

CSV_COLUMNS = ("task_id", "method", "repetition", "completeness", "success", "iterations_used")


@dataclass(frozen=True)
class BenchRow:
    task_id: str
    method: str
    repetition: int
    completeness: float
    success: bool
    iterations_used: int
    status: str = "scored"


@dataclass(frozen=True)
class MethodAggregate:
    method: str
    success_rate: float  # percent
    mean_completeness: float  # fraction in [0, 1]
    mean_iterations: float
    cells: int


@dataclass(frozen=True)
class MetricsReport:
    rows: tuple[BenchRow, ...]
    aggregates: tuple[MethodAggregate, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(
                [
                    row.task_id,
                    row.method,
                    row.repetition,
                    f"{row.completeness:.6f}",
                    int(row.success),
                    row.iterations_used,
                ]
            )
        return buf.getvalue()

    def to_table(self) -> str:
        head = f"{'method':<18} {'SR':>8} {'Completeness':>14} {'Iterations':>11} {'Cells':>6}"
        lines = [head, "-" * len(head)]
        for agg in self.aggregates:
            lines.append(
                f"{agg.method:<18} {agg.success_rate:>7.1f}% "
                f"{100 * agg.mean_completeness:>13.1f}% "
                f"{agg.mean_iterations:>11.2f} {agg.cells:>6}"
            )
        return "\n".join(lines)


def score_code(code: str, task: Task, config: MethodConfig) -> tuple[float, bool]:
    """Score final code against a task's ground truth; (completeness, success)."""
    try:
        program = parse(code)
    except DslError:
        return 0.0, False
    trace = execute(
        program,
        initial=DroneState.initial(airborne=config.initial_airborne),
        limits=config.limits,
        h_takeoff=task.h_takeoff,
    )
    if trace.order_violating:
        return 0.0, False
    predicted = transitions_of(trace)
    result = match_prefix(predicted, list(task.ground_truth), config.tolerances)
    comp = eq_completeness(predicted, list(task.ground_truth), config.tolerances)
    return comp, result.matched == len(task.ground_truth) and result.surplus == 0


def run_benchmark(
    tasks: Sequence[Task],
    configs: Mapping[str, MethodConfig],
    repetitions: int = 3,
) -> MetricsReport:
    """Run every (task, method, repetition) cell and aggregate per method."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    if not tasks:
        raise ValueError("no tasks to run")
    rows: list[BenchRow] = []
    for method_name, config in configs.items():
        for task in tasks:
            for rep in range(1, repetitions + 1):
                rows.append(_run_cell(task, method_name, config, rep))
    aggregates = [
        _aggregate(method, [r for r in rows if r.method == method]) for method in configs
    ]
    return MetricsReport(rows=tuple(rows), aggregates=tuple(aggregates))


def _run_cell(task: Task, method: str, config: MethodConfig, rep: int) -> BenchRow:
    try:
        result = run_task(task.description, config)
    except BackendError:
        return BenchRow(task.id, method, rep, 0.0, False, 0, status="faulted")
    if result.status == "faulted" or not result.final_code.strip():
        return BenchRow(
            task.id, method, rep, 0.0, False, result.iterations_used, status="faulted"
        )
    comp, ok = score_code(result.final_code, task, config)
    return BenchRow(task.id, method, rep, comp, ok, result.iterations_used)


def _aggregate(method: str, rows: list[BenchRow]) -> MethodAggregate:
    n = len(rows)
    return MethodAggregate(
        method=method,
        success_rate=100.0 * sum(r.success for r in rows) / n,
        mean_completeness=sum(r.completeness for r in rows) / n,
        mean_iterations=sum(r.iterations_used for r in rows) / n,
        cells=n,
    )


def write_report(report: MetricsReport, out_dir: str | Path, figures: bool = True) -> dict:
    """Write report.csv, report.txt and (optionally) figures; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out / "report.csv", "table": out / "report.txt"}
    paths["csv"].write_text(report.to_csv(), encoding="utf-8")
    paths["table"].write_text(report.to_table() + "\n", encoding="utf-8")
    if figures:
        from .figures import save_benchmark_figure

        paths["figure"] = save_benchmark_figure(report, out / "report.png")
    return paths
