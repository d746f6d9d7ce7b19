"""Task datasets: JSON-lines files of operation tasks with ground truths.

One task per line with fields ``id``, ``description``, ``ground_truth``
(list of [dx, dy, dz, dtheta] rows), ``complexity`` and ``h_takeoff``.  A
sidecar ``manifest.json`` defines the complexity buckets and records how the
ground truths were produced.  The packaged desk-scale set of 20 tasks lives
under ``bench/data/advanced_desk/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..interpreter import Transition

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_DATASET = DATA_DIR / "advanced_desk" / "tasks.jsonl"

REQUIRED_FIELDS = ("id", "description", "ground_truth", "complexity", "h_takeoff")


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class Task:
    id: str
    description: str
    ground_truth: tuple[Transition, ...]
    complexity: str
    h_takeoff: float

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "ground_truth": [t.as_list() for t in self.ground_truth],
            "complexity": self.complexity,
            "h_takeoff": self.h_takeoff,
        }


def _check_transition_row(row, where: str) -> Transition:
    try:
        t = Transition.from_seq(row)
    except (ValueError, TypeError) as exc:
        raise DatasetError(f"{where}: {exc}") from exc
    if not -180.0 < t.dtheta <= 180.0:
        raise DatasetError(f"{where}: dtheta {t.dtheta} outside (-180, 180]")
    if t.dtheta != 0.0 and (t.dx, t.dy, t.dz) != (0.0, 0.0, 0.0):
        raise DatasetError(f"{where}: a transition must be motion-only or rotation-only")
    return t


def _parse_task(record: dict, where: str, buckets: dict | None) -> Task:
    for name in REQUIRED_FIELDS:
        if name not in record:
            raise DatasetError(f"{where}: missing field {name!r}")
    gt_rows = record["ground_truth"]
    if not isinstance(gt_rows, list) or not gt_rows:
        raise DatasetError(f"{where}: ground_truth must be a non-empty list")
    gt = tuple(
        _check_transition_row(row, f"{where}, transition {i}") for i, row in enumerate(gt_rows)
    )
    complexity = record["complexity"]
    if buckets is not None:
        if complexity not in buckets:
            raise DatasetError(f"{where}: unknown complexity bucket {complexity!r}")
        lo, hi = buckets[complexity]
        if not lo <= len(gt) <= hi:
            raise DatasetError(
                f"{where}: {len(gt)} actions does not fit bucket {complexity!r} [{lo}, {hi}]"
            )
    return Task(
        id=str(record["id"]),
        description=str(record["description"]),
        ground_truth=gt,
        complexity=str(complexity),
        h_takeoff=float(record["h_takeoff"]),
    )


def load_manifest(dataset_path: str | Path) -> dict | None:
    manifest = Path(dataset_path).parent / "manifest.json"
    if manifest.is_file():
        return json.loads(manifest.read_text(encoding="utf-8"))
    return None


def load_tasks(path: str | Path | None = None) -> list[Task]:
    """Load and validate a dataset; raises DatasetError naming the bad line."""
    path = Path(path) if path is not None else DEFAULT_DATASET
    manifest = load_manifest(path)
    buckets = manifest.get("buckets") if manifest else None
    tasks = []
    seen_ids = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        where = f"{path.name}:{lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{where}: invalid JSON ({exc.msg})") from exc
        task = _parse_task(record, where, buckets)
        if task.id in seen_ids:
            raise DatasetError(f"{where}: duplicate task id {task.id!r}")
        seen_ids.add(task.id)
        tasks.append(task)
    if not tasks:
        raise DatasetError(f"{path}: dataset holds no tasks")
    return tasks


def validate(path: str | Path) -> list[str]:
    """Collect per-line diagnostics instead of stopping at the first problem."""
    path = Path(path)
    problems: list[str] = []
    manifest = load_manifest(path)
    buckets = manifest.get("buckets") if manifest else None
    seen_ids = set()
    lines = path.read_text(encoding="utf-8").splitlines()
    any_task = False
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        where = f"{path.name}:{lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            problems.append(f"{where}: invalid JSON ({exc.msg})")
            continue
        try:
            task = _parse_task(record, where, buckets)
        except DatasetError as exc:
            problems.append(str(exc))
            continue
        any_task = True
        if task.id in seen_ids:
            problems.append(f"{where}: duplicate task id {task.id!r}")
        seen_ids.add(task.id)
    if not any_task and not problems:
        problems.append(f"{path}: dataset holds no tasks")
    return problems


def reference_program_path(task: Task, dataset_path: str | Path | None = None) -> Path:
    """The checked-in program a task's ground truth was generated from."""
    base = Path(dataset_path).parent if dataset_path else DEFAULT_DATASET.parent
    return base / "programs" / f"{task.id}.py"
