"""A deterministic stand-in LLM for offline runs and cassette recording.

StubLLM answers the three role prompts by consulting the task dataset and
the static interpreter, so a full benchmark can run (and be recorded to a
cassette) with no network access:

  generator   returns the task's reference program; for the configured
              "flawed" tasks the first round returns a mutated program so
              the corrective loop actually corrects something
  simulator   parses and executes the submitted code, replying with the
              semantic narration plus a TRANSITIONS block
  evaluator   reconstructs the observed transitions from the observation
              (or the code, for direct analysis) and compares them against
              the task's reference trajectory

Replies are pure functions of the request text, which keeps recorded
cassettes and replayed runs bit-reproducible.
"""

from __future__ import annotations

import re
from pathlib import Path

from .bench import dataset as dataset_mod
from .interpreter import (
    DslError,
    Transition,
    execute,
    mutate,
    normalize_yaw,
    parse,
    parse_semantic_observation,
    render_semantic,
    transitions_of,
    unparse,
)
from .llm_client import Backend, BackendError, CompletionRequest

DEFAULT_FLAWED_TASKS = ("t03", "t11", "t16")
MUTATION_SEED = 1

_GENERATOR_MARK = "You are a drone operation code writer."
_EVALUATOR_MARK = "You are a drone flight evaluator."
_SIMULATOR_MARK = "You will analyze and infer the intention"

_TASK_LINE = re.compile(r"^Task: (.+)$", re.MULTILINE)
_QUERY = re.compile(r'Query: "\n(.*)\n"$', re.DOTALL)
_OBSERVATION = re.compile(r"\nObservation:\n(.*)$", re.DOTALL)
_CODE_BLOCK = re.compile(r"\nCode:\n(.*)\n\nNo trajectory observation", re.DOTALL)
_STATE_LINE = re.compile(r"^\(([-\d.]+), ([-\d.]+), ([-\d.]+), ([-\d.]+)\)$")


class StubError(BackendError):
    pass


def _describe(t: Transition) -> str:
    if t.dtheta != 0:
        direction = "clockwise" if t.dtheta > 0 else "counterclockwise"
        return f"a rotation of {abs(t.dtheta):g} degrees {direction}"
    parts = []
    if t.dx:
        parts.append(f"{abs(t.dx):g} m {'north' if t.dx > 0 else 'south'}")
    if t.dy:
        parts.append(f"{abs(t.dy):g} m {'east' if t.dy > 0 else 'west'}")
    if t.dz:
        parts.append(f"{abs(t.dz):g} m {'down' if t.dz > 0 else 'up'}")
    return "a move of " + " and ".join(parts) if parts else "no motion"


def _transitions_from_states(rows: list[tuple[float, float, float, float]]) -> list[Transition]:
    out = []
    for (x0, y0, z0, w0), (x1, y1, z1, w1) in zip(rows, rows[1:]):
        out.append(Transition(x1 - x0, y1 - y0, z1 - z0, normalize_yaw(w1 - w0)))
    return out


class StubLLM(Backend):
    def __init__(
        self,
        dataset_path: str | Path | None = None,
        flawed_tasks=DEFAULT_FLAWED_TASKS,
        position_tol: float = 0.1,
        yaw_tol: float = 1.0,
    ):
        self.dataset_path = Path(dataset_path) if dataset_path else dataset_mod.DEFAULT_DATASET
        self.tasks = {t.description: t for t in dataset_mod.load_tasks(self.dataset_path)}
        self.flawed_tasks = frozenset(flawed_tasks)
        self.position_tol = position_tol
        self.yaw_tol = yaw_tol

    @classmethod
    def from_config(cls, data: dict, base: Path) -> "StubLLM":
        path = data.get("stub_dataset")
        dataset_path = (base / path).resolve() if path else None
        return cls(
            dataset_path=dataset_path,
            flawed_tasks=tuple(data.get("stub_flawed_tasks", DEFAULT_FLAWED_TASKS)),
        )

    # -- dispatch ------------------------------------------------------------

    def complete(self, request: CompletionRequest) -> str:
        user = request.messages[-1][1]
        if _GENERATOR_MARK in request.system:
            return self._generate(user)
        if _EVALUATOR_MARK in request.system:
            return self._evaluate(user)
        if _SIMULATOR_MARK in request.system:
            return self._simulate(user)
        raise StubError("stub cannot classify this prompt; use the packaged bundles")

    def _task_for(self, user: str):
        matches = _TASK_LINE.findall(user)
        if not matches:
            raise StubError("no 'Task:' line in the prompt")
        description = matches[-1].strip()
        task = self.tasks.get(description)
        if task is None:
            raise StubError(f"stub dataset has no task with description {description!r}")
        return task

    def _reference_code(self, task) -> str:
        return dataset_mod.reference_program_path(task, self.dataset_path).read_text("utf-8")

    # -- roles ---------------------------------------------------------------

    def _generate(self, user: str) -> str:
        task = self._task_for(user)
        code = self._reference_code(task)
        correcting = "Feedback:" in user
        if task.id in self.flawed_tasks and not correcting:
            program = mutate(parse(code), MUTATION_SEED, h_takeoff=task.h_takeoff)
            code = unparse(program)
        return f"Here is the drone operation code:\n\n```python\n{code.rstrip()}\n```\n"

    def _simulate(self, user: str) -> str:
        m = _QUERY.search(user)
        if not m:
            raise StubError("simulator prompt carries no Query block")
        code = m.group(1)
        try:
            trace = execute(parse(code))
        except DslError as exc:
            return f"The code could not be interpreted: {exc}"
        prose = render_semantic(trace)
        block = ", ".join(str([round(v, 9) for v in t.as_list()]) for t in trace.transitions)
        return f"{prose}\nTRANSITIONS: [{block}]"

    def _evaluate(self, user: str) -> str:
        task = self._task_for(user)
        observed = self._observed_transitions(user, task)
        if observed is None:
            return (
                "VERDICT: MISMATCH\n1. The trajectory could not be reconstructed from the "
                "observation; regenerate the code."
            )
        expected = list(task.ground_truth)
        for i, (exp, act) in enumerate(zip(expected, observed)):
            if not self._close(exp, act):
                return (
                    "VERDICT: MISMATCH\n"
                    f"1. Action {i + 1} should be {_describe(exp)} but the observation "
                    f"shows {_describe(act)}."
                )
        if len(observed) < len(expected):
            i = len(observed)
            return (
                "VERDICT: MISMATCH\n"
                f"1. Action {i + 1} is missing: the task requires {_describe(expected[i])} "
                "but the observation ends before it."
            )
        if len(observed) > len(expected):
            i = len(expected)
            return (
                "VERDICT: MISMATCH\n"
                f"1. Action {i + 1} is surplus: the observation shows {_describe(observed[i])} "
                "after the task is already complete."
            )
        return "VERDICT: MATCH"

    def _close(self, a: Transition, b: Transition) -> bool:
        return (
            abs(a.dx - b.dx) <= self.position_tol
            and abs(a.dy - b.dy) <= self.position_tol
            and abs(a.dz - b.dz) <= self.position_tol
            and abs(normalize_yaw(a.dtheta - b.dtheta)) <= self.yaw_tol
        )

    def _observed_transitions(self, user: str, task) -> list[Transition] | None:
        m = _CODE_BLOCK.search(user)
        if m:  # direct analysis: the code itself stands in for an observation
            try:
                trace = execute(parse(m.group(1)), h_takeoff=task.h_takeoff)
            except DslError:
                return None
            return transitions_of(trace)
        m = _OBSERVATION.search(user)
        if not m:
            return None
        prose = m.group(1).strip()
        state_rows = []
        for line in prose.splitlines():
            sm = _STATE_LINE.match(line.strip())
            if sm:
                state_rows.append(tuple(float(g) for g in sm.groups()))
        if state_rows:
            return _transitions_from_states(state_rows)
        try:
            return parse_semantic_observation(prose.split("\n\nExecution faults:")[0])
        except ValueError:
            return None
