"""The corrective generation–simulation–evaluation loop.

Each round asks the generator for code, turns the code into a trajectory
observation via the configured simulation backend, and asks the evaluator
for a verdict.  On MISMATCH the next round's generator sees the prior code
and the feedback; the loop ends on MATCH or after ``max_iterations`` rounds.

Simulation backends:
  llm_sim           the LLM narrates the trajectory from the code text
  oracle_semantic   the static interpreter executes and narrates
  oracle_numerical  the static interpreter executes and lists states
  none              the raw code is handed to the evaluator (direct analysis)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import llm_roles, prompts
from .interpreter import (
    DroneState,
    DslError,
    ExecutionLimits,
    execute,
    parse,
    render_numerical,
    render_semantic,
    transitions_of,
)
from .llm_client import (
    Backend,
    BackendError,
    CassetteStore,
    CompletionParams,
    HttpBackend,
    ReplayBackend,
)
from .llm_roles import Observation, ObservationSource, Verdict
from .prompts import PromptBundle

SIMULATION_BACKENDS = ("llm_sim", "oracle_semantic", "oracle_numerical", "none")

# friendly aliases accepted on the CLI and in config files
METHOD_ALIASES = {
    "direct": "none",
    "numerical": "oracle_numerical",
    "semantic": "oracle_semantic",
    "llm": "llm_sim",
}


def canonical_method(name: str) -> str:
    method = METHOD_ALIASES.get(name.lower(), name.lower())
    if method not in SIMULATION_BACKENDS:
        raise ValueError(
            f"unknown simulation backend {name!r}; pick from {', '.join(SIMULATION_BACKENDS)}"
        )
    return method


@dataclass(frozen=True)
class Tolerances:
    position: float = 0.1  # meters, per axis
    yaw: float = 1.0  # degrees


@dataclass(frozen=True)
class RoleBundles:
    simulator: PromptBundle
    generator: PromptBundle
    evaluator: PromptBundle

    @classmethod
    def defaults(cls, ablation=frozenset()) -> "RoleBundles":
        return cls(
            simulator=prompts.default_bundle("simulator", ablation),
            generator=prompts.default_bundle("generator"),
            evaluator=prompts.default_bundle("evaluator"),
        )


@dataclass
class MethodConfig:
    """Everything one corrective run needs; see load_config for the file form."""

    simulation_backend: str = "oracle_semantic"
    max_iterations: int = 5
    bundles: RoleBundles | None = None
    generator_backend: Backend | None = None
    simulator_backend: Backend | None = None
    evaluator_backend: Backend | None = None
    limits: ExecutionLimits = field(default_factory=ExecutionLimits)
    h_takeoff: float = 2.5
    tolerances: Tolerances = field(default_factory=Tolerances)
    model: str = "offline"
    params: CompletionParams = field(default_factory=CompletionParams)
    history_window: int = 1
    initial_airborne: bool = False

    def __post_init__(self):
        self.simulation_backend = canonical_method(self.simulation_backend)
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.bundles is None:
            self.bundles = RoleBundles.defaults()

    def for_method(self, method: str) -> "MethodConfig":
        clone = replace(self)
        clone.simulation_backend = canonical_method(method)
        return clone


@dataclass(frozen=True)
class Iteration:
    code: str
    observation: Observation
    verdict: Verdict
    generator_prompt: str


@dataclass(frozen=True)
class LoopResult:
    iterations: tuple[Iteration, ...]
    final_code: str
    status: str  # accepted | exhausted | faulted
    iterations_used: int

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"


def observe(code: str, config: MethodConfig) -> Observation:
    """Produce the trajectory observation for ``code`` under the configured backend."""
    if not code.strip():
        raise ValueError("code text must not be empty")
    backend = config.simulation_backend
    if backend == "none":
        return Observation(prose=code, source=ObservationSource.NONE)
    if backend == "llm_sim":
        if config.simulator_backend is None:
            raise ValueError("llm_sim needs a simulator LLM backend")
        return llm_roles.simulate_llm(
            code,
            config.bundles.simulator,
            config.simulator_backend,
            model=config.model,
            params=config.params,
        )
    try:
        program = parse(code)
    except DslError as exc:
        # hand the diagnostic to the evaluator so the loop can correct it
        return Observation(
            prose=f"The code could not be interpreted: {exc}", source=ObservationSource.NONE
        )
    trace = execute(
        program,
        initial=DroneState.initial(airborne=config.initial_airborne),
        limits=config.limits,
        h_takeoff=config.h_takeoff,
    )
    if backend == "oracle_semantic":
        prose = render_semantic(trace)
        source = ObservationSource.ORACLE_SEMANTIC
    else:
        prose = render_numerical(trace)
        source = ObservationSource.ORACLE_NUMERICAL
    if trace.faults:
        fault_lines = "\n".join(
            f"- line {f.span.line}: {f.message} (action skipped)" for f in trace.faults
        )
        prose = f"{prose}\n\nExecution faults:\n{fault_lines}"
    return Observation(
        prose=prose, structured=tuple(transitions_of(trace)), source=source
    )


def make_observer(config: MethodConfig):
    """Bind observe() to a config; handy for accuracy sweeps."""

    def observer(code: str) -> Observation:
        return observe(code, config)

    return observer


def run_task(task: str, config: MethodConfig) -> LoopResult:
    """Run the corrective loop for one task description."""
    if not task.strip():
        raise ValueError("task text must not be empty")
    if config.generator_backend is None or config.evaluator_backend is None:
        raise ValueError("run_task needs generator and evaluator backends")
    framing = "code" if config.simulation_backend == "none" else "observation"
    iterations: list[Iteration] = []
    correction: tuple[str, str] | None = None
    history: list[tuple[str, str]] = []
    code = ""
    for _round in range(config.max_iterations):
        window = tuple(history[-(config.history_window - 1):]) if config.history_window > 1 else ()
        try:
            code = llm_roles.generate(
                task,
                config.bundles.generator,
                config.generator_backend,
                correction=correction,
                history=window,
                model=config.model,
                params=config.params,
            )
            observation = observe(code, config)
        except (BackendError, llm_roles.EmptyReplyError, llm_roles.DegenerateSimulationError):
            return LoopResult(tuple(iterations), code, "faulted", len(iterations))
        generator_prompt = _prompt_for_round(task, config, correction, window)
        try:
            verdict = llm_roles.evaluate(
                task,
                observation,
                config.bundles.evaluator,
                config.evaluator_backend,
                framing=framing,
                model=config.model,
                params=config.params,
                strict=False,
            )
        except BackendError:
            return LoopResult(tuple(iterations), code, "faulted", len(iterations))
        iterations.append(Iteration(code, observation, verdict, generator_prompt))
        if verdict.match:
            return LoopResult(tuple(iterations), code, "accepted", len(iterations))
        if correction is not None:
            history.append(correction)
        correction = (code, verdict.feedback or "The evaluator reported a mismatch.")
    return LoopResult(tuple(iterations), code, "exhausted", len(iterations))


def _prompt_for_round(task, config, correction, window) -> str:
    head = prompts.render_components(config.bundles.generator)
    parts = [head]
    for past_code, past_feedback in window:
        parts.append(prompts.generator_user_message(task, past_code, past_feedback))
    if correction is None:
        parts.append(prompts.generator_user_message(task))
    else:
        parts.append(prompts.generator_user_message(task, correction[0], correction[1]))
    return "\n\n".join(parts)


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------


def load_config(path: str | Path, method: str | None = None) -> MethodConfig:
    """Build a MethodConfig from a JSON config file.

    Documented keys: method, max_iterations, model, endpoint, api_key_env,
    timeout, backend (http | replay | stub), record, cassette_path,
    h_takeoff, tolerances {position, yaw}, prompt_bundle_path, limits
    {max_actions, max_loop_iterations, strict}, history_window,
    temperature, initial_airborne, stub_dataset.
    """
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    bundles = None
    bundle_path = data.get("prompt_bundle_path")
    if bundle_path:
        root = (path.parent / bundle_path).resolve()
        bundles = RoleBundles(
            simulator=prompts.load_bundle(root / "simulator"),
            generator=prompts.load_bundle(root / "generator"),
            evaluator=prompts.load_bundle(root / "evaluator"),
        )
    limits_data = data.get("limits", {})
    limits = ExecutionLimits(
        max_actions=limits_data.get("max_actions", 10_000),
        max_loop_iterations=limits_data.get("max_loop_iterations", 1_000),
        strict=limits_data.get("strict", False),
    )
    tol_data = data.get("tolerances", {})
    tolerances = Tolerances(
        position=tol_data.get("position", 0.1), yaw=tol_data.get("yaw", 1.0)
    )
    backend = _build_backend(data, path.parent)
    config = MethodConfig(
        simulation_backend=method or data.get("method", "oracle_semantic"),
        max_iterations=data.get("max_iterations", 5),
        bundles=bundles,
        generator_backend=backend,
        simulator_backend=backend,
        evaluator_backend=backend,
        limits=limits,
        h_takeoff=data.get("h_takeoff", 2.5),
        tolerances=tolerances,
        model=data.get("model", "offline"),
        params=CompletionParams(temperature=data.get("temperature", 0.0)),
        history_window=data.get("history_window", 1),
        initial_airborne=data.get("initial_airborne", False),
    )
    return config


def _build_backend(data: dict, base: Path) -> Backend | None:
    kind = data.get("backend")
    if kind is None:
        return None
    if kind == "http":
        return HttpBackend(
            endpoint=data["endpoint"],
            api_key_env=data.get("api_key_env", "SKYSIM_API_KEY"),
            timeout=data.get("timeout", 60.0),
        )
    if kind == "replay":
        cassette = (base / data["cassette_path"]).resolve()
        store = CassetteStore.load(cassette) if cassette.exists() else CassetteStore(cassette)
        live = None
        if data.get("record"):
            if data.get("endpoint"):
                live = HttpBackend(
                    endpoint=data["endpoint"],
                    api_key_env=data.get("api_key_env", "SKYSIM_API_KEY"),
                    timeout=data.get("timeout", 60.0),
                )
            else:
                from .llm_stub import StubLLM

                live = StubLLM.from_config(data, base)
        return ReplayBackend(store, live=live)
    if kind == "stub":
        from .llm_stub import StubLLM

        return StubLLM.from_config(data, base)
    raise ValueError(f"unknown backend kind {kind!r}; use http, replay or stub")
