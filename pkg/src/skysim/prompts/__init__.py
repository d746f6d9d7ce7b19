"""System-prompt assembly for the three LLM roles.

A prompt is built from four components (role, APIs, policies, examples)
rendered in that fixed order.  Role and APIs are always present; policies
and examples can be masked out for ablation runs.  Bundles load from a
directory of plain-text component files listed in a manifest; the packaged
defaults live under ``prompts/data/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

_DATA_DIR = Path(__file__).parent / "data"

ABLATABLE_COMPONENTS = frozenset({"policies", "examples"})

# mask label -> omitted components, in the order ablation sweeps report them
ABLATION_MASKS: dict[str, frozenset[str]] = {
    "full": frozenset(),
    "no_policies": frozenset({"policies"}),
    "no_examples": frozenset({"examples"}),
    "no_policies_examples": frozenset({"policies", "examples"}),
}


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class PromptBundle:
    """The four prompt components plus the set of masked-out ones."""

    role_text: str
    api_text: str
    policies_text: str
    examples: tuple[tuple[str, str], ...]
    examples_intro: str = ""
    ablation: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.role_text.strip():
            raise PromptError("role text must not be empty")
        if not self.api_text.strip():
            raise PromptError("API text must not be empty")
        extra = set(self.ablation) - ABLATABLE_COMPONENTS
        if extra:
            raise PromptError(f"only policies/examples can be ablated, not {sorted(extra)}")

    def with_ablation(self, ablation) -> "PromptBundle":
        return replace(self, ablation=frozenset(ablation))


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8").rstrip("\n")


def load_bundle(directory: str | Path, ablation=frozenset()) -> PromptBundle:
    """Load a bundle from a directory of component files listed in a manifest."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.is_file():
        raise PromptError(f"no manifest.json in {directory}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    examples = tuple(
        (_read(directory / q), _read(directory / a)) for q, a in manifest.get("examples", [])
    )
    intro = ""
    if "examples_intro" in manifest:
        intro = _read(directory / manifest["examples_intro"])
    return PromptBundle(
        role_text=_read(directory / manifest["role"]),
        api_text=_read(directory / manifest["apis"]),
        policies_text=_read(directory / manifest["policies"]),
        examples=examples,
        examples_intro=intro,
        ablation=frozenset(ablation),
    )


def default_bundle(role: str = "simulator", ablation=frozenset()) -> PromptBundle:
    """One of the packaged bundles: 'simulator', 'generator' or 'evaluator'."""
    path = _DATA_DIR / role
    if not path.is_dir():
        raise PromptError(f"no packaged bundle named {role!r}")
    return load_bundle(path, ablation)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _example_block(query: str, answer: str) -> str:
    return f'Query: "\n{query}\n"\n\nAnswer:\n"{answer}"'


def render_components(bundle: PromptBundle) -> str:
    """Concatenate the retained components, in role/APIs/policies/examples order."""
    sections = [f"Role:\n{bundle.role_text}", f"APIs:\n{bundle.api_text}"]
    if "policies" not in bundle.ablation:
        sections.append(f"Policies:\n{bundle.policies_text}")
    if "examples" not in bundle.ablation and bundle.examples:
        parts = []
        if bundle.examples_intro:
            parts.append(bundle.examples_intro)
        parts.extend(_example_block(q, a) for q, a in bundle.examples)
        sections.append("Examples:\n" + "\n\n".join(parts))
    return "\n\n".join(sections)


def build_simulator_prompt(bundle: PromptBundle) -> str:
    """System prompt that turns the model into the static code simulator."""
    return render_components(bundle)


def build_generator_prompt(
    bundle: PromptBundle,
    task: str,
    prior_code: str | None = None,
    feedback: str | None = None,
) -> str:
    """Full generator prompt: components plus the task (and, on correction
    rounds, the previous code and the evaluator feedback to resolve)."""
    head = render_components(bundle)
    return f"{head}\n\n{generator_user_message(task, prior_code, feedback)}"


def generator_user_message(
    task: str, prior_code: str | None = None, feedback: str | None = None
) -> str:
    if not task.strip():
        raise PromptError("task text must not be empty")
    if (prior_code is None) != (feedback is None):
        raise PromptError("correction rounds need both the prior code and the feedback")
    if prior_code is None:
        return f"Task: {task}"
    if not prior_code.strip() or not feedback.strip():
        raise PromptError("correction rounds need non-empty prior code and feedback")
    return (
        f"Previous code:\n```python\n{prior_code.rstrip()}\n```\n\n"
        f"Feedback:\n{feedback.rstrip()}\n\n"
        "Rewrite the code to resolve every mismatch listed in the feedback.\n\n"
        f"Task: {task}"
    )


def build_evaluator_prompt(
    bundle: PromptBundle, task: str, observation: str, framing: str = "observation"
) -> str:
    """Full evaluator prompt embedding the task and the trajectory observation.

    ``framing='code'`` is the direct-analysis variant: the raw program text
    stands in for an observation and the model is told to analyze the code
    itself against the task.
    """
    head = render_components(bundle)
    return f"{head}\n\n{evaluator_user_message(task, observation, framing)}"


def evaluator_user_message(task: str, observation: str, framing: str = "observation") -> str:
    if not task.strip():
        raise PromptError("task text must not be empty")
    if not observation.strip():
        raise PromptError("observation text must not be empty")
    if framing == "code":
        return (
            f"Task: {task}\n\nCode:\n{observation.rstrip()}\n\n"
            "No trajectory observation is available; analyze the code directly "
            "against the task."
        )
    return f"Task: {task}\n\nObservation:\n{observation.rstrip()}"


def simulator_user_message(code: str) -> str:
    if not code.strip():
        raise PromptError("code text must not be empty")
    return f'Query: "\n{code.rstrip()}\n"'


def is_subsequence(smaller: str, larger: str) -> bool:
    """Character-level subsequence check (the ablation-monotonicity relation)."""
    it = iter(larger)
    return all(ch in it for ch in smaller)
