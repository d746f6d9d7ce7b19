"""The three LLM-backed roles: code generator, static simulator, evaluator.

Each role is a thin contract over a prompt bundle and a completion backend:
build the prompt, send it, parse the reply into a domain value.  With a
replay or scripted backend every role is a deterministic function of its
inputs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum

from . import prompts
from .interpreter import Transition
from .llm_client import Backend, CompletionParams, CompletionRequest
from .prompts import PromptBundle


class ObservationSource(str, Enum):
    LLM_SIM = "llm_sim"
    ORACLE_SEMANTIC = "oracle_semantic"
    ORACLE_NUMERICAL = "oracle_numerical"
    NONE = "none"


@dataclass(frozen=True)
class Observation:
    """A trajectory description: prose plus an optional structured delta list."""

    prose: str
    structured: tuple[Transition, ...] | None = None
    source: ObservationSource = ObservationSource.NONE


@dataclass(frozen=True)
class Verdict:
    match: bool
    feedback: str = ""
    mismatched_actions: tuple[tuple[int, str], ...] = field(default_factory=tuple)


class EmptyReplyError(ValueError):
    pass


class MalformedVerdictError(ValueError):
    def __init__(self, reply: str):
        super().__init__("evaluator reply has no parseable VERDICT line")
        self.reply = reply


class DegenerateSimulationError(ValueError):
    pass


_FENCE = re.compile(r"```(?:[A-Za-z0-9_+-]*)\n(.*?)```", re.DOTALL)

# appended by the simulator per its role contract; also accepted in
# "Transitions:" spelling for tolerance to model drift
_TRANSITION_LINE = re.compile(r"^\s*TRANSITIONS:\s*(\[.*\])\s*$", re.IGNORECASE | re.MULTILINE)

_VERDICT_LINE = re.compile(r"^\s*VERDICT:\s*(MATCH|MISMATCH)\s*$", re.IGNORECASE)

_MISMATCH_LINE = re.compile(r"^\s*(?:[-*]\s*)?(?:[Aa]ction\s+)?(\d+)[.):]?\s+(.*\S)\s*$")


def extract_code(reply: str, prefer_last: bool = True) -> str:
    """Pull the program text out of a generator reply.

    Prefers the last fenced block (models often restate before finalizing);
    with no fences the whole reply is taken as code.
    """
    if not reply.strip():
        raise EmptyReplyError("generator returned an empty reply")
    blocks = _FENCE.findall(reply)
    if blocks:
        block = blocks[-1] if prefer_last else blocks[0]
        if not block.strip():
            raise EmptyReplyError("generator reply contained only an empty code block")
        return block.strip("\n") + "\n"
    return reply.strip("\n") + "\n"


def parse_transition_block(reply: str) -> tuple[Transition, ...] | None:
    """Parse the trailing TRANSITIONS: [[...], ...] line, if any and well formed."""
    matches = _TRANSITION_LINE.findall(reply)
    if not matches:
        return None
    try:
        data = json.loads(matches[-1])
        return tuple(Transition.from_seq(row) for row in data)
    except (json.JSONDecodeError, ValueError, TypeError):
        return None


def strip_transition_block(reply: str) -> str:
    return _TRANSITION_LINE.sub("", reply).strip()


def generate(
    task: str,
    bundle: PromptBundle,
    backend: Backend,
    correction: tuple[str, str] | None = None,
    history: tuple[tuple[str, str], ...] = (),
    model: str = "offline",
    params: CompletionParams | None = None,
    prefer_last_block: bool = True,
) -> str:
    """Ask the generator for code; returns the extracted program text.

    ``correction`` is the (prior code, feedback) pair of the round being
    fixed; ``history`` optionally carries earlier rounds when a wider
    correction window is configured.  The code is extracted, not validated.
    """
    if not task.strip():
        raise ValueError("task text must not be empty")
    system = prompts.render_components(bundle)
    messages: list[tuple[str, str]] = []
    for past_code, past_feedback in history:
        messages.append(("user", prompts.generator_user_message(task, past_code, past_feedback)))
        messages.append(("assistant", f"```python\n{past_code.rstrip()}\n```"))
    if correction is None:
        messages.append(("user", prompts.generator_user_message(task)))
    else:
        prior_code, feedback = correction
        messages.append(("user", prompts.generator_user_message(task, prior_code, feedback)))
    request = CompletionRequest(
        system=system,
        messages=tuple(messages),
        model=model,
        params=params or CompletionParams(),
    )
    reply = backend.complete(request)
    return extract_code(reply, prefer_last=prefer_last_block)


def simulate_llm(
    code: str,
    bundle: PromptBundle,
    backend: Backend,
    model: str = "offline",
    params: CompletionParams | None = None,
    min_reply_chars: int = 8,
) -> Observation:
    """Have the LLM statically simulate ``code`` and describe the trajectory."""
    if not code.strip():
        raise ValueError("code text must not be empty")
    request = CompletionRequest(
        system=prompts.build_simulator_prompt(bundle),
        messages=(("user", prompts.simulator_user_message(code)),),
        model=model,
        params=params or CompletionParams(),
    )
    reply = backend.complete(request)
    if len(reply.strip()) < min_reply_chars:
        raise DegenerateSimulationError(
            f"simulation reply is {len(reply.strip())} chars; expected at least {min_reply_chars}"
        )
    structured = parse_transition_block(reply)
    prose = strip_transition_block(reply) if structured is not None else reply.strip()
    return Observation(prose=prose, structured=structured, source=ObservationSource.LLM_SIM)


def parse_verdict(reply: str) -> Verdict:
    """Parse an evaluator reply; raises MalformedVerdictError without a verdict line."""
    lines = reply.strip().splitlines()
    verdict_index = None
    match = False
    for i, line in enumerate(lines):
        m = _VERDICT_LINE.match(line)
        if m:
            verdict_index = i
            match = m.group(1).upper() == "MATCH"
            break
    if verdict_index is None:
        raise MalformedVerdictError(reply)
    feedback = "\n".join(lines[verdict_index + 1 :]).strip()
    if match:
        return Verdict(match=True, feedback=feedback)
    mismatched = []
    for line in feedback.splitlines():
        m = _MISMATCH_LINE.match(line)
        if m:
            mismatched.append((int(m.group(1)), m.group(2)))
    return Verdict(match=False, feedback=feedback, mismatched_actions=tuple(mismatched))


def evaluate(
    task: str,
    observation: Observation,
    bundle: PromptBundle,
    backend: Backend,
    framing: str = "observation",
    model: str = "offline",
    params: CompletionParams | None = None,
    strict: bool = True,
) -> Verdict:
    """Ask the evaluator whether the observation satisfies the task.

    With ``strict=False`` a reply lacking a VERDICT line is coerced to a
    mismatch carrying the raw reply as feedback (the corrective loop's
    conservative reading) instead of raising.
    """
    if not observation.prose.strip():
        raise ValueError("observation prose must not be empty")
    request = CompletionRequest(
        system=prompts.render_components(bundle),
        messages=(("user", prompts.evaluator_user_message(task, observation.prose, framing)),),
        model=model,
        params=params or CompletionParams(),
    )
    reply = backend.complete(request)
    try:
        return parse_verdict(reply)
    except MalformedVerdictError:
        if strict:
            raise
        return Verdict(match=False, feedback=reply.strip())
