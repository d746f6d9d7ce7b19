"""Scoring: per-task completeness and success, plus corpus-level accuracies.

Completeness is the fraction of ground-truth actions correctly executed,
counted by strict prefix matching: a wrong action invalidates the world
state for everything after it, so credit stops at the first mismatch.
Success additionally requires the full trajectory with no surplus actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..interpreter import Transition, normalize_yaw
from ..llm_roles import Observation, Verdict
from ..pipeline import Tolerances


def _matches(a: Transition, b: Transition, tol: Tolerances) -> bool:
    return (
        abs(a.dx - b.dx) <= tol.position
        and abs(a.dy - b.dy) <= tol.position
        and abs(a.dz - b.dz) <= tol.position
        and abs(normalize_yaw(a.dtheta - b.dtheta)) <= tol.yaw
    )


@dataclass(frozen=True)
class PrefixMatch:
    matched: int  # length of the matching prefix, capped at len(gt)
    surplus: int  # predicted actions beyond a fully matched ground truth


def match_prefix(
    predicted: Sequence[Transition], gt: Sequence[Transition], tol: Tolerances
) -> PrefixMatch:
    if not gt:
        raise ValueError("ground truth must not be empty")
    matched = 0
    for p, g in zip(predicted, gt):
        if not _matches(p, g, tol):
            break
        matched += 1
    surplus = len(predicted) - len(gt) if matched == len(gt) else 0
    return PrefixMatch(matched=matched, surplus=max(surplus, 0))


def completeness(
    predicted: Sequence[Transition], gt: Sequence[Transition], tol: Tolerances | None = None
) -> float:
    """Matched-prefix length over ground-truth length, in [0, 1]."""
    tol = tol or Tolerances()
    return match_prefix(predicted, gt, tol).matched / len(gt)


def success(
    predicted: Sequence[Transition], gt: Sequence[Transition], tol: Tolerances | None = None
) -> bool:
    """True only for a complete trajectory with no extra actions."""
    tol = tol or Tolerances()
    result = match_prefix(predicted, gt, tol)
    return result.matched == len(gt) and result.surplus == 0


# ---------------------------------------------------------------------------
# Corpus accuracies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AccuracyResult:
    correct: int
    total: int
    records: tuple = field(default_factory=tuple)

    @property
    def percentage(self) -> float:
        return 100.0 * self.correct / self.total


def observation_accuracy(
    codes: Sequence[str],
    observer: Callable[[str], Observation],
    reference: Sequence[Sequence[Transition]],
    tol: Tolerances | None = None,
) -> AccuracyResult:
    """TP/N over a corpus: an observation counts as a true positive when its
    structured transition list matches the oracle's for the same code.

    An observation with no structured block is recorded as a miss, never an
    error.
    """
    if not codes:
        raise ValueError("observation accuracy needs a non-empty corpus")
    if len(codes) != len(reference):
        raise ValueError("codes and reference transition lists must pair up")
    tol = tol or Tolerances()
    records = []
    correct = 0
    for code, expected in zip(codes, reference):
        obs = observer(code)
        if obs.structured is None:
            records.append((False, "no structured block"))
            continue
        ok = len(obs.structured) == len(expected) and all(
            _matches(p, g, tol) for p, g in zip(obs.structured, expected)
        )
        correct += ok
        records.append((ok, ""))
    return AccuracyResult(correct=correct, total=len(codes), records=tuple(records))


def evaluation_accuracy(
    correct_codes: Sequence[str],
    incorrect_codes: Sequence[str],
    judge: Callable[[str], Verdict],
) -> AccuracyResult:
    """(TP + TN)/N: MATCH verdicts on correct code plus MISMATCH on incorrect."""
    if not correct_codes or not incorrect_codes:
        raise ValueError("evaluation accuracy needs both a correct and an incorrect set")
    records = []
    hits = 0
    for code in correct_codes:
        verdict = judge(code)
        hits += verdict.match
        records.append((bool(verdict.match), "correct-set"))
    for code in incorrect_codes:
        verdict = judge(code)
        hits += not verdict.match
        records.append((not verdict.match, "incorrect-set"))
    return AccuracyResult(
        correct=hits, total=len(correct_codes) + len(incorrect_codes), records=tuple(records)
    )
