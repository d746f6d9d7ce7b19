"""Deterministic observation renderers for execution traces.

Two baseline renderings of the same trace: a semantic narration (one clause
per action, compass directions derived from signed NED deltas) and a bare
numerical listing of successive absolute states.  Both are pure functions of
the trace, so identical traces yield byte-identical text.

The narration grammar is fixed and invertible; ``parse_semantic_observation``
recovers the transition list from narration text and is used both for
round-trip testing and for grading prose observations.
"""

from __future__ import annotations

import re

from .types import DroneState, ExecutionTrace, Transition

_COMPASS = [
    (0.0, "north"),
    (45.0, "northeast"),
    (90.0, "east"),
    (135.0, "southeast"),
    (180.0, "south"),
    (-135.0, "southwest"),
    (-90.0, "west"),
    (-45.0, "northwest"),
]


def _fmt(value: float) -> str:
    r = round(value, 9)
    if r == int(r):
        return str(int(r))
    return f"{r:.9g}"


def _meters(value: float) -> str:
    text = _fmt(value)
    return f"{text} meter" if text == "1" else f"{text} meters"


def _facing(yaw: float, changed: bool) -> str:
    lead = "now facing" if changed else "still facing"
    for angle, name in _COMPASS:
        if abs(yaw - angle) <= 1e-9:
            return f"{lead} {name}"
    return f"{lead} {_fmt(yaw)} degrees"


def _join(parts: list[str]) -> str:
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + f", and {parts[-1]}"


def _clause(transition: Transition, after: DroneState) -> str:
    dx, dy, dz, dtheta = transition.dx, transition.dy, transition.dz, transition.dtheta
    if dtheta != 0:
        direction = "clockwise" if dtheta > 0 else "counterclockwise"
        return f"rotates {_fmt(abs(dtheta))} degrees {direction} ({_facing(after.yaw, True)})"
    parts = []
    if dx != 0:
        parts.append(f"{_meters(abs(dx))} {'north' if dx > 0 else 'south'}")
    if dy != 0:
        parts.append(f"{_meters(abs(dy))} {'east' if dy > 0 else 'west'}")
    if dz != 0:
        parts.append(f"{_meters(abs(dz))} {'up' if dz < 0 else 'down'}")
    if not parts:
        return "holds its position"
    return f"flies {_join(parts)}"


def _takeoff_clause(transition: Transition) -> str:
    if transition.dz != 0:
        return f"takes off and climbs {_meters(abs(transition.dz))}"
    return "takes off"


def _land_clause(transition: Transition) -> str:
    if transition.dz != 0:
        return f"lands, descending {_meters(abs(transition.dz))}"
    return "lands"


def _setyaw_clause(transition: Transition, after: DroneState) -> str:
    if transition.dtheta == 0:
        return f"holds its heading ({_facing(after.yaw, False)})"
    direction = "clockwise" if transition.dtheta > 0 else "counterclockwise"
    return f"rotates {_fmt(abs(transition.dtheta))} degrees {direction} ({_facing(after.yaw, True)})"


def render_semantic(trace: ExecutionTrace) -> str:
    """Narrate a trace as one paragraph, one clause per executed action."""
    from .types import ActionKind

    if not trace.actions:
        return "The drone performs no actions."
    clauses = []
    for action, transition, after in zip(trace.actions, trace.transitions, trace.states[1:]):
        if action.kind is ActionKind.TAKEOFF:
            clauses.append(_takeoff_clause(transition))
        elif action.kind is ActionKind.LAND:
            clauses.append(_land_clause(transition))
        elif action.kind is ActionKind.SET_YAW:
            clauses.append(_setyaw_clause(transition, after))
        else:
            clauses.append(_clause(transition, after))
    if len(clauses) == 1:
        return f"The drone {clauses[0]}."
    sentences = [f"First, the drone {clauses[0]}.", f"Next, it {clauses[1]}."]
    sentences.extend(f"Then it {clause}." for clause in clauses[2:])
    return " ".join(sentences)


def render_numerical(trace: ExecutionTrace) -> str:
    """List successive absolute states, one '(x, y, z, yaw)' line per state."""
    def cell(v: float) -> str:
        return f"{round(v, 2) + 0.0:.2f}"

    lines = [f"({cell(s.x)}, {cell(s.y)}, {cell(s.z)}, {cell(s.yaw)})" for s in trace.states]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Inverse of the narration grammar
# ---------------------------------------------------------------------------

_NUM = r"(\d+(?:\.\d+)?(?:e[+-]?\d+)?)"
_LEAD = re.compile(r"^(?:First, the drone |Next, it |Then it |The drone )")
_TAKEOFF = re.compile(rf"^takes off(?: and climbs {_NUM} meters?)?$")
_LAND = re.compile(rf"^lands(?:, descending {_NUM} meters?)?$")
_ROTATE = re.compile(
    rf"^rotates {_NUM} degrees (clockwise|counterclockwise) \((?:now|still) facing [^)]*\)$"
)
_HOLD_HEADING = re.compile(r"^holds its heading \((?:now|still) facing [^)]*\)$")
_FLY_PART = re.compile(rf"^{_NUM} meters? (north|south|east|west|up|down)$")

_AXES = {
    "north": (0, 1.0),
    "south": (0, -1.0),
    "east": (1, 1.0),
    "west": (1, -1.0),
    "down": (2, 1.0),
    "up": (2, -1.0),
}


class ObservationParseError(ValueError):
    pass


def _parse_clause(clause: str) -> Transition:
    m = _TAKEOFF.match(clause)
    if m:
        dz = -float(m.group(1)) if m.group(1) else 0.0
        return Transition(0.0, 0.0, dz, 0.0)
    m = _LAND.match(clause)
    if m:
        dz = float(m.group(1)) if m.group(1) else 0.0
        return Transition(0.0, 0.0, dz, 0.0)
    m = _ROTATE.match(clause)
    if m:
        sign = 1.0 if m.group(2) == "clockwise" else -1.0
        return Transition(0.0, 0.0, 0.0, sign * float(m.group(1)))
    if _HOLD_HEADING.match(clause) or clause == "holds its position":
        return Transition(0.0, 0.0, 0.0, 0.0)
    if clause.startswith("flies "):
        deltas = [0.0, 0.0, 0.0]
        body = clause[len("flies "):]
        for part in re.split(r", and |, | and ", body):
            m = _FLY_PART.match(part)
            if not m:
                raise ObservationParseError(f"unrecognized motion {part!r}")
            axis, sign = _AXES[m.group(2)]
            deltas[axis] += sign * float(m.group(1))
        return Transition(deltas[0], deltas[1], deltas[2], 0.0)
    raise ObservationParseError(f"unrecognized clause {clause!r}")


def parse_semantic_observation(text: str) -> list[Transition]:
    """Recover per-action transitions from narration produced by render_semantic."""
    stripped = text.strip()
    if stripped == "The drone performs no actions.":
        return []
    transitions = []
    for sentence in re.split(r"\.(?:\s+|$)", stripped):
        if not sentence:
            continue
        clause = _LEAD.sub("", sentence)
        if clause == sentence:
            raise ObservationParseError(f"sentence lacks a known connector: {sentence!r}")
        transitions.append(_parse_clause(clause))
    return transitions
