"""Value types shared by the DSL parser, executor and renderers.

Everything here is immutable after construction; instances are safe to share
across threads or processes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum


@dataclass(frozen=True)
class Span:
    """Source location (1-based line, 0-based column) of a token or node."""

    line: int
    col: int

    def as_dict(self) -> dict:
        return {"line": self.line, "col": self.col}


@dataclass(frozen=True)
class DroneState:
    """Pose of the drone in NED world coordinates.

    x points north, y points east, z points down (so climbing makes z more
    negative).  yaw is in degrees, clockwise-positive, kept in (-180, 180].
    """

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    yaw: float = 0.0
    airborne: bool = False

    @classmethod
    def initial(cls, airborne: bool = False) -> "DroneState":
        return cls(0.0, 0.0, 0.0, 0.0, airborne)

    def as_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "z": self.z,
            "yaw": self.yaw,
            "airborne": self.airborne,
        }


class ActionKind(str, Enum):
    TAKEOFF = "takeoff"
    LAND = "land"
    FLY_TO = "fly_to"
    SET_YAW = "set_yaw"


@dataclass(frozen=True)
class Action:
    """One state-changing API call, as executed.

    ``target`` is the absolute NED target of a fly_to; ``heading`` is the raw
    (pre-normalization) argument of a set_yaw.  Exactly one call site in the
    source produces each Action.
    """

    kind: ActionKind
    span: Span
    target: tuple[float, float, float] | None = None
    heading: float | None = None

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind.value, "span": self.span.as_dict()}
        if self.target is not None:
            out["target"] = list(self.target)
        if self.heading is not None:
            out["heading"] = self.heading
        return out


@dataclass(frozen=True)
class Transition:
    """Pose delta [dx, dy, dz, dtheta] produced by a single action.

    dtheta is the signed shortest rotation in degrees, in (-180, 180].
    """

    dx: float
    dy: float
    dz: float
    dtheta: float

    def as_list(self) -> list[float]:
        return [self.dx, self.dy, self.dz, self.dtheta]

    @classmethod
    def from_seq(cls, seq) -> "Transition":
        if len(seq) != 4:
            raise ValueError(f"transition needs 4 components, got {len(seq)}")
        vals = []
        for v in seq:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"transition component must be a finite number, got {v!r}")
            vals.append(float(v))
        return cls(*vals)


class FaultKind(str, Enum):
    FLY_BEFORE_TAKEOFF = "FlyBeforeTakeoff"
    DOUBLE_TAKEOFF = "DoubleTakeoff"
    LAND_WHILE_GROUNDED = "LandWhileGrounded"
    UNDEFINED_VARIABLE = "UndefinedVariable"
    ARITY_ERROR = "ArityError"
    NON_NUMERIC_ARGUMENT = "NonNumericArgument"
    UNSUPPORTED_CONSTRUCT = "UnsupportedConstruct"
    LOOP_BUDGET_EXCEEDED = "LoopBudgetExceeded"


# Faults that break the takeoff/land ordering contract; a trace carrying one
# is scored as mismatching every task.
ORDER_VIOLATIONS = frozenset(
    {FaultKind.FLY_BEFORE_TAKEOFF, FaultKind.DOUBLE_TAKEOFF, FaultKind.LAND_WHILE_GROUNDED}
)


@dataclass(frozen=True)
class Fault:
    kind: FaultKind
    span: Span
    message: str

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "span": self.span.as_dict(), "message": self.message}


@dataclass(frozen=True)
class ExecutionLimits:
    """Static-execution budget; keeps adversarial input terminating."""

    max_actions: int = 10_000
    max_loop_iterations: int = 1_000
    strict: bool = False


@dataclass(frozen=True)
class ExecutionTrace:
    """Full record of a static execution.

    len(states) == len(actions) + 1 and transitions[k] is the pose delta from
    states[k] to states[k + 1].  Faulted calls are recorded in ``faults`` and
    never appear in ``actions``, so replaying the trace reproduces it.
    """

    actions: tuple[Action, ...]
    states: tuple[DroneState, ...]
    transitions: tuple[Transition, ...]
    faults: tuple[Fault, ...]

    @property
    def order_violating(self) -> bool:
        return any(f.kind in ORDER_VIOLATIONS for f in self.faults)

    def as_dict(self) -> dict:
        return {
            "actions": [a.as_dict() for a in self.actions],
            "states": [s.as_dict() for s in self.states],
            "transitions": [t.as_list() for t in self.transitions],
            "faults": [f.as_dict() for f in self.faults],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.as_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "ExecutionTrace":
        data = json.loads(text)
        actions = tuple(
            Action(
                kind=ActionKind(a["kind"]),
                span=Span(a["span"]["line"], a["span"]["col"]),
                target=tuple(a["target"]) if "target" in a else None,
                heading=a.get("heading"),
            )
            for a in data["actions"]
        )
        states = tuple(
            DroneState(s["x"], s["y"], s["z"], s["yaw"], s["airborne"]) for s in data["states"]
        )
        transitions = tuple(Transition.from_seq(t) for t in data["transitions"])
        faults = tuple(
            Fault(FaultKind(f["kind"]), Span(f["span"]["line"], f["span"]["col"]), f["message"])
            for f in data["faults"]
        )
        return cls(actions, states, transitions, faults)


def transition_close(a: Transition, b: Transition, pos_tol: float = 1e-9, yaw_tol: float = 1e-9) -> bool:
    """Component-wise comparison; yaw compared on the circle."""
    from .executor import normalize_yaw  # local import to avoid a cycle

    return (
        abs(a.dx - b.dx) <= pos_tol
        and abs(a.dy - b.dy) <= pos_tol
        and abs(a.dz - b.dz) <= pos_tol
        and abs(normalize_yaw(a.dtheta - b.dtheta)) <= yaw_tol
    )
