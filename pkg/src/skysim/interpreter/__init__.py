"""Deterministic static interpreter for the drone-control DSL.

Parses the textual operation code, executes it against an NED pose model,
and renders trajectory observations.  Serves as the ground-truth oracle for
scoring and as the engine behind the non-LLM simulation baselines.
"""

from .executor import DEFAULT_TAKEOFF_ALTITUDE, execute, normalize_yaw, transitions_of
from .mutate import MutationError, mutate
from .parser import (
    ArityParseError,
    DslError,
    DslSyntaxError,
    Program,
    UnsupportedConstructError,
    parse,
    unparse,
)
from .render import (
    ObservationParseError,
    parse_semantic_observation,
    render_numerical,
    render_semantic,
)
from .types import (
    Action,
    ActionKind,
    DroneState,
    ExecutionLimits,
    ExecutionTrace,
    Fault,
    FaultKind,
    Span,
    Transition,
    transition_close,
)

__all__ = [
    "Action",
    "ActionKind",
    "ArityParseError",
    "DEFAULT_TAKEOFF_ALTITUDE",
    "DroneState",
    "DslError",
    "DslSyntaxError",
    "ExecutionLimits",
    "ExecutionTrace",
    "Fault",
    "FaultKind",
    "MutationError",
    "ObservationParseError",
    "Program",
    "Span",
    "Transition",
    "UnsupportedConstructError",
    "execute",
    "mutate",
    "normalize_yaw",
    "parse",
    "parse_semantic_observation",
    "render_numerical",
    "render_semantic",
    "transition_close",
    "transitions_of",
    "unparse",
]
