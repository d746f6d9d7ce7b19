"""Static execution of parsed DSL programs.

Walks the syntax tree with a plain variable environment and a pose register,
recording one Action/Transition per state-changing API call.  No physics:
every action is an instantaneous pose delta.  Runtime problems become Fault
records; in lenient mode (the default) the offending statement is skipped so
the rest of the trajectory is still observable, in strict mode the first
fault halts execution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import parser as ast
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
)

DEFAULT_TAKEOFF_ALTITUDE = 2.5


def normalize_yaw(deg: float) -> float:
    """Fold a heading in degrees into (-180, 180]; e.g. 270 becomes -90."""
    if isinstance(deg, bool) or not isinstance(deg, (int, float)):
        raise ValueError(f"yaw must be a number, got {deg!r}")
    if not math.isfinite(deg):
        raise ValueError(f"yaw must be finite, got {deg!r}")
    r = float(deg) % 360.0
    if r > 180.0:
        r -= 360.0
    return r


class _FaultSignal(Exception):
    """Internal: unwinds the current statement when a runtime fault occurs."""

    def __init__(self, fault: Fault):
        super().__init__(fault.message)
        self.fault = fault

    @classmethod
    def at(cls, kind: FaultKind, span: Span, message: str) -> "_FaultSignal":
        return cls(Fault(kind, span, message))


class _BudgetExhausted(Exception):
    """Internal: total-action budget spent; execution halts entirely."""


@dataclass
class _Pose:
    x: float
    y: float
    z: float
    yaw: float
    airborne: bool

    def snapshot(self) -> DroneState:
        return DroneState(self.x, self.y, self.z, self.yaw, self.airborne)


class _Executor:
    def __init__(self, initial: DroneState, limits: ExecutionLimits, h_takeoff: float):
        self.pose = _Pose(initial.x, initial.y, initial.z, normalize_yaw(initial.yaw), initial.airborne)
        self.limits = limits
        self.h_takeoff = float(h_takeoff)
        self.env: dict[str, object] = {}
        self.actions: list[Action] = []
        self.states: list[DroneState] = [self.pose.snapshot()]
        self.transitions: list[Transition] = []
        self.faults: list[Fault] = []

    # -- expressions ---------------------------------------------------------

    def eval(self, node) -> object:
        if isinstance(node, ast.Num):
            return node.value
        if isinstance(node, ast.Name):
            if node.ident not in self.env:
                raise _FaultSignal.at(
                    FaultKind.UNDEFINED_VARIABLE, node.span, f"undefined variable '{node.ident}'"
                )
            return self.env[node.ident]
        if isinstance(node, ast.ListLit):
            return [self.eval(item) for item in node.items]
        if isinstance(node, ast.Index):
            base = self.eval(node.base)
            if not isinstance(base, list):
                raise _FaultSignal.at(
                    FaultKind.NON_NUMERIC_ARGUMENT, node.span, "only lists can be indexed"
                )
            idx = self.eval(node.index)
            if isinstance(idx, float) and idx == int(idx):
                idx = int(idx)
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise _FaultSignal.at(
                    FaultKind.NON_NUMERIC_ARGUMENT, node.span, "list index must be an integer"
                )
            if not -len(base) <= idx < len(base):
                raise _FaultSignal.at(
                    FaultKind.ARITY_ERROR,
                    node.span,
                    f"index {idx} out of range for a {len(base)}-element list",
                )
            return base[idx]
        if isinstance(node, ast.UnaryOp):
            value = self._numeric(self.eval(node.operand), node.span, "unary operand")
            return value if node.op == "+" else -value
        if isinstance(node, ast.BinOp):
            left = self._numeric(self.eval(node.left), node.span, f"left operand of '{node.op}'")
            right = self._numeric(self.eval(node.right), node.span, f"right operand of '{node.op}'")
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            if node.op == "/":
                if right == 0:
                    raise _FaultSignal.at(
                        FaultKind.NON_NUMERIC_ARGUMENT, node.span, "division by zero"
                    )
                return left / right
            raise AssertionError(node.op)
        if isinstance(node, ast.Call):
            return self.call(node)
        raise AssertionError(f"unexpected node {node!r}")

    def _numeric(self, value, span: Span, what: str) -> float | int:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _FaultSignal.at(
                FaultKind.NON_NUMERIC_ARGUMENT, span, f"{what} must be a number, got {type(value).__name__}"
            )
        return value

    # -- API calls -------------------------------------------------------------

    def call(self, node: ast.Call):
        api = node.api_name
        if api is None:
            raise _FaultSignal.at(
                FaultKind.UNSUPPORTED_CONSTRUCT, node.span, f"unknown function '{node.func}'"
            )
        if api == "get_drone_position":
            return [self.pose.x, self.pose.y, self.pose.z]
        if api == "get_yaw":
            return self.pose.yaw
        args = [self.eval(a) for a in node.args]
        if api == "takeoff":
            return self._takeoff(node.span)
        if api == "land":
            return self._land(node.span)
        if api == "fly_to":
            return self._fly_to(args[0], node.span)
        if api == "set_yaw":
            return self._set_yaw(args[0], node.span)
        raise AssertionError(api)

    def _record(self, action: Action, new_pose: _Pose) -> None:
        if len(self.actions) >= self.limits.max_actions:
            self.faults.append(
                Fault(
                    FaultKind.LOOP_BUDGET_EXCEEDED,
                    action.span,
                    f"action budget of {self.limits.max_actions} exhausted",
                )
            )
            raise _BudgetExhausted()
        before = self.pose.snapshot()
        self.pose = new_pose
        after = self.pose.snapshot()
        self.actions.append(action)
        self.states.append(after)
        self.transitions.append(
            Transition(
                after.x - before.x,
                after.y - before.y,
                after.z - before.z,
                normalize_yaw(after.yaw - before.yaw),
            )
        )

    def _takeoff(self, span: Span) -> None:
        if self.pose.airborne:
            raise _FaultSignal.at(FaultKind.DOUBLE_TAKEOFF, span, "takeoff while already airborne")
        new = _Pose(self.pose.x, self.pose.y, self.pose.z - self.h_takeoff, self.pose.yaw, True)
        self._record(Action(ActionKind.TAKEOFF, span), new)

    def _land(self, span: Span) -> None:
        if not self.pose.airborne:
            raise _FaultSignal.at(FaultKind.LAND_WHILE_GROUNDED, span, "land while on the ground")
        new = _Pose(self.pose.x, self.pose.y, 0.0, self.pose.yaw, False)
        self._record(Action(ActionKind.LAND, span), new)

    def _fly_to(self, target, span: Span) -> None:
        if not self.pose.airborne:
            raise _FaultSignal.at(FaultKind.FLY_BEFORE_TAKEOFF, span, "fly_to before takeoff")
        if not isinstance(target, list) or len(target) != 3:
            raise _FaultSignal.at(
                FaultKind.ARITY_ERROR, span, "fly_to takes one 3-element list argument"
            )
        coords = []
        for component in target:
            value = self._numeric(component, span, "fly_to coordinate")
            if not math.isfinite(value):
                raise _FaultSignal.at(
                    FaultKind.NON_NUMERIC_ARGUMENT, span, "fly_to coordinate must be finite"
                )
            coords.append(float(value))
        new = _Pose(coords[0], coords[1], coords[2], self.pose.yaw, True)
        self._record(
            Action(ActionKind.FLY_TO, span, target=(coords[0], coords[1], coords[2])), new
        )

    def _set_yaw(self, heading, span: Span) -> None:
        if not self.pose.airborne:
            raise _FaultSignal.at(FaultKind.FLY_BEFORE_TAKEOFF, span, "set_yaw before takeoff")
        value = self._numeric(heading, span, "set_yaw heading")
        if not math.isfinite(value):
            raise _FaultSignal.at(
                FaultKind.NON_NUMERIC_ARGUMENT, span, "set_yaw heading must be finite"
            )
        new = _Pose(self.pose.x, self.pose.y, self.pose.z, normalize_yaw(value), self.pose.airborne)
        self._record(Action(ActionKind.SET_YAW, span, heading=float(value)), new)

    # -- statements ------------------------------------------------------------

    def run(self, program: ast.Program) -> None:
        try:
            self.exec_block(program.statements)
        except _BudgetExhausted:
            pass

    def exec_block(self, statements) -> None:
        for stmt in statements:
            try:
                self.exec_stmt(stmt)
            except _FaultSignal as sig:
                self.faults.append(sig.fault)
                if self.limits.strict:
                    raise _BudgetExhausted() from None

    def exec_stmt(self, stmt) -> None:
        if isinstance(stmt, ast.ImportStmt):
            return
        if isinstance(stmt, ast.Assign):
            self.env[stmt.name] = self.eval(stmt.value)
            return
        if isinstance(stmt, ast.ExprStmt):
            self.eval(stmt.expr)
            return
        if isinstance(stmt, ast.For):
            self.exec_for(stmt)
            return
        raise AssertionError(f"unexpected statement {stmt!r}")

    def exec_for(self, stmt: ast.For) -> None:
        bounds = []
        for arg in stmt.range_args:
            value = self.eval(arg)
            if isinstance(value, float) and value == int(value):
                value = int(value)
            if not isinstance(value, int) or isinstance(value, bool):
                raise _FaultSignal.at(
                    FaultKind.NON_NUMERIC_ARGUMENT, stmt.span, "range bounds must be integers"
                )
            bounds.append(value)
        indices = range(*bounds)
        if len(indices) > self.limits.max_loop_iterations:
            raise _FaultSignal.at(
                FaultKind.LOOP_BUDGET_EXCEEDED,
                stmt.span,
                f"loop of {len(indices)} iterations exceeds the budget of "
                f"{self.limits.max_loop_iterations}",
            )
        for i in indices:
            self.env[stmt.var] = i
            self.exec_block(stmt.body)


def execute(
    program: ast.Program,
    initial: DroneState | None = None,
    limits: ExecutionLimits | None = None,
    h_takeoff: float = DEFAULT_TAKEOFF_ALTITUDE,
) -> ExecutionTrace:
    """Statically execute a parsed program and return its trace."""
    if initial is None:
        initial = DroneState.initial()
    if limits is None:
        limits = ExecutionLimits()
    ex = _Executor(initial, limits, h_takeoff)
    ex.run(program)
    return ExecutionTrace(
        actions=tuple(ex.actions),
        states=tuple(ex.states),
        transitions=tuple(ex.transitions),
        faults=tuple(ex.faults),
    )


def transitions_of(trace: ExecutionTrace) -> list[Transition]:
    """Project the per-action pose deltas out of a trace."""
    return list(trace.transitions)
