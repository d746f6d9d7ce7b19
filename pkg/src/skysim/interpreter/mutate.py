"""Single-fault mutation of DSL programs.

Injects exactly one error action into a program, deterministically from a
seed: a fly_to component nudged by a fixed nonzero offset, a fly_to literal
sign-flipped, or a set_yaw heading turned by a quarter circle.  The injected
fault is verified by executing both programs and diffing their transition
lists; a candidate that leaves the trajectory unchanged is skipped in a fixed
walk order, so the same (program, seed) pair always yields the same mutant.
"""

from __future__ import annotations

from dataclasses import replace

from . import parser as ast
from .executor import execute
from .types import DroneState, ExecutionLimits, transition_close

OFFSET_METERS = 2.0
YAW_TURN_DEGREES = 90.0

_MUTABLE_APIS = {"fly_to", "set_yaw"}


class MutationError(ValueError):
    """The program has no mutable call site that changes its trajectory."""


def _walk_exprs(node):
    """Yield expression nodes in source order, skipping index subscripts."""
    yield node
    if isinstance(node, ast.ListLit):
        for item in node.items:
            yield from _walk_exprs(item)
    elif isinstance(node, ast.Index):
        # subscripts select a coordinate; perturbing them is not an
        # error *action*, so they are not mutation targets
        yield from _walk_exprs(node.base)
    elif isinstance(node, ast.UnaryOp):
        yield from _walk_exprs(node.operand)
    elif isinstance(node, ast.BinOp):
        yield from _walk_exprs(node.left)
        yield from _walk_exprs(node.right)
    elif isinstance(node, ast.Call):
        for arg in node.args:
            yield from _walk_exprs(arg)


def _iter_calls(statements):
    for stmt in statements:
        if isinstance(stmt, ast.Assign):
            for node in _walk_exprs(stmt.value):
                if isinstance(node, ast.Call):
                    yield node
        elif isinstance(stmt, ast.ExprStmt):
            for node in _walk_exprs(stmt.expr):
                if isinstance(node, ast.Call):
                    yield node
        elif isinstance(stmt, ast.For):
            yield from _iter_calls(stmt.body)


def _candidates(program: ast.Program):
    """(api, node-to-replace) pairs in source order.

    Targets are numeric literals inside mutable call arguments; a call whose
    arguments carry no literal contributes its whole argument expression
    instead, so every fly_to/set_yaw is mutable.
    """
    out = []
    for call in _iter_calls(program.statements):
        api = call.api_name
        if api not in _MUTABLE_APIS:
            continue
        literals = [
            node
            for arg in call.args
            for node in _walk_exprs(arg)
            if isinstance(node, ast.Num)
        ]
        if literals:
            out.extend((api, lit) for lit in literals)
        elif call.args:
            out.append((api, call.args[0]))
    return out


def _rebuild(node, target, replacement):
    """Structurally copy ``node``, swapping the identity-matched target."""
    if node is target:
        return replacement
    if isinstance(node, ast.ListLit):
        return replace(node, items=tuple(_rebuild(i, target, replacement) for i in node.items))
    if isinstance(node, ast.Index):
        return replace(
            node,
            base=_rebuild(node.base, target, replacement),
            index=_rebuild(node.index, target, replacement),
        )
    if isinstance(node, ast.UnaryOp):
        return replace(node, operand=_rebuild(node.operand, target, replacement))
    if isinstance(node, ast.BinOp):
        return replace(
            node,
            left=_rebuild(node.left, target, replacement),
            right=_rebuild(node.right, target, replacement),
        )
    if isinstance(node, ast.Call):
        return replace(node, args=tuple(_rebuild(a, target, replacement) for a in node.args))
    if isinstance(node, ast.Assign):
        return replace(node, value=_rebuild(node.value, target, replacement))
    if isinstance(node, ast.ExprStmt):
        return replace(node, expr=_rebuild(node.expr, target, replacement))
    if isinstance(node, ast.For):
        return replace(node, body=tuple(_rebuild(s, target, replacement) for s in node.body))
    return node


def _mutant(program: ast.Program, api: str, target, op_index: int) -> ast.Program | None:
    if isinstance(target, ast.Num):
        if api == "set_yaw":
            delta = YAW_TURN_DEGREES if op_index == 0 else -YAW_TURN_DEGREES
            replacement = ast.Num(span=target.span, value=target.value + delta)
        elif op_index == 0:
            replacement = ast.Num(span=target.span, value=target.value - OFFSET_METERS)
        else:
            if target.value == 0:
                return None  # sign flip of zero is a no-op
            replacement = ast.Num(span=target.span, value=-target.value)
    else:
        # no literal available: wrap the expression with a fixed offset
        delta = YAW_TURN_DEGREES if api == "set_yaw" else OFFSET_METERS
        sign = "+" if op_index == 0 else "-"
        replacement = ast.BinOp(
            span=target.span, op=sign, left=target, right=ast.Num(span=target.span, value=delta)
        )
    statements = tuple(_rebuild(s, target, replacement) for s in program.statements)
    return ast.Program(statements, source=program.source)


def _traces_differ(a, b, tol: float = 1e-9) -> bool:
    if len(a.transitions) != len(b.transitions):
        return True
    return any(
        not transition_close(x, y, tol, tol) for x, y in zip(a.transitions, b.transitions)
    )


def mutate(
    program: ast.Program,
    seed: int,
    *,
    initial: DroneState | None = None,
    limits: ExecutionLimits | None = None,
    h_takeoff: float = 2.5,
) -> ast.Program:
    """Return a copy of ``program`` with exactly one injected error action.

    The mutant's transition list is guaranteed to differ from the original's
    at one or more positions; raises MutationError when the program has no
    fly_to/set_yaw call site (or none whose perturbation shows up in the
    trajectory).
    """
    candidates = _candidates(program)
    if not candidates:
        raise MutationError("program has no mutable fly_to or set_yaw call")
    baseline = execute(program, initial=initial, limits=limits, h_takeoff=h_takeoff)
    pairs = [(i, op) for i in range(len(candidates)) for op in (0, 1)]
    start = (2 * (seed % len(candidates)) + (seed // len(candidates))) % len(pairs)
    for step in range(len(pairs)):
        cand_index, op_index = pairs[(start + step) % len(pairs)]
        api, target = candidates[cand_index]
        mutant = _mutant(program, api, target, op_index)
        if mutant is None:
            continue
        trial = execute(mutant, initial=initial, limits=limits, h_takeoff=h_takeoff)
        if _traces_differ(baseline, trial):
            return mutant
    raise MutationError("no mutation changes the program's transition list")
