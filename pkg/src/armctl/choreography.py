"""Expansion of matched intents into timed pose goals.

Single-pose intents (grip, release, move, turn) become one goal; the
named routines (pick, pull, dance, home) come from the scripts file whose
steps are validated reachable at load time.  Hold is grip-and-freeze: the
service ignores motion goals until a release or stop.  "Left" means
increasing base azimuth seen from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from armctl.actuation import CalibrationProfile
from armctl.command_grammar import Intent, IntentKind
from armctl.kinematics import (
    ArmGeometry,
    DegenerateTarget,
    JointState,
    PlanarTarget,
    Unreachable,
    forward_planar,
    solve_ik,
    target_from_xyz,
)
from armctl.persistence import SchemaError, read_json, require

SCRIPTED_KINDS = {
    IntentKind.PICK: "pick",
    IntentKind.PULL: "pull",
    IntentKind.DANCE: "dance",
    IntentKind.HOME: "home",
}


class UnknownScript(KeyError):
    pass


class UnreachableStep(ValueError):
    """A goal the arm cannot reach (outside workspace or joint travel)."""


class ScriptValidationError(ValueError):
    def __init__(self, script: str, step: int | None, cause: str):
        where = f"script {script!r}" if step is None else f"script {script!r} step {step}"
        super().__init__(f"{where}: {cause}")
        self.script = script
        self.step = step


@dataclass(frozen=True)
class TimedGoal:
    """One pose goal: planar target plus wrist rotate and gripper angles."""

    target: PlanarTarget
    theta5: float
    gripper: float
    move_time_ms: int | None = None


@dataclass(frozen=True)
class ActionScript:
    name: str
    steps: tuple[TimedGoal, ...]


@dataclass(frozen=True)
class ExpandedPlan:
    goals: tuple[TimedGoal, ...]
    freeze_after: bool = False


def _current_target(geom: ArmGeometry, current: JointState) -> PlanarTarget:
    a, b = forward_planar(geom, current.theta2, current.theta3)
    return PlanarTarget(a=a, b=b, theta1=current.theta1)


def _check_reachable(geom: ArmGeometry, goal: TimedGoal) -> None:
    try:
        solve_ik(geom, goal.target)
    except (Unreachable, DegenerateTarget) as exc:
        raise UnreachableStep(str(exc)) from exc


def expand_intent(
    intent: Intent,
    current: JointState,
    scripts: dict[str, ActionScript],
    geom: ArmGeometry,
    profile: CalibrationProfile,
) -> ExpandedPlan:
    """Turn an intent into the goal sequence the executor will run.

    Every returned goal has been checked against the workspace; base
    rotations are additionally checked against the base servo's travel.
    """
    kind = intent.kind
    here = _current_target(geom, current)

    if kind is IntentKind.STOP:
        return ExpandedPlan(goals=())

    if kind in (IntentKind.GRIP, IntentKind.RELEASE, IntentKind.HOLD):
        jaw = profile.gripper_open if kind is IntentKind.RELEASE else profile.gripper_close
        goal = TimedGoal(target=here, theta5=current.theta5, gripper=jaw)
        _check_reachable(geom, goal)
        return ExpandedPlan(goals=(goal,), freeze_after=kind is IntentKind.HOLD)

    if kind is IntentKind.TURN:
        delta = math.radians(intent.params["degrees"])
        if intent.params["direction"] == "right":
            delta = -delta
        theta1 = current.theta1 + delta
        base = profile.channel_for("theta1")
        if not base.min_angle <= theta1 <= base.max_angle:
            raise UnreachableStep(
                f"theta1 {theta1:.4f} rad outside base travel "
                f"[{base.min_angle:.4f}, {base.max_angle:.4f}]"
            )
        goal = TimedGoal(
            target=PlanarTarget(a=here.a, b=here.b, theta1=theta1),
            theta5=current.theta5,
            gripper=current.gripper,
        )
        _check_reachable(geom, goal)
        return ExpandedPlan(goals=(goal,))

    if kind is IntentKind.MOVE_TO:
        try:
            target = target_from_xyz(intent.params["x"], intent.params["y"], intent.params["z"])
        except DegenerateTarget as exc:
            raise UnreachableStep(str(exc)) from exc
        goal = TimedGoal(target=target, theta5=current.theta5, gripper=current.gripper)
        _check_reachable(geom, goal)
        return ExpandedPlan(goals=(goal,))

    script_name = SCRIPTED_KINDS.get(kind)
    if script_name is None:  # pragma: no cover - all kinds handled above
        raise UnknownScript(kind.value)
    script = scripts.get(script_name)
    if script is None:
        raise UnknownScript(script_name)
    for goal in script.steps:
        _check_reachable(geom, goal)
    return ExpandedPlan(goals=script.steps)


def load_scripts(path: str | Path, geom: ArmGeometry) -> dict[str, ActionScript]:
    """Read the scripts file, converting xyz steps to planar targets and
    proving every step reachable under the given geometry."""
    data = read_json(path)
    if not isinstance(data, list):
        raise SchemaError(f"{path}: top level must be a JSON array")
    if not data:
        raise ScriptValidationError("<file>", None, "no scripts defined")
    scripts: dict[str, ActionScript] = {}
    for i, item in enumerate(data):
        ctx = f"{path}[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(f"{ctx}: script must be an object")
        name = require(item, "name", str, ctx)
        if name in scripts:
            raise ScriptValidationError(name, None, "duplicate script name")
        raw_steps = require(item, "steps", list, ctx)
        if not raw_steps:
            raise ScriptValidationError(name, None, "script has no steps")
        steps = []
        for j, raw in enumerate(raw_steps):
            sctx = f"{ctx}.steps[{j}]"
            if not isinstance(raw, dict):
                raise SchemaError(f"{sctx}: step must be an object")
            x = require(raw, "x", float, sctx)
            y = require(raw, "y", float, sctx)
            z = require(raw, "z", float, sctx)
            theta5 = require(raw, "theta5", float, sctx)
            gripper = require(raw, "gripper", float, sctx)
            time_ms = require(raw, "time_ms", int, sctx)
            if time_ms <= 0:
                raise ScriptValidationError(name, j, f"time_ms must be positive, got {time_ms}")
            try:
                target = target_from_xyz(x, y, z)
                solve_ik(geom, target)
            except (Unreachable, DegenerateTarget) as exc:
                raise ScriptValidationError(name, j, str(exc)) from None
            steps.append(
                TimedGoal(target=target, theta5=theta5, gripper=gripper, move_time_ms=time_ms)
            )
        scripts[name] = ActionScript(name=name, steps=tuple(steps))
    return scripts
