"""Command execution service: the glue from operator text to servo
motion.

One command at a time: text is matched, expanded into pose goals, each
goal is solved to joint angles, scheduled as pulse widths, framed onto
the wire, and fed to the emulated controller whose plants are ticked
until they settle.  Every wire frame and trajectory tick is recorded in
a per-command trace; errors at any stage are captured into the outcome
rather than aborting the service.
"""

from __future__ import annotations

import dataclasses
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from armctl.actuation import (
    AngleOutOfRange,
    CalibrationProfile,
    load_profile,
    pulse_to_angle,
    schedule_from_joints,
)
from armctl.choreography import (
    ActionScript,
    TimedGoal,
    UnknownScript,
    UnreachableStep,
    expand_intent,
    load_scripts,
)
from armctl.command_grammar import (
    BadParameter,
    Dictionary,
    EmptyInput,
    IntentKind,
    NotRecognized,
    load_dictionary,
    match_command,
    respond,
)
from armctl.firmware_plant import (
    TICK_US,
    ArmController,
    NotSettled,
    ServoPlant,
    SimClock,
    TrajectoryPoint,
    run_until_settled,
    trajectory_to_csv,
)
from armctl.kinematics import (
    ArmGeometry,
    DegenerateTarget,
    JointState,
    Unreachable,
    solve_ik,
)
from armctl.persistence import SchemaError, read_json, require
from armctl.wire_protocol import WireFrame, encode_frame

DEFAULT_TICK_BUDGET = 2000

# Intents refused while the arm is holding an object.
MOTION_KINDS = {
    IntentKind.TURN,
    IntentKind.MOVE_TO,
    IntentKind.PICK,
    IntentKind.PULL,
    IntentKind.DANCE,
    IntentKind.HOME,
}


def _default_data(name: str) -> Path:
    return Path(str(resources.files("armctl") / "data" / name))


@dataclass(frozen=True)
class SessionConfig:
    geometry: ArmGeometry = field(default_factory=ArmGeometry)
    dictionary_path: Path = field(default_factory=lambda: _default_data("dictionary.json"))
    scripts_path: Path = field(default_factory=lambda: _default_data("scripts.json"))
    calibration_path: Path = field(default_factory=lambda: _default_data("calibration.json"))
    tick_budget: int = DEFAULT_TICK_BUDGET
    realtime: bool = False

    def to_dict(self) -> dict:
        return {
            "geometry": {"l1": self.geometry.l1, "l2": self.geometry.l2},
            "dictionary": str(self.dictionary_path),
            "scripts": str(self.scripts_path),
            "calibration": str(self.calibration_path),
            "tick_budget": self.tick_budget,
            "realtime": self.realtime,
        }


def load_config(path: str | Path | None = None) -> SessionConfig:
    """Build a session config from a JSON file, the ARM_CONFIG env var,
    or the packaged defaults.  Relative file paths resolve against the
    config file's directory."""
    if path is None:
        path = os.environ.get("ARM_CONFIG")
    if path is None:
        return SessionConfig()
    path = Path(path)
    data = read_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be a JSON object")
    base = path.parent

    def resolve(key: str, default: Path) -> Path:
        if key not in data:
            return default
        value = require(data, key, str, str(path))
        p = Path(value)
        return p if p.is_absolute() else base / p

    geometry = ArmGeometry()
    if "geometry" in data:
        raw = require(data, "geometry", dict, str(path))
        try:
            geometry = ArmGeometry(
                l1=require(raw, "l1", float, f"{path}.geometry"),
                l2=require(raw, "l2", float, f"{path}.geometry"),
            )
        except ValueError as exc:
            raise SchemaError(f"{path}.geometry: {exc}") from None
    tick_budget = data.get("tick_budget", DEFAULT_TICK_BUDGET)
    if not isinstance(tick_budget, int) or isinstance(tick_budget, bool) or tick_budget <= 0:
        raise SchemaError(f"{path}: tick_budget must be a positive integer")
    realtime = data.get("realtime", False)
    if not isinstance(realtime, bool):
        raise SchemaError(f"{path}: realtime must be a boolean")
    return SessionConfig(
        geometry=geometry,
        dictionary_path=resolve("dictionary", _default_data("dictionary.json")),
        scripts_path=resolve("scripts", _default_data("scripts.json")),
        calibration_path=resolve("calibration", _default_data("calibration.json")),
        tick_budget=tick_budget,
        realtime=realtime,
    )


@dataclass
class Trace:
    trace_id: str
    command: str
    frames: list[bytes] = field(default_factory=list)
    points: list[TrajectoryPoint] = field(default_factory=list)

    def frames_log(self) -> str:
        """One frame per line; the CR terminator is rendered as '\\r'."""
        return "".join(
            raw.decode("ascii").replace("\r", "\\r") + "\n" for raw in self.frames
        )

    def trajectory_csv(self) -> str:
        return trajectory_to_csv(self.points)


@dataclass
class CommandOutcome:
    request_id: int
    text: str
    response: str
    settled: bool
    goal_count: int
    final_state: JointState
    trace_id: str
    matched_phrase: str | None = None
    confidence: float | None = None
    intent_kind: str | None = None
    error_kind: str | None = None
    error_detail: str | None = None

    def to_dict(self) -> dict:
        return {
            "request_id": self.request_id,
            "text": self.text,
            "response": self.response,
            "settled": self.settled,
            "goal_count": self.goal_count,
            "final_state": list(self.final_state.as_tuple()),
            "trace_id": self.trace_id,
            "matched_phrase": self.matched_phrase,
            "confidence": self.confidence,
            "intent_kind": self.intent_kind,
            "error_kind": self.error_kind,
            "error_detail": self.error_detail,
        }


class ArmService:
    """Owns the dictionary, scripts, calibration, and the simulated arm.

    process_command() is synchronous and must not be called concurrently;
    the API layer serializes callers through a queue (the arm is a single
    physical resource).
    """

    def __init__(self, config: SessionConfig | None = None):
        self.config = config or SessionConfig()
        self.geometry = self.config.geometry
        self.dictionary: Dictionary = load_dictionary(self.config.dictionary_path)
        self.scripts: dict[str, ActionScript] = load_scripts(
            self.config.scripts_path, self.geometry
        )
        if "home" not in self.scripts:
            raise SchemaError(f"{self.config.scripts_path}: a 'home' script is required")
        self.profile: CalibrationProfile = load_profile(self.config.calibration_path)
        self.held = False
        self.traces: dict[str, Trace] = {}
        self._next_id = 1
        self._tick_listeners: list = []
        self._active_command: str | None = None
        self.controller = ArmController()
        self.plants: list[ServoPlant] = []
        self._reset_to_home()

    # -- plant setup ---------------------------------------------------

    def _home_joints(self) -> JointState:
        goal = self.scripts["home"].steps[-1]
        sol, _ = solve_ik(self.geometry, goal.target)
        return JointState(
            theta1=goal.target.theta1,
            theta2=sol.theta2,
            theta3=sol.theta3,
            theta4=sol.theta4,
            theta5=goal.theta5,
            gripper=goal.gripper,
        )

    def _reset_to_home(self) -> None:
        """Start settled on the (quantized) home pose."""
        home = self._home_joints()
        schedule = schedule_from_joints(self.profile, home)
        self.controller = ArmController()
        self.plants = []
        for cmd in schedule.commands:
            self.controller.registers[cmd.channel] = cmd.width_us
            channel = next(ch for ch in self.profile.channels if ch.id == cmd.channel)
            self.plants.append(
                ServoPlant(channel=channel, position=pulse_to_angle(channel, cmd.width_us))
            )

    # -- state ----------------------------------------------------------

    def joint_state(self) -> JointState:
        return JointState(*(p.position for p in self.plants))

    def registers(self) -> tuple[int, ...]:
        return tuple(self.controller.registers[ch] for ch in range(6))

    def set_profile(self, profile: CalibrationProfile) -> None:
        """Swap calibration; takes effect from the next command."""
        self.profile = profile

    def add_tick_listener(self, listener) -> None:
        self._tick_listeners.append(listener)

    def remove_tick_listener(self, listener) -> None:
        if listener in self._tick_listeners:
            self._tick_listeners.remove(listener)

    def tick_event(self, point: TrajectoryPoint) -> dict:
        return {
            "elapsed_ms": point.elapsed_us // 1000,
            "joints": list(point.joints.as_tuple()),
            "registers": list(point.widths),
            "active_command": self._active_command,
        }

    def _publish(self, point: TrajectoryPoint) -> None:
        event = self.tick_event(point)
        for listener in list(self._tick_listeners):
            listener(event)

    # -- command pipeline ------------------------------------------------

    def process_command(self, text: str) -> CommandOutcome:
        rid = self._next_id
        self._next_id += 1
        trace_id = f"{rid:06d}"
        trace = Trace(trace_id=trace_id, command=text)
        self.traces[trace_id] = trace
        self._active_command = text

        outcome = CommandOutcome(
            request_id=rid,
            text=text,
            response="",
            settled=False,
            goal_count=0,
            final_state=self.joint_state(),
            trace_id=trace_id,
        )

        try:
            self._run_pipeline(text, trace, outcome)
        except EmptyInput as exc:
            self._fail(outcome, "empty_input", exc)
        except NotRecognized as exc:
            self._fail(outcome, "not_recognized", exc)
        except BadParameter as exc:
            self._fail(outcome, "bad_parameter", exc)
        except UnknownScript as exc:
            self._fail(outcome, "unknown_script", exc)
        except (Unreachable, UnreachableStep, DegenerateTarget) as exc:
            self._fail(outcome, "unreachable", exc)
        except AngleOutOfRange as exc:
            self._fail(outcome, "angle_out_of_range", exc)
        except NotSettled as exc:
            self._fail(outcome, "not_settled", exc)

        outcome.final_state = self.joint_state()
        self._active_command = None
        return outcome

    def _fail(self, outcome: CommandOutcome, kind: str, exc: Exception) -> None:
        outcome.error_kind = kind
        outcome.error_detail = str(exc)
        outcome.response = respond(kind)

    def _run_pipeline(self, text: str, trace: Trace, outcome: CommandOutcome) -> None:
        result = match_command(self.dictionary, text)
        outcome.matched_phrase = result.matched_phrase
        outcome.confidence = result.confidence
        outcome.intent_kind = result.intent.kind.value

        if self.held and result.intent.kind in MOTION_KINDS:
            outcome.error_kind = "held"
            outcome.error_detail = "arm is holding; release or stop first"
            outcome.response = respond("held")
            return

        plan = expand_intent(
            result.intent, self.joint_state(), self.scripts, self.geometry, self.profile
        )
        outcome.goal_count = len(plan.goals)

        budget = self.config.tick_budget
        clock = SimClock()
        for goal in plan.goals:
            used = self._execute_goal(goal, trace, clock, budget)
            budget -= used
        # No goals (stop) settles trivially; flags change regardless.
        if result.intent.kind in (IntentKind.RELEASE, IntentKind.STOP):
            self.held = False
        if plan.freeze_after:
            self.held = True
        outcome.settled = True
        outcome.response = respond(result.intent.kind.value)

    def _execute_goal(self, goal: TimedGoal, trace: Trace, clock: SimClock,
                      budget: int) -> int:
        sol, _ = solve_ik(self.geometry, goal.target)
        joints = JointState(
            theta1=goal.target.theta1,
            theta2=sol.theta2,
            theta3=sol.theta3,
            theta4=sol.theta4,
            theta5=goal.theta5,
            gripper=goal.gripper,
        )
        schedule = schedule_from_joints(self.profile, joints)
        frame = WireFrame(
            groups=tuple((c.channel, c.width_us) for c in schedule.commands),
            move_time_ms=goal.move_time_ms,
        )
        raw = encode_frame(frame)
        trace.frames.append(raw)
        self.controller.feed(raw)

        def record(point: TrajectoryPoint) -> None:
            renumbered = dataclasses.replace(point, tick=len(trace.points))
            trace.points.append(renumbered)
            self._publish(renumbered)
            if self.config.realtime:
                time.sleep(TICK_US / 1e6)

        if budget <= 0:
            raise NotSettled("tick budget exhausted", trace.points)
        trajectory = run_until_settled(
            self.controller, self.plants, max_ticks=budget, clock=clock, on_tick=record
        )
        return len(trajectory)

    # -- validation -----------------------------------------------------

    def validation_report(self) -> dict:
        return {
            "dictionary": {
                "path": str(self.config.dictionary_path),
                "entries": len(self.dictionary.entries),
            },
            "scripts": {
                "path": str(self.config.scripts_path),
                "names": sorted(self.scripts),
            },
            "calibration": {
                "path": str(self.config.calibration_path),
                "channels": len(self.profile.channels),
            },
            "geometry": {"l1": self.geometry.l1, "l2": self.geometry.l2},
        }
