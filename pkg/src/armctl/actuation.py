"""Joint angles to servo PWM pulse widths.

Servo position is commanded by the on-time t inside a fixed T = 20 ms
frame; the nominal hobby-servo map is 1 ms at 0 rad to 2 ms at pi rad.
Widths are integer microseconds -- 1 us resolution bounds the round-trip
angle error at pi/1000 rad for a default channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from armctl.kinematics import JOINT_NAMES, JointState
from armctl.persistence import SchemaError, read_json, require, write_json

FRAME_PERIOD_US = 20000


class AngleOutOfRange(ValueError):
    """Commanded angle exceeds the servo's calibrated travel (never clamped)."""


class PulseOutOfRange(ValueError):
    """Pulse width outside the channel's calibrated [min_pulse, max_pulse]."""


class InvalidDuty(ValueError):
    """On-time longer than the frame period (or bad period)."""


@dataclass(frozen=True)
class ServoChannel:
    """Calibration for one servo output.

    Channels 0..5 drive theta1..theta5 and the gripper, in that order.
    Defaults reproduce the nominal 1-2 ms / 0-180 degree map.
    """

    id: int
    min_pulse: int = 1000
    max_pulse: int = 2000
    min_angle: float = 0.0
    max_angle: float = 3.141592653589793
    inverted: bool = False
    model: str = "HS-422"

    def __post_init__(self):
        if not 0 <= self.id <= 5:
            raise ValueError(f"channel id must be 0..5, got {self.id}")
        if self.min_pulse >= self.max_pulse:
            raise ValueError(f"channel {self.id}: min_pulse must be < max_pulse")
        if self.min_angle >= self.max_angle:
            raise ValueError(f"channel {self.id}: min_angle must be < max_angle")


@dataclass(frozen=True)
class PulseCommand:
    channel: int
    width_us: int


@dataclass(frozen=True)
class PulseSchedule:
    """One PWM frame: at most one command per channel, fixed 20 ms period."""

    commands: tuple[PulseCommand, ...]
    period_us: int = FRAME_PERIOD_US

    def __post_init__(self):
        if self.period_us != FRAME_PERIOD_US:
            raise ValueError(f"frame period is fixed at {FRAME_PERIOD_US} us")
        channels = [c.channel for c in self.commands]
        if len(channels) != len(set(channels)):
            raise ValueError("duplicate channel in schedule")


def angle_to_pulse(ch: ServoChannel, angle: float) -> int:
    """Linear map of angle to on-time, rounded to the nearest microsecond."""
    if not ch.min_angle <= angle <= ch.max_angle:
        raise AngleOutOfRange(
            f"channel {ch.id}: angle {angle:.6g} rad outside "
            f"[{ch.min_angle:.6g}, {ch.max_angle:.6g}]"
        )
    frac = (angle - ch.min_angle) / (ch.max_angle - ch.min_angle)
    if ch.inverted:
        frac = 1.0 - frac
    return round(ch.min_pulse + frac * (ch.max_pulse - ch.min_pulse))


def pulse_to_angle(ch: ServoChannel, width_us: int) -> float:
    """Inverse of angle_to_pulse, exact up to the 1 us quantization."""
    if not ch.min_pulse <= width_us <= ch.max_pulse:
        raise PulseOutOfRange(
            f"channel {ch.id}: width {width_us} us outside "
            f"[{ch.min_pulse}, {ch.max_pulse}]"
        )
    frac = (width_us - ch.min_pulse) / (ch.max_pulse - ch.min_pulse)
    if ch.inverted:
        frac = 1.0 - frac
    return ch.min_angle + frac * (ch.max_angle - ch.min_angle)


def duty_cycle(width_us: int, period_us: int = FRAME_PERIOD_US) -> float:
    """Fraction of the period the line is high: t/T, 1.0 being fully on."""
    if period_us <= 0:
        raise InvalidDuty(f"period must be positive, got {period_us}")
    if not 0 <= width_us <= period_us:
        raise InvalidDuty(f"on-time {width_us} us outside [0, {period_us}] us")
    return width_us / period_us


@dataclass(frozen=True)
class CalibrationProfile:
    """Immutable set of servo channels, one per joint (id = joint index).

    Also carries the gripper's open/close jaw angles used by the
    choreography layer.
    """

    channels: tuple[ServoChannel, ...] = field(
        default_factory=lambda: tuple(ServoChannel(id=i) for i in range(6))
    )
    gripper_close: float = 0.0
    gripper_open: float = 1.5707963267948966

    def __post_init__(self):
        ids = [c.id for c in self.channels]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate channel id in profile")

    def channel_for(self, joint: str) -> ServoChannel:
        idx = JOINT_NAMES.index(joint)
        for ch in self.channels:
            if ch.id == idx:
                return ch
        raise KeyError(f"no channel for joint {joint} (id {idx}) in profile")


def schedule_from_joints(profile: CalibrationProfile, state: JointState) -> PulseSchedule:
    """One PulseCommand per joint from the profile's calibration maps."""
    by_id = {ch.id: ch for ch in profile.channels}
    commands = []
    for idx, joint in enumerate(JOINT_NAMES):
        ch = by_id.get(idx)
        if ch is None:
            raise KeyError(f"profile has no channel for joint {joint} (id {idx})")
        angle = state.as_tuple()[idx]
        try:
            commands.append(PulseCommand(channel=idx, width_us=angle_to_pulse(ch, angle)))
        except AngleOutOfRange as exc:
            raise AngleOutOfRange(f"joint {joint}: {exc}") from None
    return PulseSchedule(commands=tuple(commands))


def parse_profile(data, context: str = "<calibration>") -> CalibrationProfile:
    if not isinstance(data, dict):
        raise SchemaError(f"{context}: top level must be a JSON object")
    raw_channels = require(data, "channels", list, context)
    channels = []
    for i, raw in enumerate(raw_channels):
        ctx = f"{context}.channels[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{ctx}: channel must be an object")
        try:
            channels.append(ServoChannel(
                id=require(raw, "id", int, ctx),
                min_pulse=require(raw, "min_pulse", int, ctx),
                max_pulse=require(raw, "max_pulse", int, ctx),
                min_angle=require(raw, "min_angle", float, ctx),
                max_angle=require(raw, "max_angle", float, ctx),
                inverted=require(raw, "inverted", bool, ctx),
                model=require(raw, "model", str, ctx),
            ))
        except ValueError as exc:
            raise SchemaError(f"{ctx}: {exc}") from None
    try:
        return CalibrationProfile(
            channels=tuple(channels),
            gripper_close=require(data, "gripper_close", float, context),
            gripper_open=require(data, "gripper_open", float, context),
        )
    except ValueError as exc:
        raise SchemaError(f"{context}: {exc}") from None


def load_profile(path: str | Path) -> CalibrationProfile:
    return parse_profile(read_json(path), str(path))


def save_profile(path: str | Path, profile: CalibrationProfile) -> None:
    payload = {
        "channels": [
            {
                "id": ch.id,
                "min_pulse": ch.min_pulse,
                "max_pulse": ch.max_pulse,
                "min_angle": ch.min_angle,
                "max_angle": ch.max_angle,
                "inverted": ch.inverted,
                "model": ch.model,
            }
            for ch in profile.channels
        ],
        "gripper_close": profile.gripper_close,
        "gripper_open": profile.gripper_open,
    }
    write_json(path, payload)
