"""Behavioral emulation of the servo controller board and the servos.

The controller consumes the ASCII wire protocol, keeps one pulse register
per channel, and emits one PulseSchedule every 20 ms tick.  Frames with a
T<ms> suffix ramp the registers linearly over that time, which is how the
hobby boards implement timed moves.  Servo plants are pure slew-rate
limiters: each tick the position moves toward the commanded angle by at
most slew_limit * dt and lands exactly when within reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from armctl.actuation import FRAME_PERIOD_US, PulseCommand, PulseSchedule, ServoChannel, pulse_to_angle
from armctl.kinematics import JointState
from armctl.wire_protocol import ParseError, decode_frame

TICK_US = FRAME_PERIOD_US
RX_BUFFER_LIMIT = 4096

# HS-422 class: 60 degrees in 0.21 s
DEFAULT_SLEW_RAD_S = 4.987


class BufferOverrun(RuntimeError):
    """More than RX_BUFFER_LIMIT bytes pending without a frame terminator."""


class NotSettled(RuntimeError):
    """Tick budget exhausted before all plants reached their targets."""

    def __init__(self, message: str, trajectory: list["TrajectoryPoint"]):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass
class SimClock:
    tick_us: int = TICK_US
    elapsed_us: int = 0

    def advance(self) -> int:
        self.elapsed_us += self.tick_us
        return self.elapsed_us


@dataclass
class _Ramp:
    start_width: int
    target_width: int
    total_ms: int
    elapsed_ms: int = 0


class ArmController:
    """Frame-to-pulse-register emulator for the microcontroller board."""

    def __init__(self, initial_width: int = 1500):
        self.registers: dict[int, int] = {ch: initial_width for ch in range(6)}
        self._ramps: dict[int, _Ramp] = {}
        self._buffer = bytearray()
        self.error_count = 0

    def feed(self, data: bytes) -> None:
        """Buffer incoming bytes and apply every complete frame.

        Malformed frames are dropped and counted; partial bytes wait for
        the terminator.  Raises BufferOverrun if the unterminated residue
        exceeds the receive buffer.
        """
        self._buffer.extend(data)
        while True:
            cr = self._buffer.find(b"\r")
            if cr < 0:
                break
            raw = bytes(self._buffer[: cr + 1])
            del self._buffer[: cr + 1]
            try:
                self._apply(decode_frame(raw))
            except ParseError:
                self.error_count += 1
        if len(self._buffer) > RX_BUFFER_LIMIT:
            raise BufferOverrun(f"{len(self._buffer)} bytes pending without terminator")

    def _apply(self, frame) -> None:
        for ch, width in frame.groups:
            if frame.move_time_ms is None:
                self.registers[ch] = width
                self._ramps.pop(ch, None)
            else:
                self._ramps[ch] = _Ramp(
                    start_width=self.registers[ch],
                    target_width=width,
                    total_ms=frame.move_time_ms,
                )

    def tick(self) -> PulseSchedule:
        """Advance one 20 ms frame and emit the pulse schedule."""
        done = []
        for ch, ramp in self._ramps.items():
            ramp.elapsed_ms += TICK_US // 1000
            frac = min(1.0, ramp.elapsed_ms / ramp.total_ms)
            self.registers[ch] = round(
                ramp.start_width + (ramp.target_width - ramp.start_width) * frac
            )
            if frac >= 1.0:
                done.append(ch)
        for ch in done:
            del self._ramps[ch]
        return PulseSchedule(
            commands=tuple(PulseCommand(ch, self.registers[ch]) for ch in range(6))
        )

    def step(self, data: bytes = b"") -> PulseSchedule:
        """feed() then tick(): one controller step per PWM frame."""
        self.feed(data)
        return self.tick()

    @property
    def moving(self) -> bool:
        return bool(self._ramps)


@dataclass
class ServoPlant:
    """Slew-limited servo: tracks the commanded pulse width every tick."""

    channel: ServoChannel
    position: float
    slew_limit: float = DEFAULT_SLEW_RAD_S

    def __post_init__(self):
        if not self.channel.min_angle <= self.position <= self.channel.max_angle:
            raise ValueError(
                f"channel {self.channel.id}: position {self.position:.6g} outside travel"
            )

    def target_for(self, commanded_width_us: int) -> float:
        return pulse_to_angle(self.channel, commanded_width_us)

    def step(self, commanded_width_us: int, dt_us: int = TICK_US) -> float:
        target = self.target_for(commanded_width_us)
        max_delta = self.slew_limit * dt_us * 1e-6
        delta = target - self.position
        if abs(delta) <= max_delta:
            self.position = target
        else:
            self.position += math.copysign(max_delta, delta)
        return self.position

    def at_target(self, commanded_width_us: int) -> bool:
        return self.position == self.target_for(commanded_width_us)


@dataclass(frozen=True)
class TrajectoryPoint:
    tick: int
    elapsed_us: int
    joints: JointState
    widths: tuple[int, ...]


def _snapshot(tick: int, elapsed_us: int, controller: ArmController,
              plants: list[ServoPlant]) -> TrajectoryPoint:
    return TrajectoryPoint(
        tick=tick,
        elapsed_us=elapsed_us,
        joints=JointState(*(p.position for p in plants)),
        widths=tuple(controller.registers[ch] for ch in range(6)),
    )


def run_until_settled(
    controller: ArmController,
    plants: list[ServoPlant],
    max_ticks: int,
    clock: SimClock | None = None,
    on_tick=None,
) -> list[TrajectoryPoint]:
    """Tick controller and plants until every plant sits on its target.

    Returns the trajectory, one point per tick; raises NotSettled with
    the partial trajectory when max_ticks runs out.  on_tick, if given,
    is called with each TrajectoryPoint as it is recorded.
    """
    if max_ticks <= 0:
        raise ValueError("max_ticks must be positive")
    if clock is None:
        clock = SimClock()
    trajectory: list[TrajectoryPoint] = []
    for tick_index in range(max_ticks):
        schedule = controller.tick()
        widths = {cmd.channel: cmd.width_us for cmd in schedule.commands}
        for plant in plants:
            plant.step(widths[plant.channel.id])
        elapsed = clock.advance()
        point = _snapshot(tick_index, elapsed, controller, plants)
        trajectory.append(point)
        if on_tick is not None:
            on_tick(point)
        settled = not controller.moving and all(
            p.at_target(widths[p.channel.id]) for p in plants
        )
        if settled:
            return trajectory
    raise NotSettled(f"not settled after {max_ticks} ticks", trajectory)


CSV_HEADER = "tick,elapsed_ms,theta1,theta2,theta3,theta4,theta5,gripper,w0,w1,w2,w3,w4,w5"


def trajectory_to_csv(trajectory: list[TrajectoryPoint]) -> str:
    """CSV export with stable formatting (angles at 9 decimal places)."""
    lines = [CSV_HEADER]
    for p in trajectory:
        angles = ",".join(f"{v:.9f}" for v in p.joints.as_tuple())
        widths = ",".join(str(w) for w in p.widths)
        lines.append(f"{p.tick},{p.elapsed_us // 1000},{angles},{widths}")
    return "\n".join(lines) + "\n"
