"""Serial wire model between the PC side and the servo controller.

Three layers, all pure codecs:

  * ASCII command frames "#<ch>P<width>...T<ms>\\r" (hobby servo
    controller convention)
  * asynchronous 8N1 bit framing: start 0, eight data bits LSB first,
    stop 1, idle 1
  * RS-232 <-> TTL voltage levels as converted by a MAX232 (data lines
    invert polarity, control lines do not)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

PROTOCOL_MIN_WIDTH = 500
PROTOCOL_MAX_WIDTH = 2500
MAX_CHANNEL = 5

CR = 0x0D

# Nominal MAX232 output; any magnitude in the 3..15 V band is legal.
RS232_NOMINAL_VOLTS = 12.0
TTL_HIGH_VOLTS = 5.0
TTL_LOW_VOLTS = 0.0


class InvalidFrame(ValueError):
    """Frame violates the wire contract (empty, duplicate channel, bounds)."""


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UndefinedRegion(ValueError):
    """Voltage outside both RS-232 bands (dead zone or over-range)."""


class LineType(enum.Enum):
    DATA = "data"
    CONTROL = "control"


class Direction(enum.Enum):
    TTL_TO_RS232 = "ttl_to_rs232"
    RS232_TO_TTL = "rs232_to_ttl"


@dataclass(frozen=True)
class WireFrame:
    """One servo command frame: (channel, width_us) groups plus an
    optional overall move time in ms."""

    groups: tuple[tuple[int, int], ...]
    move_time_ms: int | None = None


@dataclass(frozen=True)
class UartConfig:
    baud: int = 9600
    data_bits: int = 8
    parity: str = "none"
    stop_bits: int = 1

    def __post_init__(self):
        if (self.data_bits, self.parity, self.stop_bits) != (8, "none", 1):
            raise ValueError("only 8N1 framing is supported")


@dataclass(frozen=True)
class VoltageSample:
    line_type: LineType
    volts: float


@dataclass(frozen=True)
class FramingError:
    bit_offset: int
    byte_value: int | None
    reason: str


def _check_frame(frame: WireFrame) -> None:
    if not frame.groups:
        raise InvalidFrame("frame has no channel groups")
    seen = set()
    for ch, width in frame.groups:
        if not 0 <= ch <= MAX_CHANNEL:
            raise InvalidFrame(f"channel {ch} outside 0..{MAX_CHANNEL}")
        if ch in seen:
            raise InvalidFrame(f"duplicate channel {ch}")
        seen.add(ch)
        if not PROTOCOL_MIN_WIDTH <= width <= PROTOCOL_MAX_WIDTH:
            raise InvalidFrame(
                f"width {width} outside [{PROTOCOL_MIN_WIDTH}, {PROTOCOL_MAX_WIDTH}]"
            )
    if frame.move_time_ms is not None and frame.move_time_ms <= 0:
        raise InvalidFrame(f"move time must be positive, got {frame.move_time_ms}")


def encode_frame(frame: WireFrame) -> bytes:
    """Render a frame as ASCII, channels ascending, CR terminated."""
    _check_frame(frame)
    parts = [f"#{ch}P{width}" for ch, width in sorted(frame.groups)]
    if frame.move_time_ms is not None:
        parts.append(f"T{frame.move_time_ms}")
    return "".join(parts).encode("ascii") + b"\r"


def _read_number(data: bytes, pos: int) -> tuple[int, int]:
    start = pos
    while pos < len(data) and 0x30 <= data[pos] <= 0x39:
        pos += 1
    if pos == start:
        raise ParseError("expected digits", start)
    return int(data[start:pos]), pos


def decode_frame(data: bytes) -> WireFrame:
    """Parse exactly one CR-terminated frame; lowercase p/t accepted."""
    groups: list[tuple[int, int]] = []
    move_time = None
    pos = 0
    if not data:
        raise ParseError("empty input", 0)
    while pos < len(data) and data[pos] == ord("#"):
        ch, pos = _read_number(data, pos + 1)
        if ch > MAX_CHANNEL:
            raise ParseError(f"channel {ch} > {MAX_CHANNEL}", pos - 1)
        if pos >= len(data) or data[pos] not in (ord("P"), ord("p")):
            raise ParseError("expected 'P'", pos)
        width, pos = _read_number(data, pos + 1)
        if not PROTOCOL_MIN_WIDTH <= width <= PROTOCOL_MAX_WIDTH:
            raise ParseError(f"width {width} out of bounds", pos - 1)
        if any(g[0] == ch for g in groups):
            raise ParseError(f"duplicate channel {ch}", pos - 1)
        groups.append((ch, width))
    if not groups:
        raise ParseError("expected '#'", pos)
    if pos < len(data) and data[pos] in (ord("T"), ord("t")):
        move_time, pos = _read_number(data, pos + 1)
        if move_time <= 0:
            raise ParseError("move time must be positive", pos - 1)
    if pos >= len(data) or data[pos] != CR:
        raise ParseError("missing CR terminator", pos)
    if pos + 1 != len(data):
        raise ParseError("trailing bytes after frame", pos + 1)
    return WireFrame(groups=tuple(groups), move_time_ms=move_time)


def uart_encode(data: bytes, cfg: UartConfig = UartConfig()) -> list[int]:
    """Bit stream for a byte string: start 0, LSB-first data, stop 1."""
    bits: list[int] = []
    for byte in data:
        bits.append(0)
        for k in range(8):
            bits.append((byte >> k) & 1)
        bits.append(1)
    return bits


def uart_decode(
    bits: list[int], cfg: UartConfig = UartConfig()
) -> tuple[bytes, list[FramingError]]:
    """Inverse of uart_encode.

    A low stop bit is reported as a FramingError (the byte is dropped)
    and decoding resynchronizes at the next 1->0 transition.  A frame
    cut off by the end of input is reported as truncated.
    """
    out = bytearray()
    errors: list[FramingError] = []
    i = 0
    n = len(bits)
    while i < n:
        if bits[i] == 1:  # idle
            i += 1
            continue
        if i + 10 > n:
            errors.append(FramingError(bit_offset=i, byte_value=None, reason="truncated frame"))
            break
        byte = 0
        for k in range(8):
            byte |= bits[i + 1 + k] << k
        if bits[i + 9] == 1:
            out.append(byte)
            i += 10
        else:
            errors.append(FramingError(bit_offset=i, byte_value=byte, reason="stop bit low"))
            i += 10
            while i < n and bits[i] == 0:
                i += 1
    return bytes(out), errors


def rs232_classify(sample: VoltageSample) -> int:
    """Logic level of an RS-232 line voltage.

    Data lines: +3..+15 V is 0, -3..-15 V is 1.  Control lines are the
    opposite polarity.  Anything outside both bands is undefined.
    """
    v = sample.volts
    if not 3.0 <= abs(v) <= 15.0:
        raise UndefinedRegion(f"{v:+.3g} V outside both RS-232 bands")
    positive = v > 0
    if sample.line_type is LineType.DATA:
        return 0 if positive else 1
    return 1 if positive else 0


def max232_transform(level: int, direction: Direction, line_type: LineType) -> float:
    """Voltage a MAX232 emits for a logic level crossing in `direction`."""
    if level not in (0, 1):
        raise ValueError(f"logic level must be 0 or 1, got {level}")
    if direction is Direction.TTL_TO_RS232:
        if line_type is LineType.DATA:
            return RS232_NOMINAL_VOLTS if level == 0 else -RS232_NOMINAL_VOLTS
        return -RS232_NOMINAL_VOLTS if level == 0 else RS232_NOMINAL_VOLTS
    # RS-232 -> TTL, per the voltage table's TTL column
    if line_type is LineType.DATA:
        return TTL_LOW_VOLTS if level == 0 else TTL_HIGH_VOLTS
    return TTL_HIGH_VOLTS if level == 0 else TTL_LOW_VOLTS
