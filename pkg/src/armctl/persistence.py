"""JSON load/save helpers shared by the dictionary, script, and
calibration files.  Loaders validate shape eagerly and name the offending
field so a bad config fails at startup, not mid-command."""

from __future__ import annotations

import json
from pathlib import Path


class SchemaError(ValueError):
    """File parsed as JSON but does not match the expected schema."""


class IoError(OSError):
    """File missing or unreadable."""


def read_json(path: str | Path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None


def write_json(path: str | Path, payload) -> None:
    path = Path(path)
    try:
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None


def require(obj: dict, field: str, kind, context: str):
    """Fetch obj[field], checking presence and type."""
    if field not in obj:
        raise SchemaError(f"{context}: missing field '{field}'")
    value = obj[field]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{context}: field '{field}' must be a number")
        return float(value)
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise SchemaError(f"{context}: field '{field}' must be {kind.__name__}")
    return value
