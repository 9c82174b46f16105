#!/usr/bin/env python3
"""Author the shipped command dictionary and verify its invariants:
unique phrases, >= 100 entries, every intent kind covered, and pairwise
fixed-word Levenshtein distance >= 3 (single-typo recovery margin).

Run from the repo root:  python3 tools/build_dictionary.py
Writes src/armctl/data/dictionary.json when everything checks out.
"""

import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from armctl.command_grammar import SLOT, Dictionary, Entry, IntentKind, levenshtein

N = SLOT

PHRASES = {
    IntentKind.GRIP: [
        "grip",
        "grip the object",
        "close the gripper",
        "grasp the item",
        "clamp down on it",
        "squeeze the jaws shut",
        "take hold of the object",
        "close your claw",
        "grip it firmly",
        "shut the gripper jaws",
        "clench the claw tight",
    ],
    IntentKind.HOLD: [
        "hold",
        "hold it right there",
        "hold position",
        "keep holding the object",
        "maintain your grasp",
        "hold on to it",
        "keep it held tight",
        "do not let go",
        "hold steady",
        "keep your grip on that",
    ],
    IntentKind.RELEASE: [
        "release",
        "release the object",
        "let go",
        "open the gripper",
        "drop the item",
        "unclamp the jaws",
        "let it go now",
        "set the object down",
        "open your claw",
        "loosen your grasp",
    ],
    IntentKind.PICK: [
        "pick",
        "pick up the object",
        "pick it up",
        "lift the item",
        "grab it off the table",
        "collect the object",
        "fetch the item for me",
        "pick that up please",
        "raise the object up",
        "scoop up the piece",
    ],
    IntentKind.PULL: [
        "pull",
        "pull the object closer",
        "drag it toward you",
        "tug on the item",
        "pull it back here",
        "draw the object near",
        "haul it in",
        "pull that thing over",
        "reel the item in",
        "yank it closer",
    ],
    IntentKind.DANCE: [
        "dance",
        "dance for me",
        "do a dance",
        "perform the dance routine",
        "show me your moves",
        "bust a move",
        "dance around a little",
        "start dancing now",
        "wiggle around",
        "do your happy dance",
    ],
    IntentKind.TURN: [
        f"turn left {N}",
        f"turn right {N}",
        f"rotate left by {N} degrees",
        f"rotate right by {N} degrees",
        f"swing left {N} degrees",
        f"swing right {N} degrees",
        f"spin the base left {N}",
        f"spin the base right {N}",
        f"pan left by {N}",
        f"pan right by {N}",
    ],
    IntentKind.MOVE_TO: [
        f"move to {N} {N} {N}",
        f"go to point {N} {N} {N}",
        f"move the arm to {N} {N} {N}",
        f"position the hand at {N} {N} {N}",
        f"reach for coordinates {N} {N} {N}",
        f"send the gripper to {N} {N} {N}",
        f"travel to location {N} {N} {N}",
        f"aim for the spot at {N} {N} {N}",
        f"bring the hand over to {N} {N} {N}",
        f"place the end effector at {N} {N} {N}",
    ],
    IntentKind.HOME: [
        "go home",
        "return to home position",
        "go back to start",
        "move back to the home pose",
        "park the arm",
        "reset the arm position",
        "return to the rest pose",
        "go to your home spot",
        "back to home now",
        "assume the home position",
    ],
    IntentKind.STOP: [
        "stop",
        "stop now",
        "stop moving",
        "halt everything",
        "freeze right there",
        "cease all motion",
        "stand down",
        "stop the arm immediately",
        "abort the current move",
        "emergency stop",
    ],
}

PARAM_NAMES = {
    IntentKind.TURN: ("degrees",),
    IntentKind.MOVE_TO: ("x", "y", "z"),
}


def build() -> Dictionary:
    entries = []
    for kind, phrases in PHRASES.items():
        for phrase in phrases:
            slots = phrase.count(N)
            params = PARAM_NAMES.get(kind, ())[:slots] if slots else ()
            if kind is IntentKind.TURN:
                params = PARAM_NAMES[kind]
            elif kind is IntentKind.MOVE_TO:
                params = PARAM_NAMES[kind]
            entries.append(Entry(phrase=phrase, kind=kind, params=params))
    return Dictionary(entries=tuple(entries))


def main() -> int:
    dictionary = build()
    n = len(dictionary.entries)
    print(f"{n} entries")
    if n < 100:
        print("FAIL: need >= 100 entries")
        return 1

    kinds = {e.kind for e in dictionary.entries}
    missing = set(IntentKind) - kinds
    if missing:
        print(f"FAIL: intents not covered: {missing}")
        return 1

    conflicts = []
    for a, b in itertools.combinations(dictionary.entries, 2):
        d = levenshtein(a.fixed_text, b.fixed_text)
        if d < 3:
            conflicts.append((d, a.phrase, b.phrase))
    if conflicts:
        print(f"FAIL: {len(conflicts)} template pairs closer than 3 edits:")
        for d, p1, p2 in sorted(conflicts):
            print(f"  d={d}: {p1!r} <-> {p2!r}")
        return 1

    dictionary.check_pairwise_distance()
    out = Path(__file__).resolve().parent.parent / "src" / "armctl" / "data" / "dictionary.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    payload = [
        {"phrase": e.phrase, "intent": e.kind.value, "params": list(e.params)}
        for e in dictionary.entries
    ]
    out.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
