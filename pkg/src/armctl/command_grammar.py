"""Text command matching against the phrase dictionary.

Stands in for the original speech front end: operator text is normalized,
fuzzy-matched against phrase templates by Levenshtein distance, and bound
to a typed intent.  Numeric parameter slots are written "{num}" in the
templates and are excluded from the distance computation, so a typo in a
word cannot be rescued by digits and vice versa.

Matching is accepted at confidence >= 0.75 where
confidence = 1 - d / max(len(template_text), len(input_text)).
The shipped dictionary keeps every pair of templates at distance >= 3,
which makes recovery from any single-letter typo unambiguous.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from armctl.persistence import SchemaError, read_json, require

SLOT = "{num}"
CONFIDENCE_THRESHOLD = 0.75
MIN_TEMPLATE_DISTANCE = 3

_TOKEN_RE = re.compile(r"-?\d+(?:\.\d+)?|[a-z]+")
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?$")
_WORD_RE = re.compile(r"[a-z]+$")


class EmptyInput(ValueError):
    pass


class NotRecognized(ValueError):
    def __init__(self, text: str, best_confidence: float):
        super().__init__(f"no dictionary entry close to {text!r} "
                         f"(best confidence {best_confidence:.2f})")
        self.best_confidence = best_confidence


class BadParameter(ValueError):
    pass


class DictionaryError(ValueError):
    """Dictionary data violates a structural invariant."""


class IntentKind(enum.Enum):
    GRIP = "grip"
    HOLD = "hold"
    RELEASE = "release"
    PICK = "pick"
    PULL = "pull"
    DANCE = "dance"
    TURN = "turn"
    MOVE_TO = "move_to"
    HOME = "home"
    STOP = "stop"


@dataclass(frozen=True)
class Entry:
    """One dictionary template: phrase text, intent kind, slot names."""

    phrase: str
    kind: IntentKind
    params: tuple[str, ...] = ()

    @cached_property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.phrase.split())

    @cached_property
    def fixed_text(self) -> str:
        return " ".join(t for t in self.tokens if t != SLOT)

    def validate(self) -> None:
        tokens = self.tokens
        if not tokens:
            raise DictionaryError(f"entry {self.phrase!r}: empty phrase")
        slots = sum(1 for t in tokens if t == SLOT)
        for t in tokens:
            if t != SLOT and not _WORD_RE.match(t):
                raise DictionaryError(
                    f"entry {self.phrase!r}: token {t!r} is not a lowercase word or {SLOT}"
                )
        if slots != len(self.params):
            raise DictionaryError(
                f"entry {self.phrase!r}: {slots} slots but {len(self.params)} param names"
            )
        if not self.fixed_text:
            raise DictionaryError(f"entry {self.phrase!r}: needs at least one fixed word")
        if self.kind is IntentKind.TURN:
            words = set(tokens)
            if len(words & {"left", "right"}) != 1:
                raise DictionaryError(
                    f"turn entry {self.phrase!r}: must contain exactly one of left/right"
                )


@dataclass
class Intent:
    kind: IntentKind
    params: dict = field(default_factory=dict)


@dataclass
class MatchResult:
    intent: Intent
    confidence: float
    matched_phrase: str


@dataclass(frozen=True)
class Dictionary:
    entries: tuple[Entry, ...]

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            entry.validate()
            if entry.phrase in seen:
                raise DictionaryError(f"duplicate phrase {entry.phrase!r}")
            seen.add(entry.phrase)

    def check_pairwise_distance(self, minimum: int = MIN_TEMPLATE_DISTANCE) -> None:
        """Require every pair of fixed-word projections to differ by at
        least `minimum` edits; this is what makes one-typo recovery safe."""
        texts = [(e.phrase, e.fixed_text) for e in self.entries]
        for i in range(len(texts)):
            for j in range(i + 1, len(texts)):
                if abs(len(texts[i][1]) - len(texts[j][1])) >= minimum:
                    continue
                d = levenshtein(texts[i][1], texts[j][1], cap=minimum - 1)
                if d < minimum:
                    raise DictionaryError(
                        f"templates {texts[i][0]!r} and {texts[j][0]!r} are only "
                        f"{d} edits apart (minimum {minimum})"
                    )


def levenshtein(s1: str, s2: str, cap: int | None = None) -> int:
    """Edit distance, two-row DP.

    With `cap`, gives up as soon as the distance provably exceeds it and
    returns cap + 1 (callers only need "worse than cap" then).
    """
    if len(s1) < len(s2):
        s1, s2 = s2, s1
    prev = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1, 1):
        cur = [i]
        for j, c2 in enumerate(s2, 1):
            cost = 0 if c1 == c2 else 1
            cur.append(min(cur[-1] + 1, prev[j] + 1, prev[j - 1] + cost))
        if cap is not None and min(cur) > cap:
            return cap + 1
        prev = cur
    return prev[-1]


def normalize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split; numeric tokens survive intact."""
    tokens = _TOKEN_RE.findall(text.lower())
    if not tokens:
        raise EmptyInput("no usable tokens in input")
    return tokens


def _is_number(token: str) -> bool:
    return bool(_NUMBER_RE.match(token))


def _comparison_texts(entry: Entry, tokens: list[str]) -> tuple[str, str]:
    """Project template and input onto the fixed words.

    When token counts line up, slot positions are excluded positionally
    (whatever fills them is a parameter, judged later).  Otherwise the
    numeric tokens are treated as the slot fillers.
    """
    t_tokens = entry.tokens
    if len(tokens) == len(t_tokens):
        idx = [i for i, t in enumerate(t_tokens) if t != SLOT]
        return (
            " ".join(t_tokens[i] for i in idx),
            " ".join(tokens[i] for i in idx),
        )
    return entry.fixed_text, " ".join(t for t in tokens if not _is_number(t))


def _confidence(entry: Entry, tokens: list[str]) -> float:
    s_t, s_u = _comparison_texts(entry, tokens)
    longest = max(len(s_t), len(s_u))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(s_t, s_u) / longest


def parse_params(entry: Entry, tokens: list[str]) -> Intent:
    """Bind the input's slot fillers to the entry's typed parameters."""
    t_tokens = entry.tokens
    if len(tokens) == len(t_tokens):
        fillers = [tokens[i] for i, t in enumerate(t_tokens) if t == SLOT]
    else:
        fillers = [t for t in tokens if _is_number(t)]
    if len(fillers) != len(entry.params):
        raise BadParameter(
            f"{entry.phrase!r} needs {len(entry.params)} numbers, got {len(fillers)}"
        )
    params: dict = {}
    for name, raw in zip(entry.params, fillers):
        if not _is_number(raw):
            raise BadParameter(f"parameter {name!r}: {raw!r} is not a number")
        params[name] = float(raw)
    if entry.kind is IntentKind.TURN:
        params["direction"] = "left" if "left" in t_tokens else "right"
    return Intent(kind=entry.kind, params=params)


def match_command(dictionary: Dictionary, text: str) -> MatchResult:
    """Pick the closest dictionary entry and bind its parameters.

    Raises EmptyInput, NotRecognized (best confidence below threshold),
    or BadParameter (template matched but slots would not bind).
    """
    tokens = normalize(text)
    joined_len = len(" ".join(tokens))
    # Confidence ranking is done on the exact rationals d/longest
    # (cross-multiplied) so capped distance computations can never
    # manufacture a bogus tie.  Length-closest templates are tried first,
    # which makes the cap bite early; the explicit tie-break keeps the
    # result independent of scan order.
    best_entry = None
    best_d = best_len = 1  # placeholder rational 1/1, never read before set
    for entry in sorted(dictionary.entries,
                        key=lambda e: (abs(len(e.fixed_text) - joined_len), e.phrase)):
        s_t, s_u = _comparison_texts(entry, tokens)
        longest = max(len(s_t), len(s_u), 1)
        if best_entry is None:
            cap = None
        else:
            # d/longest <= best_d/best_len is required to win or tie
            cap = (best_d * longest) // best_len
            if abs(len(s_t) - len(s_u)) > cap:
                continue
        d = levenshtein(s_t, s_u, cap=cap)
        if cap is not None and d > cap:
            continue
        if (
            best_entry is None
            or d * best_len < best_d * longest
            or (d * best_len == best_d * longest and entry.phrase < best_entry.phrase)
        ):
            best_entry, best_d, best_len = entry, d, longest
    # conf >= 0.75 is exactly 4*d <= longest
    if best_entry is None or 4 * best_d > best_len:
        raise NotRecognized(text, 0.0 if best_entry is None else 1.0 - best_d / best_len)
    intent = parse_params(best_entry, tokens)
    return MatchResult(
        intent=intent,
        confidence=1.0 - best_d / best_len,
        matched_phrase=best_entry.phrase,
    )


# Deterministic reply templates, keyed by intent kind value or error kind.
RESPONSES = {
    "grip": "Gripping.",
    "hold": "Holding.",
    "release": "Releasing.",
    "pick": "Picking up.",
    "pull": "Pulling.",
    "dance": "Dancing.",
    "turn": "Turning.",
    "move_to": "Moving.",
    "home": "Going home.",
    "stop": "Stopped.",
    "empty_input": "No command given.",
    "not_recognized": "Command not recognized.",
    "bad_parameter": "Invalid parameters.",
    "unreachable": "Target out of reach.",
    "degenerate_target": "Target out of reach.",
    "angle_out_of_range": "Joint limit exceeded.",
    "unknown_script": "No routine by that name.",
    "not_settled": "Move did not settle in time.",
    "held": "Holding; release first.",
    "error": "Something went wrong.",
}


def respond(outcome_kind: str) -> str:
    """Fixed transcript line for an outcome; the arm 'speaks' in text."""
    return RESPONSES.get(outcome_kind, RESPONSES["error"])


def load_dictionary(path: str | Path) -> Dictionary:
    """Read a dictionary JSON file and validate all invariants, including
    the pairwise template distance."""
    data = read_json(path)
    if not isinstance(data, list):
        raise SchemaError(f"{path}: top level must be a JSON array")
    entries = []
    kinds = {k.value: k for k in IntentKind}
    for i, item in enumerate(data):
        ctx = f"{path}[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(f"{ctx}: entry must be an object")
        phrase = require(item, "phrase", str, ctx)
        kind_name = require(item, "intent", str, ctx)
        if kind_name not in kinds:
            raise SchemaError(f"{ctx}: unknown intent {kind_name!r}")
        params = item.get("params", [])
        if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
            raise SchemaError(f"{ctx}: field 'params' must be a list of strings")
        entries.append(Entry(phrase=phrase, kind=kinds[kind_name], params=tuple(params)))
    try:
        dictionary = Dictionary(entries=tuple(entries))
        dictionary.check_pairwise_distance()
    except DictionaryError as exc:
        raise SchemaError(f"{path}: {exc}") from None
    return dictionary


def save_dictionary(path: str | Path, dictionary: Dictionary) -> None:
    from armctl.persistence import write_json

    payload = [
        {"phrase": e.phrase, "intent": e.kind.value, "params": list(e.params)}
        for e in dictionary.entries
    ]
    write_json(path, payload)
