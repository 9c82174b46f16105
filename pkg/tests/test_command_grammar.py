import math
import random
from importlib import resources

import pytest

from armctl.command_grammar import (
    SLOT,
    BadParameter,
    Dictionary,
    DictionaryError,
    EmptyInput,
    Entry,
    IntentKind,
    NotRecognized,
    levenshtein,
    load_dictionary,
    match_command,
    normalize,
    parse_params,
    respond,
)
from armctl.persistence import SchemaError


def shipped_dictionary_path():
    return resources.files("armctl") / "data" / "dictionary.json"


@pytest.fixture(scope="module")
def shipped():
    return load_dictionary(shipped_dictionary_path())


# ---- normalize ----

def test_normalize_strips_punctuation():
    assert normalize("Grip!") == ["grip"]


def test_normalize_preserves_digits():
    assert normalize("Move to 120, 80, 40") == ["move", "to", "120", "80", "40"]


def test_normalize_empty():
    with pytest.raises(EmptyInput):
        normalize("   ")


def test_normalize_keeps_negative_numbers():
    assert normalize("move to -50 80 40") == ["move", "to", "-50", "80", "40"]


# ---- matching ----

def test_exact_match_confidence_one(shipped):
    result = match_command(shipped, "grip")
    assert result.intent.kind is IntentKind.GRIP
    assert result.confidence == 1.0
    assert result.matched_phrase == "grip"


def test_single_typo_release(shipped):
    result = match_command(shipped, "releese")
    assert result.intent.kind is IntentKind.RELEASE
    assert result.confidence == pytest.approx(1 - 1 / 7)


def test_unknown_command(shipped):
    with pytest.raises(NotRecognized):
        match_command(shipped, "xyzzy")


def test_move_to_binds_coordinates(shipped):
    result = match_command(shipped, "move to 120 80 40")
    assert result.intent.kind is IntentKind.MOVE_TO
    assert result.intent.params == {"x": 120.0, "y": 80.0, "z": 40.0}


def test_turn_left_binds_direction_and_degrees(shipped):
    result = match_command(shipped, "turn left 30")
    assert result.intent.kind is IntentKind.TURN
    assert result.intent.params == {"degrees": 30.0, "direction": "left"}


def test_turn_right(shipped):
    result = match_command(shipped, "turn right 45")
    assert result.intent.params["direction"] == "right"


def test_letters_in_slots_are_bad_parameters(shipped):
    with pytest.raises(BadParameter):
        match_command(shipped, "move to x y z")


def test_missing_coordinate_is_bad_parameter(shipped):
    with pytest.raises(BadParameter):
        match_command(shipped, "move to 120 80")


def test_every_shipped_phrase_matches_itself_exactly(shipped):
    for entry in shipped.entries:
        rendered = entry.phrase.replace(SLOT, "100")
        result = match_command(shipped, rendered)
        assert result.confidence == 1.0, entry.phrase
        assert result.matched_phrase == entry.phrase
        assert result.intent.kind is entry.kind


def test_confidence_always_in_unit_interval(shipped):
    rng = random.Random(3)
    alphabet = "abcdefghijklmnopqrstuvwxyz 0123456789"
    for _ in range(200):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 30)))
        try:
            result = match_command(shipped, text)
            assert 0.75 <= result.confidence <= 1.0
        except (NotRecognized, BadParameter, EmptyInput):
            pass


def test_tie_broken_by_lexicographic_phrase():
    d = Dictionary(entries=(
        Entry(phrase="walk abc", kind=IntentKind.DANCE),
        Entry(phrase="walk abd", kind=IntentKind.STOP),
    ))
    # "walk abe" is one edit from both
    result = match_command(d, "walk abe")
    assert result.matched_phrase == "walk abc"


def test_match_deterministic(shipped):
    results = {match_command(shipped, "hold positon").matched_phrase for _ in range(10)}
    assert results == {"hold position"}


# ---- parse_params directly ----

def test_parse_params_positional():
    entry = Entry(phrase=f"move to {SLOT} {SLOT} {SLOT}", kind=IntentKind.MOVE_TO,
                  params=("x", "y", "z"))
    intent = parse_params(entry, ["move", "to", "1", "2", "3"])
    assert intent.params == {"x": 1.0, "y": 2.0, "z": 3.0}


def test_parse_params_count_mismatch():
    entry = Entry(phrase=f"turn left {SLOT}", kind=IntentKind.TURN, params=("degrees",))
    with pytest.raises(BadParameter):
        parse_params(entry, ["turn", "left"])


# ---- respond ----

def test_response_templates_fixed():
    assert respond("grip") == "Gripping."
    assert respond("not_recognized") == "Command not recognized."
    assert respond("unreachable") == "Target out of reach."
    assert respond("dance") == "Dancing."
    assert respond("nonexistent-kind") == "Something went wrong."


# ---- dictionary data and validation ----

def test_shipped_dictionary_size(shipped):
    assert len(shipped.entries) >= 100


def test_shipped_dictionary_covers_every_intent(shipped):
    assert {e.kind for e in shipped.entries} == set(IntentKind)


def test_shipped_dictionary_pairwise_distance(shipped):
    shipped.check_pairwise_distance()  # raises on violation


def test_duplicate_phrase_rejected():
    with pytest.raises(DictionaryError):
        Dictionary(entries=(
            Entry(phrase="grip", kind=IntentKind.GRIP),
            Entry(phrase="grip", kind=IntentKind.HOLD),
        ))


def test_close_templates_rejected():
    d = Dictionary(entries=(
        Entry(phrase="grip", kind=IntentKind.GRIP),
        Entry(phrase="grap", kind=IntentKind.GRIP),
    ))
    with pytest.raises(DictionaryError):
        d.check_pairwise_distance()


def test_turn_template_needs_direction_word():
    with pytest.raises(DictionaryError):
        Entry(phrase=f"turn {SLOT}", kind=IntentKind.TURN, params=("degrees",)).validate()


def test_missing_intent_field_names_field(tmp_path):
    bad = tmp_path / "dict.json"
    bad.write_text('[{"phrase": "grip", "params": []}]')
    with pytest.raises(SchemaError, match="intent"):
        load_dictionary(bad)


def test_levenshtein_basics():
    assert levenshtein("release", "releese") == 1
    assert levenshtein("", "abc") == 3
    assert levenshtein("kitten", "sitting") == 3


# ---- desk-scale recognition robustness (small prefix of the acceptance sweep) ----

def corrupt(rng, text):
    pos = rng.randrange(len(text))
    original = text[pos]
    choices = [c for c in "abcdefghijklmnopqrstuvwxyz" if c != original]
    return text[:pos] + rng.choice(choices) + text[pos + 1 :]


def test_single_typo_recovery_rate(shipped):
    rng = random.Random(2024)
    trials = hits = 0
    for _ in range(5):
        for entry in shipped.entries:
            rendered = entry.phrase.replace(SLOT, "100")
            trials += 1
            try:
                result = match_command(shipped, corrupt(rng, rendered))
            except (NotRecognized, BadParameter):
                continue
            if result.matched_phrase == entry.phrase:
                hits += 1
    assert hits / trials >= 0.90
