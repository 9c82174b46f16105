import json
import math
from importlib import resources

import pytest

from armctl.actuation import CalibrationProfile
from armctl.choreography import (
    ExpandedPlan,
    ScriptValidationError,
    UnknownScript,
    UnreachableStep,
    expand_intent,
    load_scripts,
)
from armctl.command_grammar import Intent, IntentKind
from armctl.kinematics import ArmGeometry, JointState, forward_planar

GEOM = ArmGeometry()
PROFILE = CalibrationProfile()

# IK-consistent pose used as "current" in these tests
CURRENT = JointState(
    theta1=math.pi / 2, theta2=math.pi / 2, theta3=math.pi / 2,
    theta4=math.pi, theta5=math.pi / 2, gripper=math.pi / 2,
)


@pytest.fixture(scope="module")
def scripts():
    return load_scripts(resources.files("armctl") / "data" / "scripts.json", GEOM)


def expand(intent, scripts, current=CURRENT):
    return expand_intent(intent, current, scripts, GEOM, PROFILE)


def test_grip_single_goal_at_close_angle(scripts):
    plan = expand(Intent(IntentKind.GRIP), scripts)
    assert len(plan.goals) == 1
    assert plan.goals[0].gripper == 0.0
    assert not plan.freeze_after


def test_release_opens_gripper(scripts):
    plan = expand(Intent(IntentKind.RELEASE), scripts)
    assert plan.goals[0].gripper == pytest.approx(math.pi / 2)


def test_hold_is_grip_plus_freeze(scripts):
    plan = expand(Intent(IntentKind.HOLD), scripts)
    assert plan.goals[0].gripper == 0.0
    assert plan.freeze_after


def test_stop_has_no_goals(scripts):
    assert expand(Intent(IntentKind.STOP), scripts) == ExpandedPlan(goals=())


def test_turn_left_increases_azimuth(scripts):
    plan = expand(Intent(IntentKind.TURN, {"degrees": 30.0, "direction": "left"}), scripts)
    goal = plan.goals[0]
    assert goal.target.theta1 == pytest.approx(math.pi / 2 + math.radians(30))


def test_turn_right_decreases_azimuth(scripts):
    plan = expand(Intent(IntentKind.TURN, {"degrees": 45.0, "direction": "right"}), scripts)
    assert plan.goals[0].target.theta1 == pytest.approx(math.pi / 2 - math.radians(45))


def test_turn_preserves_planar_position(scripts):
    a0, b0 = forward_planar(GEOM, CURRENT.theta2, CURRENT.theta3)
    plan = expand(Intent(IntentKind.TURN, {"degrees": 20.0, "direction": "left"}), scripts)
    goal = plan.goals[0]
    assert goal.target.a == pytest.approx(a0)
    assert goal.target.b == pytest.approx(b0)


def test_turn_beyond_base_travel_rejected(scripts):
    with pytest.raises(UnreachableStep, match="theta1"):
        expand(Intent(IntentKind.TURN, {"degrees": 120.0, "direction": "left"}), scripts)


def test_move_to_maps_xyz(scripts):
    plan = expand(Intent(IntentKind.MOVE_TO, {"x": 100.0, "y": 100.0, "z": 0.0}), scripts)
    goal = plan.goals[0]
    assert goal.target.a == pytest.approx(math.sqrt(20000.0))
    assert goal.target.theta1 == pytest.approx(math.pi / 4)


def test_move_to_unreachable(scripts):
    with pytest.raises(UnreachableStep):
        expand(Intent(IntentKind.MOVE_TO, {"x": 300.0, "y": 0.0, "z": 0.0}), scripts)


def test_dance_uses_shipped_script(scripts):
    plan = expand(Intent(IntentKind.DANCE), scripts)
    assert len(plan.goals) >= 6
    assert plan.goals == scripts["dance"].steps


def test_missing_script_is_unknown(scripts):
    with pytest.raises(UnknownScript):
        expand(Intent(IntentKind.DANCE), {})


def test_expansion_is_pure(scripts):
    intent = Intent(IntentKind.PICK)
    assert expand(intent, scripts) == expand(intent, scripts)


# ---- script loading ----

def test_shipped_scripts_load_clean(scripts):
    assert set(scripts) == {"home", "pick", "pull", "dance"}
    for script in scripts.values():
        assert all(g.move_time_ms > 0 for g in script.steps)


def test_unreachable_step_rejected_at_load(tmp_path):
    bad = tmp_path / "scripts.json"
    bad.write_text(json.dumps([{
        "name": "far",
        "steps": [{"x": 0, "y": 201, "z": 0, "theta5": 1.0, "gripper": 0.0, "time_ms": 100}],
    }]))
    with pytest.raises(ScriptValidationError, match="far"):
        load_scripts(bad, GEOM)


def test_empty_scripts_file_rejected(tmp_path):
    bad = tmp_path / "scripts.json"
    bad.write_text("[]")
    with pytest.raises(ScriptValidationError):
        load_scripts(bad, GEOM)


def test_error_names_script_and_step(tmp_path):
    bad = tmp_path / "scripts.json"
    bad.write_text(json.dumps([{
        "name": "wiggle",
        "steps": [
            {"x": 0, "y": 150, "z": 0, "theta5": 1.0, "gripper": 0.0, "time_ms": 100},
            {"x": 0, "y": 500, "z": 0, "theta5": 1.0, "gripper": 0.0, "time_ms": 100},
        ],
    }]))
    with pytest.raises(ScriptValidationError) as exc:
        load_scripts(bad, GEOM)
    assert exc.value.script == "wiggle"
    assert exc.value.step == 1
