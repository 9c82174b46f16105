import math
import random

import pytest

from armctl.kinematics import (
    ArmGeometry,
    DegenerateTarget,
    PlanarTarget,
    Unreachable,
    forward_planar,
    solve_ik,
    target_from_xyz,
)

GEOM = ArmGeometry(l1=100.0, l2=100.0)


# ---- forward kinematics: the oracle, pinned by hand-evaluated trig ----

def test_fk_fully_extended():
    assert forward_planar(GEOM, 0.0, math.pi) == pytest.approx((200.0, 0.0), abs=1e-12)


def test_fk_right_angle_elbow():
    # phi = pi/2 + pi/2 - pi = 0: link1 straight up, link2 straight out
    a, b = forward_planar(GEOM, math.pi / 2, math.pi / 2)
    assert a == pytest.approx(100.0, abs=1e-12)
    assert b == pytest.approx(100.0, abs=1e-12)


def test_fk_straight_up():
    a, b = forward_planar(GEOM, math.pi / 2, math.pi)
    assert a == pytest.approx(0.0, abs=1e-12)
    assert b == pytest.approx(200.0, abs=1e-12)


# ---- inverse kinematics ----

def test_ik_fully_extended():
    sol, der = solve_ik(GEOM, PlanarTarget(200.0, 0.0))
    assert sol.theta2 == pytest.approx(0.0, abs=1e-12)
    assert sol.theta3 == pytest.approx(math.pi, abs=1e-12)
    assert sol.theta4 == pytest.approx(math.pi, abs=1e-12)
    assert der.gamma == pytest.approx(0.0, abs=1e-7)
    assert der.alpha == 0.0


def test_ik_square_corner_matches_fk_oracle():
    sol, der = solve_ik(GEOM, PlanarTarget(100.0, 100.0))
    assert sol.theta2 == pytest.approx(math.pi / 2, abs=1e-12)
    assert sol.theta3 == pytest.approx(math.pi / 2, abs=1e-12)
    assert sol.theta4 == pytest.approx(math.pi, abs=1e-12)
    assert der.gamma == pytest.approx(math.pi / 2, abs=1e-12)
    assert der.alpha == pytest.approx(math.pi / 4, abs=1e-12)
    a, b = forward_planar(GEOM, sol.theta2, sol.theta3)
    assert (a, b) == pytest.approx((100.0, 100.0), abs=1e-9)


def test_ik_straight_up():
    sol, _ = solve_ik(GEOM, PlanarTarget(0.0, 200.0))
    assert sol.theta2 == pytest.approx(math.pi / 2, abs=1e-12)
    assert sol.theta3 == pytest.approx(math.pi, abs=1e-12)
    assert sol.theta4 == pytest.approx(math.pi / 2, abs=1e-12)


def test_ik_unreachable_beyond_outer_boundary():
    with pytest.raises(Unreachable):
        solve_ik(GEOM, PlanarTarget(250.0, 0.0))


def test_ik_unreachable_inside_inner_hole():
    geom = ArmGeometry(l1=150.0, l2=50.0)
    with pytest.raises(Unreachable):
        solve_ik(geom, PlanarTarget(50.0, 0.0))  # r=50 < |l1-l2|=100


def test_ik_degenerate_origin():
    with pytest.raises(DegenerateTarget):
        solve_ik(GEOM, PlanarTarget(0.0, 0.0))


def test_ik_outer_boundary_accepted_exactly():
    sol, der = solve_ik(GEOM, PlanarTarget(200.0, 0.0))
    assert der.acute
    assert sol.theta3 == pytest.approx(math.pi, abs=1e-6)


def test_ik_obtuse_regime_flagged_but_solved():
    # r^2 = 80^2 = 6400 < l1^2 + l2^2 = 20000
    sol, der = solve_ik(GEOM, PlanarTarget(80.0, 0.0))
    assert not der.acute
    assert math.isfinite(sol.theta2) and math.isfinite(sol.theta4)


# ---- spec invariants, seeded random sweeps ----

def sample_acute_target(rng, geom):
    r_lo = math.sqrt(geom.l1 ** 2 + geom.l2 ** 2)
    r_hi = geom.l1 + geom.l2
    r = rng.uniform(r_lo, r_hi)
    psi = rng.uniform(-math.pi, math.pi)
    return PlanarTarget(r * math.cos(psi), r * math.sin(psi))


def test_roundtrip_in_acute_regime():
    rng = random.Random(42)
    for _ in range(2000):
        geom = ArmGeometry(rng.uniform(50, 200), rng.uniform(50, 200))
        t = sample_acute_target(rng, geom)
        sol, der = solve_ik(geom, t)
        assert der.acute
        a, b = forward_planar(geom, sol.theta2, sol.theta3)
        tol = 1e-9 * (geom.l1 + geom.l2)
        assert math.hypot(a - t.a, b - t.b) <= tol


def test_angle_sum_identity():
    rng = random.Random(7)
    for _ in range(2000):
        geom = ArmGeometry(rng.uniform(50, 200), rng.uniform(50, 200))
        sol, _ = solve_ik(geom, sample_acute_target(rng, geom))
        assert abs(sol.theta2 + sol.theta3 + sol.theta4 - 2 * math.pi) <= 1e-9


def test_phi_consistency():
    rng = random.Random(99)
    for _ in range(1000):
        geom = ArmGeometry(rng.uniform(50, 200), rng.uniform(50, 200))
        sol, der = solve_ik(geom, sample_acute_target(rng, geom))
        assert der.phi == sol.theta2 - der.gamma  # exact by construction
        assert abs(sol.theta4 - (math.pi - der.phi)) <= 1e-9


def test_theta3_monotone_in_reach():
    prev = None
    for a in [20.0, 60.0, 100.0, 140.0, 180.0, 199.0]:
        sol, _ = solve_ik(GEOM, PlanarTarget(a, 0.0))
        if prev is not None:
            assert sol.theta3 > prev
        prev = sol.theta3


def test_solve_ik_deterministic():
    t = PlanarTarget(123.456, 78.9)
    first = solve_ik(GEOM, t)
    for _ in range(5):
        assert solve_ik(GEOM, t) == first


# ---- xyz mapping ----

def test_target_from_xyz_on_x_axis():
    t = target_from_xyz(100.0, 0.0, 50.0)
    assert (t.a, t.b, t.theta1) == (100.0, 50.0, 0.0)


def test_target_from_xyz_on_y_axis():
    t = target_from_xyz(0.0, 100.0, 50.0)
    assert t.a == pytest.approx(100.0)
    assert t.b == 50.0
    assert t.theta1 == pytest.approx(math.pi / 2)


def test_target_from_xyz_diagonal_roundtrip():
    t = target_from_xyz(100.0, 100.0, 0.0)
    assert t.a == pytest.approx(math.sqrt(20000.0))
    assert t.b == 0.0
    assert t.theta1 == pytest.approx(math.pi / 4)
    assert t.a * math.cos(t.theta1) == pytest.approx(100.0)


def test_target_from_xyz_negative_y_wraps_into_base_range():
    t = target_from_xyz(0.0, -100.0, 0.0)
    assert 0.0 <= t.theta1 <= math.pi


def test_target_from_xyz_degenerate():
    with pytest.raises(DegenerateTarget):
        target_from_xyz(0.0, 0.0, 10.0)


def test_geometry_rejects_nonpositive_links():
    with pytest.raises(ValueError):
        ArmGeometry(l1=0.0, l2=100.0)
