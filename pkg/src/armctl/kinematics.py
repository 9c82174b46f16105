"""Planar two-link kinematics for the 5-DOF arm.

The arm bends in a vertical plane selected by the base azimuth theta1.
Inside that plane the shoulder (theta2) and elbow (theta3) position the
wrist via two links l1, l2; the wrist bend (theta4) follows from the same
triangle.  Conventions:

    a : horizontal coordinate in the bend plane (mm)
    b : vertical coordinate in the bend plane (mm)
    phi = theta2 + theta3 - pi   (absolute angle of link 2)

Forward kinematics:

    a = l1*cos(theta2) + l2*cos(phi)
    b = l1*sin(theta2) + l2*sin(phi)

The geometric inverse solution uses the triangle spanned by the two links
and the reach vector r = sqrt(a^2 + b^2):

    gamma  = arccos((a^2 + b^2 - (l1^2 + l2^2)) / (2*l1*l2))
    alpha  = atan2(b, a)
    theta2 = alpha + arcsin(l2*sin(gamma)/r)
    theta3 = pi - gamma
    theta4 = pi + arcsin(l1*sin(gamma)/r) - alpha

The arcsin branch is only guaranteed correct when both triangle base
angles are acute, i.e. r^2 >= l1^2 + l2^2 (equivalently cos(gamma) >= 0).
Outside that regime the solver still returns the formula result but flags
it via IkDerivation.acute = False.

All lengths are millimetres, all angles radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Relative slack on the reachability annulus; boundary targets are accepted.
DEFAULT_REACH_EPS = 1e-9


class Unreachable(ValueError):
    """Target lies outside the annulus the two links can reach."""


class DegenerateTarget(ValueError):
    """Target sits on the base axis, so the bend plane is undefined."""


@dataclass(frozen=True)
class ArmGeometry:
    """Link lengths in mm.  Configuration data, not constants: hobby arms
    vary, so the session config owns them; defaults are 100 mm each."""

    l1: float = 100.0
    l2: float = 100.0

    def __post_init__(self):
        if not (self.l1 > 0 and self.l2 > 0):
            raise ValueError(f"link lengths must be positive, got l1={self.l1}, l2={self.l2}")


@dataclass(frozen=True)
class PlanarTarget:
    """End-effector goal: in-plane coordinates (a, b) plus base azimuth."""

    a: float
    b: float
    theta1: float = 0.0


@dataclass(frozen=True)
class JointSolution:
    theta2: float
    theta3: float
    theta4: float


@dataclass(frozen=True)
class IkDerivation:
    """Intermediate quantities of the geometric solution.

    phi is the absolute orientation of link 2 (phi = theta2 - gamma);
    acute is True when r^2 >= l1^2 + l2^2, the regime where the arcsin
    branch provably selects the correct triangle.
    """

    gamma: float
    alpha: float
    phi: float
    r: float
    acute: bool


@dataclass(frozen=True)
class JointState:
    """Full arm configuration: five joints plus the gripper jaw angle."""

    theta1: float
    theta2: float
    theta3: float
    theta4: float
    theta5: float
    gripper: float

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.theta1, self.theta2, self.theta3, self.theta4, self.theta5, self.gripper)


JOINT_NAMES = ("theta1", "theta2", "theta3", "theta4", "theta5", "gripper")


def forward_planar(geom: ArmGeometry, theta2: float, theta3: float) -> tuple[float, float]:
    """In-plane position of the wrist point for given shoulder/elbow angles."""
    phi = theta2 + theta3 - math.pi
    a = geom.l1 * math.cos(theta2) + geom.l2 * math.cos(phi)
    b = geom.l1 * math.sin(theta2) + geom.l2 * math.sin(phi)
    return a, b


def solve_ik(
    geom: ArmGeometry,
    target: PlanarTarget,
    eps: float = DEFAULT_REACH_EPS,
) -> tuple[JointSolution, IkDerivation]:
    """Geometric inverse kinematics for the in-plane target.

    Raises Unreachable when r lies outside [|l1-l2|, l1+l2] by more than
    the relative tolerance eps, and DegenerateTarget at the origin.
    """
    a, b = target.a, target.b
    l1, l2 = geom.l1, geom.l2
    r2 = a * a + b * b
    r = math.sqrt(r2)
    if r == 0.0:
        raise DegenerateTarget("target (a, b) = (0, 0): bend direction undefined")

    outer = l1 + l2
    inner = abs(l1 - l2)
    if r > outer * (1.0 + eps) or r < inner * (1.0 - eps):
        raise Unreachable(
            f"reach r={r:.6g} mm outside workspace [{inner:.6g}, {outer:.6g}] mm"
        )

    cos_gamma = (r2 - (l1 * l1 + l2 * l2)) / (2.0 * l1 * l2)
    # Float rounding can push the boundary cases just past +/-1.
    cos_gamma = max(-1.0, min(1.0, cos_gamma))
    gamma = math.acos(cos_gamma)
    alpha = math.atan2(b, a)

    sin_gamma = math.sin(gamma)
    theta2 = alpha + math.asin(max(-1.0, min(1.0, l2 * sin_gamma / r)))
    theta3 = math.pi - gamma
    theta4 = math.pi + math.asin(max(-1.0, min(1.0, l1 * sin_gamma / r))) - alpha

    derivation = IkDerivation(
        gamma=gamma,
        alpha=alpha,
        phi=theta2 - gamma,
        r=r,
        acute=cos_gamma >= 0.0,
    )
    return JointSolution(theta2=theta2, theta3=theta3, theta4=theta4), derivation


def target_from_xyz(x: float, y: float, z: float) -> PlanarTarget:
    """Map operator xyz coordinates (mm) onto the (a, b, theta1) convention.

    theta1 is the azimuth of (x, y) wrapped modulo pi so it stays inside
    the base servo's [0, pi] travel; the bend plane through the z axis
    covers both azimuth directions, so the wrap loses no reachable pose.
    """
    if x == 0.0 and y == 0.0:
        raise DegenerateTarget("target on the base axis: azimuth undefined")
    theta1 = math.atan2(y, x)
    if theta1 < 0.0:
        theta1 += math.pi
    return PlanarTarget(a=math.hypot(x, y), b=z, theta1=theta1)
