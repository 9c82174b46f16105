"""armctl: text-command control pipeline for a simulated 5-DOF hobby arm.

Command text is matched against a phrase dictionary, expanded into pose
goals, solved by geometric inverse kinematics, converted to servo pulse
widths, framed onto a modeled serial wire, and executed by an emulated
controller driving slew-limited servo plants.
"""

from armctl.kinematics import (
    ArmGeometry,
    JointSolution,
    JointState,
    PlanarTarget,
    forward_planar,
    solve_ik,
    target_from_xyz,
)

__version__ = "0.1.0"

__all__ = [
    "ArmGeometry",
    "JointSolution",
    "JointState",
    "PlanarTarget",
    "forward_planar",
    "solve_ik",
    "target_from_xyz",
    "__version__",
]
