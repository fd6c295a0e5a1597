"""Planar bicopter rigid-body model and its dynamically extended form.

The vehicle moves in a vertical plane with state

    x = (r1, r2, theta, r1_dot, r2_dot, theta_dot),

where (r1, r2) is the center-of-mass position in the inertial frame and
theta is the roll angle. The two propellers produce forces f1 and f2 along
the body vertical axis; the physical inputs are folded into

    u = (u1, u2) = (f1 + f2, ell * (f2 - f1)),

i.e. total thrust and differential torque. The extended model appends the
thrust and its rate as states, chi = (x, u1, u1_dot), so that the new input
w = (u1_ddot, u2) enters through an invertible map away from chi7 = 0.
"""

from dataclasses import dataclass
from math import cos, sin

from .errors import ValidationError

__all__ = [
    "PlantParams",
    "plant_deriv",
    "extended_deriv",
    "motor_forces",
]


@dataclass(frozen=True)
class PlantParams:
    """True physical constants of the simulated vehicle (SI units)."""

    m: float = 1.0
    J: float = 0.05
    ell: float = 0.5
    g: float = 9.81

    def __post_init__(self):
        for name in ("m", "J", "ell", "g"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"PlantParams.{name} must be > 0")


def plant_deriv(x, u, p: PlantParams) -> tuple:
    """Right-hand side of the 6-state rigid-body dynamics.

    Thrust u1 acts along the body vertical axis, tilted by theta = x3;
    torque u2 drives the roll acceleration directly.
    """
    s3, c3 = sin(x[2]), cos(x[2])
    return (
        x[3],
        x[4],
        x[5],
        -u[0] * s3 / p.m,
        -p.g + u[0] * c3 / p.m,
        u[1] / p.J,
    )


def extended_deriv(chi, w, p: PlantParams) -> tuple:
    """Right-hand side of the 8-state thrust-extended dynamics.

    Rows 1-6 are the plant dynamics with u1 replaced by the state chi7;
    the thrust chain chi7, chi8 is a double integrator driven by w1, and
    w2 is the torque.
    """
    s3, c3 = sin(chi[2]), cos(chi[2])
    return (
        chi[3],
        chi[4],
        chi[5],
        -chi[6] * s3 / p.m,
        -p.g + chi[6] * c3 / p.m,
        w[1] / p.J,
        chi[7],
        w[0],
    )


def motor_forces(u, p: PlantParams) -> tuple:
    """Recover the individual propeller forces (f1, f2) from (u1, u2).

    Telemetry convenience only; the controller commands u2 directly.
    """
    half_diff = u[1] / p.ell / 2.0
    return (u[0] / 2.0 - half_diff, u[0] / 2.0 + half_diff)
