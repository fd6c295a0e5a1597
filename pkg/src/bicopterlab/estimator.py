"""Online estimation of inverse mass and inverse inertia.

The rigid-body dynamics are linear in theta = (1/m, 1/J):

    x_dot - Psi(x) = Phi(x, u) theta.

Both sides are passed through the stable filter 1/(s + gamma) so that no
derivative of x is ever needed; the improper block s x/(s + gamma) is
realized as x - gamma * (x/(s + gamma)). Filter outputs feed
forgetting-factor data accumulators (xbar, phibar), and the estimate
follows a two-power gradient flow on the residual

    Xi = phibar theta_hat - xbar,

whose fractional exponent drives the error to zero in finite time while
the >1 exponent keeps the far-field rate high. The flow is non-Lipschitz
at Xi = 0; a dead zone of radius eps stops the update once the residual is
at machine-precision scale.
"""

from dataclasses import dataclass
from math import cos, sin

from .errors import ValidationError

__all__ = [
    "EstimatorConfig",
    "EstimatorState",
    "regressor",
    "filter_deriv",
    "filter_outputs",
    "data_matrix_deriv",
    "estimate_deriv",
    "params_from_theta",
]


@dataclass(frozen=True)
class EstimatorConfig:
    """Gains and constants of the finite-time estimator."""

    c1: float = 6.0
    c2: float = 3.0
    alpha1: float = 0.2
    alpha2: float = 1.2
    forgetting: float = 80.0  # exponential forgetting factor (1/s)
    gamma: float = 10.0  # regressor filter pole (1/s)
    eps: float = 1e-12  # residual dead zone
    theta_floor: float = 1e-3  # lower bound on theta entries in the control path

    def __post_init__(self):
        if not 0.0 < self.alpha1 < 1.0:
            raise ValidationError("EstimatorConfig.alpha1 must lie in (0, 1)")
        if not self.alpha2 > 1.0:
            raise ValidationError("EstimatorConfig.alpha2 must be > 1")
        for name in ("c1", "c2", "forgetting", "gamma", "theta_floor"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"EstimatorConfig.{name} must be > 0")
        if self.eps < 0.0:
            raise ValidationError("EstimatorConfig.eps must be >= 0")


@dataclass
class EstimatorState:
    """Filter states, data accumulators, and the current estimate.

    z1 filters x, z2 filters Psi(x), zphi filters Phi(x, u) row by row;
    all start at zero, as do xbar and phibar.
    """

    z1: tuple  # 6
    z2: tuple  # 6
    zphi: tuple  # 6 rows of (col1, col2)
    xbar: tuple  # 2
    phibar: tuple  # 2x2 row-major, symmetric
    theta_hat: tuple  # 2

    @classmethod
    def zeros(cls, theta0=(2.0, 10.0)) -> "EstimatorState":
        return cls(
            z1=(0.0,) * 6,
            z2=(0.0,) * 6,
            zphi=((0.0, 0.0),) * 6,
            xbar=(0.0, 0.0),
            phibar=(0.0, 0.0, 0.0, 0.0),
            theta_hat=tuple(theta0),
        )


def regressor(x, u, g: float) -> tuple:
    """Known part Psi and parameter-multiplying matrix Phi of the dynamics.

    Rows 1-3 of Phi are zero (the kinematic rows carry no parameter).
    Returns (psi, phi) with psi a 6-tuple and phi 6 rows of 2-tuples.
    """
    s3, c3 = sin(x[2]), cos(x[2])
    psi = (x[3], x[4], x[5], 0.0, -g, 0.0)
    phi = (
        (0.0, 0.0),
        (0.0, 0.0),
        (0.0, 0.0),
        (-s3 * u[0], 0.0),
        (c3 * u[0], 0.0),
        (0.0, u[1]),
    )
    return psi, phi


def filter_deriv(st: EstimatorState, x, u, g: float, gamma: float) -> tuple:
    """Derivatives of the three first-order filter banks."""
    psi, phi = regressor(x, u, g)
    dz1 = tuple(-gamma * st.z1[i] + x[i] for i in range(6))
    dz2 = tuple(-gamma * st.z2[i] + psi[i] for i in range(6))
    dzphi = tuple(
        (-gamma * st.zphi[i][0] + phi[i][0], -gamma * st.zphi[i][1] + phi[i][1])
        for i in range(6)
    )
    return dz1, dz2, dzphi


def filter_outputs(st: EstimatorState, x, gamma: float) -> tuple:
    """Filtered regressor pair (x_f, Phi_f).

    x_f realizes s x/(s+gamma) - Psi/(s+gamma) as x - gamma z1 - z2, so no
    derivative of x appears; Phi_f is the zphi filter state directly.
    """
    x_f = tuple(x[i] - gamma * st.z1[i] - st.z2[i] for i in range(6))
    return x_f, st.zphi


def data_matrix_deriv(st: EstimatorState, x_f, phi_f, forgetting: float) -> tuple:
    """Forgetting-factor accumulators: (dxbar, dphibar).

    xbar collects Phi_f^T x_f, phibar collects Phi_f^T Phi_f; phibar stays
    symmetric positive semidefinite from zero initialization.
    """
    ptx0 = sum(phi_f[i][0] * x_f[i] for i in range(6))
    ptx1 = sum(phi_f[i][1] * x_f[i] for i in range(6))
    p00 = sum(phi_f[i][0] * phi_f[i][0] for i in range(6))
    p01 = sum(phi_f[i][0] * phi_f[i][1] for i in range(6))
    p11 = sum(phi_f[i][1] * phi_f[i][1] for i in range(6))
    lam = forgetting
    dxbar = (-lam * st.xbar[0] + ptx0, -lam * st.xbar[1] + ptx1)
    pb = st.phibar
    dphibar = (
        -lam * pb[0] + p00,
        -lam * pb[1] + p01,
        -lam * pb[2] + p01,
        -lam * pb[3] + p11,
    )
    return dxbar, dphibar


def estimate_deriv(theta_hat, xbar, phibar, cfg: EstimatorConfig) -> tuple:
    """Two-power gradient flow on the residual Xi = phibar theta_hat - xbar."""
    xi0 = phibar[0] * theta_hat[0] + phibar[1] * theta_hat[1] - xbar[0]
    xi1 = phibar[2] * theta_hat[0] + phibar[3] * theta_hat[1] - xbar[1]
    n = (xi0 * xi0 + xi1 * xi1) ** 0.5
    if n <= cfg.eps:
        return (0.0, 0.0)
    gain = cfg.c1 / n ** (1.0 - cfg.alpha1) + cfg.c2 / n ** (1.0 - cfg.alpha2)
    return (-gain * xi0, -gain * xi1)


def params_from_theta(theta_hat, floor: float) -> tuple:
    """Invert theta = (1/m, 1/J) for the control law, floored for safety."""
    return (1.0 / max(theta_hat[0], floor), 1.0 / max(theta_hat[1], floor))
