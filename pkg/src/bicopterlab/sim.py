"""Closed-loop simulation: plant, controller, and estimator in one ODE.

All continuous-time laws (extended plant, regressor filters, data
accumulators, estimate flow) are stacked into a single 40-state vector and
integrated synchronously with a fixed-step classical Runge-Kutta scheme;
there is no sample-and-hold. Runs are bitwise deterministic for a fixed
config.

Composite state layout (flat, 40 floats):

    0..7    chi   (plant + thrust chain)
    8..13   z1    (filter on x)
    14..19  z2    (filter on Psi)
    20..31  zphi  (filter on Phi, row-major 6x2)
    32..33  xbar
    34..37  phibar (row-major 2x2)
    38..39  theta_hat
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import isfinite

import numpy as np

from .errors import EmptySeries, NonFiniteState, SingularThrust, ValidationError
from .estimator import (
    EstimatorConfig,
    EstimatorState,
    data_matrix_deriv,
    estimate_deriv,
    filter_deriv,
    filter_outputs,
    params_from_theta,
)
from .linearizer import ParamEstimate, iol_w, xi_of_chi
from .model import PlantParams, extended_deriv
from .tracker import GainSet, place_gains, tracking_v
from .trajectory import EllipseSpec, HilbertSpec, ellipse_ref, hilbert_ref

__all__ = [
    "SimConfig",
    "CompositeState",
    "TimeSeries",
    "Metrics",
    "COLUMNS",
    "rk4_step",
    "total_deriv",
    "simulate",
    "summarize",
]

N_STATE = 40

# Settling thresholds used by the summary metrics.
SETTLE_POS_TOL = 0.05  # m
THETA_CONVERGE_TOL = 1e-6
RMSE_T_START = 3.0  # s


@dataclass(frozen=True)
class SimConfig:
    """Full description of one deterministic experiment."""

    plant: PlantParams = PlantParams()
    poles: tuple = (-4.5, -4.0, -5.0, -5.5)
    est: EstimatorConfig = EstimatorConfig()
    traj: object = EllipseSpec()
    dt: float = 1e-3
    t_end: float = 20.0
    adaptive: bool = True
    theta0: tuple = (2.0, 10.0)
    x0: tuple | None = None  # defaults to trajectory start, at rest, level
    log_every: int = 10

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValidationError("SimConfig.dt must be > 0")
        if not self.t_end >= self.dt:
            raise ValidationError("SimConfig.t_end must be >= dt")
        if not self.log_every >= 1:
            raise ValidationError("SimConfig.log_every must be >= 1")
        if len(self.theta0) != 2 or self.theta0[0] <= 0.0 or self.theta0[1] <= 0.0:
            raise ValidationError("SimConfig.theta0 entries must be > 0")
        if self.x0 is not None and len(self.x0) != 6:
            raise ValidationError("SimConfig.x0 must have 6 entries")

    @property
    def theta_true(self) -> tuple:
        return (1.0 / self.plant.m, 1.0 / self.plant.J)

    def reference(self, t: float):
        if isinstance(self.traj, EllipseSpec):
            return ellipse_ref(t, self.traj)
        return hilbert_ref(t, self.traj)

    def initial_state(self) -> list:
        """Flat composite state at t = 0.

        The vehicle starts at the trajectory start point, at rest and
        level, with hover thrust computed from the initial mass estimate;
        all estimator states are zero.
        """
        if self.x0 is not None:
            x = tuple(self.x0)
        else:
            sx, sy = self.traj.start()
            x = (sx, sy, 0.0, 0.0, 0.0, 0.0)
        chi7 = self.plant.g / self.theta0[0]
        y = list(x) + [chi7, 0.0]
        y += [0.0] * 32
        y[38], y[39] = self.theta0
        return y


@dataclass
class CompositeState:
    """Structured view of the flat 40-state vector."""

    chi: tuple
    est: EstimatorState

    @classmethod
    def from_flat(cls, y) -> "CompositeState":
        return cls(
            chi=tuple(y[0:8]),
            est=EstimatorState(
                z1=tuple(y[8:14]),
                z2=tuple(y[14:20]),
                zphi=tuple((y[20 + 2 * i], y[21 + 2 * i]) for i in range(6)),
                xbar=tuple(y[32:34]),
                phibar=tuple(y[34:38]),
                theta_hat=tuple(y[38:40]),
            ),
        )

    def to_flat(self) -> list:
        e = self.est
        y = list(self.chi) + list(e.z1) + list(e.z2)
        for row in e.zphi:
            y.extend(row)
        y += list(e.xbar) + list(e.phibar) + list(e.theta_hat)
        return y


@lru_cache(maxsize=16)
def _gains_for(poles: tuple) -> GainSet:
    return place_gains(poles)


def _deriv_flat(y, t: float, cfg: SimConfig) -> list:
    """Time derivative of the flat composite state."""
    p = cfg.plant
    ecfg = cfg.est
    chi = y[0:8]
    theta = (y[38], y[39])
    m_hat, j_hat = params_from_theta(theta, ecfg.theta_floor)
    est = ParamEstimate((1.0 / m_hat, 1.0 / j_hat))

    xi = xi_of_chi(chi, est, p.g)
    des = cfg.reference(t)
    v = tracking_v(xi, des, _gains_for(cfg.poles))
    w = iol_w(chi, v, est)
    dchi = extended_deriv(chi, w, p)

    x = chi[0:6]
    u = (chi[6], w[1])
    st = EstimatorState(
        z1=y[8:14],
        z2=y[14:20],
        zphi=((y[20], y[21]), (y[22], y[23]), (y[24], y[25]),
              (y[26], y[27]), (y[28], y[29]), (y[30], y[31])),
        xbar=y[32:34],
        phibar=y[34:38],
        theta_hat=theta,
    )
    dz1, dz2, dzphi = filter_deriv(st, x, u, p.g, ecfg.gamma)
    x_f, phi_f = filter_outputs(st, x, ecfg.gamma)
    dxbar, dphibar = data_matrix_deriv(st, x_f, phi_f, ecfg.forgetting)
    if cfg.adaptive:
        dtheta = estimate_deriv(theta, st.xbar, st.phibar, ecfg)
    else:
        dtheta = (0.0, 0.0)

    out = list(dchi) + list(dz1) + list(dz2)
    for row in dzphi:
        out.extend(row)
    out += [dxbar[0], dxbar[1], dphibar[0], dphibar[1], dphibar[2], dphibar[3],
            dtheta[0], dtheta[1]]
    return out


def total_deriv(state: CompositeState, t: float, cfg: SimConfig) -> CompositeState:
    """Structured wrapper over the flat closed-loop derivative."""
    return CompositeState.from_flat(_deriv_flat(state.to_flat(), t, cfg))


def rk4_step(state, t: float, dt: float, deriv) -> list:
    """One classical 4th-order Runge-Kutta step of an arbitrary ODE.

    `state` is any sequence of floats and `deriv(state, t)` returns a
    sequence of the same length.
    """
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    n = len(state)
    k1 = deriv(state, t)
    h2 = 0.5 * dt
    k2 = deriv([state[i] + h2 * k1[i] for i in range(n)], t + h2)
    k3 = deriv([state[i] + h2 * k2[i] for i in range(n)], t + h2)
    k4 = deriv([state[i] + dt * k3[i] for i in range(n)], t + dt)
    sixth = dt / 6.0
    out = [state[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(n)]
    if not isfinite(sum(out)):
        if not all(isfinite(v) for v in out):
            raise NonFiniteState("integration step produced a non-finite entry")
    return out


COLUMNS = (
    ("t",)
    + ("r1", "r2", "theta", "dr1", "dr2", "dtheta")
    + ("u1", "u2")
    + ("w1", "w2")
    + tuple(f"xi{i}" for i in range(1, 9))
    + tuple(f"xid{i}" for i in range(1, 9))
    + ("v1", "v2")
    + ("theta_hat1", "theta_hat2")
    + ("theta_err_norm",)
    + ("pos_err1", "pos_err2")
)


@dataclass
class TimeSeries:
    """Logged per-step records of one simulation run."""

    columns: tuple = COLUMNS
    rows: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([r[idx] for r in self.rows])

    def as_array(self) -> np.ndarray:
        return np.array(self.rows)

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write(",".join(self.columns) + "\n")
            for row in self.rows:
                f.write(",".join("%.17g" % v for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "TimeSeries":
        with open(path) as f:
            header = f.readline().strip()
            columns = tuple(header.split(","))
            rows = [tuple(float(v) for v in line.split(",")) for line in f if line.strip()]
        return cls(columns=columns, rows=rows)


def _record(y, t: float, cfg: SimConfig) -> tuple:
    """Logged row at one instant; recomputes the controller outputs."""
    p = cfg.plant
    theta = (y[38], y[39])
    m_hat, j_hat = params_from_theta(theta, cfg.est.theta_floor)
    est = ParamEstimate((1.0 / m_hat, 1.0 / j_hat))
    chi = y[0:8]
    xi = xi_of_chi(chi, est, p.g)
    des = cfg.reference(t)
    v = tracking_v(xi, des, _gains_for(cfg.poles))
    w = iol_w(chi, v, est)
    tt = cfg.theta_true
    theta_err = ((theta[0] - tt[0]) ** 2 + (theta[1] - tt[1]) ** 2) ** 0.5
    return (
        (t,)
        + tuple(chi[0:6])
        + (chi[6], w[1])
        + tuple(w)
        + tuple(xi)
        + tuple(des.xi_d)
        + tuple(v)
        + tuple(theta)
        + (theta_err,)
        + (chi[0] - des.xi_d[0], chi[1] - des.xi_d[4])
    )


def simulate(cfg: SimConfig) -> TimeSeries:
    """Integrate the closed loop from 0 to t_end with fixed step dt."""
    y = cfg.initial_state()
    dt = cfg.dt
    n_steps = int(round(cfg.t_end / dt))
    ts = TimeSeries()

    def deriv(state, t):
        return _deriv_flat(state, t, cfg)

    try:
        ts.rows.append(_record(y, 0.0, cfg))
    except (SingularThrust, NonFiniteState) as exc:
        raise type(exc)(f"aborted at step 0 (t = 0 s): {exc}") from exc
    for i in range(n_steps):
        t = i * dt
        try:
            y = rk4_step(y, t, dt, deriv)
        except (SingularThrust, NonFiniteState) as exc:
            raise type(exc)(f"aborted at step {i} (t = {t:g} s): {exc}") from exc
        if (i + 1) % cfg.log_every == 0 or i + 1 == n_steps:
            ts.rows.append(_record(y, (i + 1) * dt, cfg))
    return ts


_NOT_REACHED = float("inf")


@dataclass
class Metrics:
    """Summary numbers of one run; inf marks a threshold never reached."""

    pos_rmse: float
    settle_time: float
    theta_converge_time: float
    max_thrust: float
    max_torque: float

    def lines(self):
        for name in ("pos_rmse", "settle_time", "theta_converge_time",
                     "max_thrust", "max_torque"):
            yield f"{name}: {getattr(self, name):.17g}"


def _first_sustained(t: np.ndarray, values: np.ndarray, tol: float) -> float:
    """Earliest logged time after which `values` stays below tol."""
    below = values < tol
    if not below[-1]:
        return _NOT_REACHED
    # index of the last sample at or above tol
    above = np.nonzero(~below)[0]
    if len(above) == 0:
        return float(t[0])
    idx = above[-1] + 1
    return float(t[idx]) if idx < len(t) else _NOT_REACHED


def summarize(ts: TimeSeries, cfg: SimConfig | None = None) -> Metrics:
    """Compute the summary metrics of a logged run."""
    if not ts.rows:
        raise EmptySeries("cannot summarize an empty time series")
    t = ts.column("t")
    pos_err = np.hypot(ts.column("pos_err1"), ts.column("pos_err2"))
    theta_err = ts.column("theta_err_norm")
    window = t >= min(RMSE_T_START, t[-1])
    rmse = float(np.sqrt(np.mean(pos_err[window] ** 2)))
    return Metrics(
        pos_rmse=rmse,
        settle_time=_first_sustained(t, pos_err, SETTLE_POS_TOL),
        theta_converge_time=_first_sustained(t, theta_err, THETA_CONVERGE_TOL),
        max_thrust=float(np.abs(ts.column("u1")).max()),
        max_torque=float(np.abs(ts.column("u2")).max()),
    )
