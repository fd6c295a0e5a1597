"""Closed-loop integration, logging, and summary metrics."""

from dataclasses import replace

import numpy as np
import pytest

from bicopterlab.errors import EmptySeries, SingularThrust, ValidationError
from bicopterlab.sim import (
    COLUMNS,
    CompositeState,
    Metrics,
    SimConfig,
    TimeSeries,
    rk4_step,
    simulate,
    summarize,
    total_deriv,
)
from bicopterlab.trajectory import HilbertSpec

KNOWN = SimConfig(adaptive=False, theta0=(1.0, 20.0))


def test_config_validation():
    with pytest.raises(ValidationError):
        SimConfig(dt=0.0)
    with pytest.raises(ValidationError):
        SimConfig(t_end=1e-4, dt=1e-3)
    with pytest.raises(ValidationError):
        SimConfig(log_every=0)
    with pytest.raises(ValidationError):
        SimConfig(theta0=(2.0, -1.0))


def test_composite_state_round_trip():
    rng = np.random.default_rng(33)
    y = list(rng.normal(size=40))
    assert CompositeState.from_flat(y).to_flat() == y


def test_rk4_constant():
    y = [1.0, -2.0, 3.0]
    out = rk4_step(y, 0.0, 0.1, lambda s, t: [0.0, 0.0, 0.0])
    assert out == y


def test_rk4_stability_polynomial():
    # One step on dy = -y reproduces the degree-4 Taylor polynomial of
    # e^{-h} exactly: 1 - h + h^2/2 - h^3/6 + h^4/24 at h = 0.1.
    out = rk4_step([1.0], 0.0, 0.1, lambda s, t: [-s[0]])
    assert out[0] == pytest.approx(0.9048375, abs=1e-12)


def test_rk4_fourth_order_convergence():
    def run(n):
        y = [1.0]
        h = 1.0 / n
        for i in range(n):
            y = rk4_step(y, i * h, h, lambda s, t: [-s[0]])
        return abs(y[0] - np.exp(-1.0))

    e1, e2 = run(50), run(100)
    assert e1 / e2 == pytest.approx(16.0, rel=0.05)


def test_total_deriv_equilibrium():
    # Hovering on the clamped endpoint of the Hilbert path with true
    # parameters: the plant/controller states are stationary; only the
    # estimator filters still move.
    cfg = SimConfig(traj=HilbertSpec(), t_end=40.0, adaptive=False, theta0=(1.0, 20.0))
    chi = (3.0, 0.0, 0.0, 0.0, 0.0, 0.0, cfg.plant.m * cfg.plant.g, 0.0)
    y = chi + (0.0,) * 30 + (1.0, 20.0)
    d = total_deriv(CompositeState.from_flat(list(y)), 35.0, cfg)
    assert np.asarray(d.chi) == pytest.approx(np.zeros(8), abs=1e-12)


def test_simulate_known_params_tracks():
    cfg = replace(KNOWN, t_end=6.0)
    ts = simulate(cfg)
    met = summarize(ts, cfg)
    assert met.pos_rmse < 1e-2
    assert met.settle_time < 2.0
    assert np.isfinite(met.max_thrust) and np.isfinite(met.max_torque)


def test_simulate_reports_abort_step():
    # An absurd initial mass estimate yields sub-guard hover thrust and the
    # run must abort immediately, naming the step.
    cfg = SimConfig(theta0=(200.0, 10.0), t_end=1.0)
    with pytest.raises(SingularThrust, match="aborted at step 0"):
        simulate(cfg)


def test_log_decimation_and_columns():
    cfg = replace(KNOWN, t_end=0.1, log_every=10)
    ts = simulate(cfg)
    assert ts.columns == COLUMNS
    assert len(ts.rows) == 11  # t = 0 plus every 10th of 100 steps
    assert ts.column("t")[1] == pytest.approx(0.01)
    assert all(len(row) == len(COLUMNS) for row in ts.rows)


def test_csv_round_trip(tmp_path):
    cfg = replace(KNOWN, t_end=0.05, log_every=5)
    ts = simulate(cfg)
    path = tmp_path / "run.csv"
    ts.to_csv(path)
    back = TimeSeries.from_csv(path)
    assert back.columns == ts.columns
    assert back.rows == [tuple(r) for r in ts.rows]


def test_logged_xi_follows_linear_model():
    # With true parameters the logged transformed state obeys the Brunovsky
    # model: finite differences of xi match A xi + B v to integration order.
    from bicopterlab.tracker import brunovsky_matrices

    A, B = brunovsky_matrices()
    cfg = replace(KNOWN, t_end=2.0, log_every=1)
    ts = simulate(cfg)
    t = ts.column("t")
    h = t[1] - t[0]
    xi = np.column_stack([ts.column(f"xi{i}") for i in range(1, 9)])
    v = np.column_stack([ts.column("v1"), ts.column("v2")])
    dxi = (xi[2:] - xi[:-2]) / (2.0 * h)
    model = xi[1:-1] @ A.T + v[1:-1] @ B.T
    settled = t[1:-1] >= 0.5  # skip the fast startup transient
    assert np.abs(dxi - model)[settled].max() < 1e-3


def test_adaptive_estimate_error_monotone():
    # The two-power flow only ever shrinks the estimation error once the
    # data matrices have charged up.
    cfg = SimConfig(t_end=5.0)
    ts = simulate(cfg)
    t = ts.column("t")
    te = ts.column("theta_err_norm")
    after = te[t >= 0.5]
    assert np.all(np.diff(after) <= 1e-9)


def _series_with(pos_err, theta_err, dt=0.1):
    ts = TimeSeries()
    i_pe1 = COLUMNS.index("pos_err1")
    i_pe2 = COLUMNS.index("pos_err2")
    i_te = COLUMNS.index("theta_err_norm")
    for k, (pe, te) in enumerate(zip(pos_err, theta_err)):
        row = [0.0] * len(COLUMNS)
        row[0] = k * dt
        row[i_pe1] = pe
        row[i_pe2] = 0.0
        row[i_te] = te
        ts.rows.append(tuple(row))
    return ts


def test_summarize_zero_error():
    ts = _series_with([0.0] * 50, [0.0] * 50)
    met = summarize(ts)
    assert met.settle_time == 0.0
    assert met.theta_converge_time == 0.0
    assert met.pos_rmse == 0.0


def test_summarize_threshold_crossing():
    theta = [1.0 if k * 0.1 < 0.4 else 1e-9 for k in range(50)]
    ts = _series_with([0.0] * 50, theta)
    met = summarize(ts)
    assert met.theta_converge_time == pytest.approx(0.4)


def test_summarize_constant_error_rmse():
    ts = _series_with([0.1] * 100, [1.0] * 100)
    met = summarize(ts)
    assert met.pos_rmse == pytest.approx(0.1)
    assert met.settle_time == float("inf")
    assert met.theta_converge_time == float("inf")


def test_summarize_empty_series():
    with pytest.raises(EmptySeries):
        summarize(TimeSeries())
