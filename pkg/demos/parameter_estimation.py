"""Finite-time parameter estimation demo.

Watches the two-power gradient flow recover theta = (1/m, 1/J) = (1, 20)
from the initial guess (2, 10) while the vehicle flies the ellipse. The
mass channel converges in well under a second; the inertia channel is
excitation-starved (the ellipse needs only ~0.01 N m of torque) and creeps.
Raising c1 speeds both up, which is also shown.
"""

from dataclasses import replace

import numpy as np

from bicopterlab import EstimatorConfig, SimConfig, simulate


def trace(cfg: SimConfig) -> None:
    ts = simulate(cfg)
    t = ts.column("t")
    th1, th2 = ts.column("theta_hat1"), ts.column("theta_hat2")
    te = ts.column("theta_err_norm")
    print("   t      theta1_hat  theta2_hat  |theta - theta_hat|")
    for tq in (0.0, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        if tq > t[-1]:
            break
        i = int(np.argmin(np.abs(t - tq)))
        print(f"  {t[i]:5.1f}   {th1[i]:10.6f}  {th2[i]:10.4f}  {te[i]:.6f}")
    print()


def main() -> None:
    print("True theta = (1, 20); initial estimate (2, 10); default gains\n"
          "c1=6, c2=3, alpha1=0.2, alpha2=1.2, lambda=80, gamma=10.\n")
    trace(SimConfig())

    print("Same run with c1 doubled and quadrupled -- the estimation error\n"
          "at any fixed time shrinks as the flow gain grows:\n")
    for c1 in (6.0, 12.0, 24.0):
        cfg = replace(SimConfig(t_end=5.0), est=EstimatorConfig(c1=c1))
        te_final = simulate(cfg).column("theta_err_norm")[-1]
        print(f"  c1 = {c1:4.0f}:  |theta error| at 5 s = {te_final:.4f}")

    print("\nThe mass estimate snaps to 1.0 because thrust (~9.8 N) excites")
    print("its regressor channel strongly; the inertia estimate moves at a")
    print("rate proportional to c1 * sigma^0.2, where sigma ~ 1e-8 is the")
    print("torque channel's entry in the forgetting-factor data matrix.")


if __name__ == "__main__":
    main()
