"""Gap between the shooting curves and the closed-form Heaviside curves over a speed grid."""
import numpy as np

from rmwave import analytic, bifurcation
from rmwave.model import ModelParams


def main():
    params = ModelParams()
    print(f"{'c':>5} {'beta0':>14} {'gap0':>9} {'beta1':>14} {'gap1':>9}")
    worst = 0.0
    for c in np.round(np.arange(2.0, 4.01, 0.25), 12):
        b0 = bifurcation.solve_beta0(params, c).beta
        g0 = abs(analytic.analytic_beta0(c) - b0)
        b1 = bifurcation.solve_beta1(params, c).beta
        g1 = abs(analytic.analytic_beta1(c) - b1)
        worst = max(worst, g0, g1)
        print(f"{c:5.2f} {b0:14.10f} {g0:9.1e} {b1:14.10f} {g1:9.1e}")
    print(f"max gap {worst:.2e}; closed-form beta_cj = {analytic.solve_beta_cj():.15f}")


if __name__ == "__main__":
    main()
