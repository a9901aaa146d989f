"""Grid convergence of the finite-difference Landau solve and its Richardson extrapolation."""
import math

import numpy as np

from qmbench import gaugefields


def main():
    b = 1.3
    cfg = gaugefields.LandauConfig(b)
    ell = cfg.magnetic_length
    exact = np.array([gaugefields.landau_energy(cfg, n) for n in range(4)])
    print("step_over_ell,max_err,richardson_err")
    prev = None
    for step in (0.08, 0.04, 0.02, 0.01, 0.005):
        x = np.arange(-12 * ell, 12 * ell + 0.5 * step * ell, step * ell)
        e = gaugefields.edge_spectrum(cfg, gaugefields.EdgeProblem(x, np.zeros_like(x), 0.0, 4)).energies
        rich = math.nan if prev is None else np.max(np.abs([gaugefields.richardson(c, f) for c, f in zip(prev, e)] - exact))
        print(f"{step},{np.max(np.abs(e - exact)):.3e},{rich:.3e}")
        prev = e


if __name__ == "__main__":
    main()
