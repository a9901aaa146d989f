"""Fitted decay rate and line width against the golden rule as the continuum is refined.

Varies the number of levels at fixed bandwidth and coupling density, then the
ratio bandwidth/Gamma at fixed level count.
"""
import argparse
import math

import numpy as np

from qmbench import decay


def coupling_for(gamma, n_levels, bandwidth):
    return math.sqrt(gamma * bandwidth / n_levels / (2 * math.pi))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, default=0.5)
    ap.add_argument("--bandwidth", type=float, default=40.0)
    args = ap.parse_args()

    print("# level count sweep")
    print("levels,revival_time,gamma_golden,gamma_fit,rate_err,fwhm_err")
    for m in (250, 500, 1000, 2000, 4000):
        p = decay.flat_band(0.0, m, args.bandwidth, coupling_for(args.gamma, m, args.bandwidth))
        r = decay.simulate(p, min_ratio=10.0)
        print(f"{m},{decay.revival_time(p):.6g},{r.gamma_golden:.6g},{r.gamma_fit:.6g},"
              f"{r.gamma_fit / r.gamma_golden - 1:.3e},{r.lorentz_fwhm / r.gamma_golden - 1:.3e}")

    print("# Markov ratio sweep (2000 levels)")
    print("bandwidth_over_gamma,gamma_fit_over_golden,markov_half_gamma_over_golden")
    for ratio in (5, 10, 20, 40, 80):
        width = ratio * args.gamma
        p = decay.flat_band(0.0, 2000, width, coupling_for(args.gamma, 2000, width), center=0.1 * width)
        gamma, _ = decay.golden_rule(p)
        r = decay.simulate(p, min_ratio=1.0)
        t = np.linspace(0, 60.0 / width * 20, 20001)
        half, _ = decay.markov_rate(decay.memory_kernel(p, t), t)
        print(f"{ratio},{r.gamma_fit / gamma:.5f},{2 * half / gamma:.5f}")


if __name__ == "__main__":
    main()
