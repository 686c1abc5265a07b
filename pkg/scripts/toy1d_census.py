#!/usr/bin/env python3
"""Count gap-equation solutions of the 1-D toy model over a (delta_mu, T)
grid and tabulate how the counts split into the four phase regions.

Usage: python3 scripts/toy1d_census.py [n_dmu] [n_T]

The coupling is tuned so the balanced critical temperature is 1e-3 (in
units of mu), which puts the interesting region at delta_mu, T ~ 1e-3.
"""

import collections
import math
import sys

import numpy as np

from polarfermi.core import PhysParams
from polarfermi.toy1d import gap_integral_1d, max_gap_integral_1d, solve_gap_1d

ACOSH2 = math.acosh(2.0)


def main():
    n_dmu = int(sys.argv[1]) if len(sys.argv) > 1 else 16
    n_T = int(sys.argv[2]) if len(sys.argv) > 2 else 16
    mu, tc = 1.0, 1e-3
    g = 1.0 / gap_integral_1d(0.0, PhysParams(mu, 0.0, tc))
    print(f"coupling g = {g:.10g}  (balanced T_c = {tc:g})")

    dmus = np.linspace(5e-5, 2e-3, n_dmu)
    temps = np.logspace(math.log10(2e-5), math.log10(2e-3), n_T)
    target = 1.0 / g
    census = collections.Counter()
    for dmu in dmus:
        for T in temps:
            p = PhysParams(mu, float(dmu), float(T), g)
            count = solve_gap_1d(p).count
            gi0 = gap_integral_1d(0.0, p)
            gmax = max_gap_integral_1d(p, refine=False)[1]
            if gi0 > target:
                region = "inside i-curve"
            elif gmax < target:
                region = "outside o-curve"
            elif p.c > ACOSH2:
                region = "between (c > acosh 2)"
            else:
                region = "between (c <= acosh 2)"
            census[(region, count)] += 1

    print(f"\n{'region':28s} {'count':>5s} {'points':>7s}")
    for (region, count), n in sorted(census.items()):
        print(f"{region:28s} {count:5d} {n:7d}")


if __name__ == "__main__":
    main()
