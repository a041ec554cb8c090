"""Sweep the Werner and isotropic families and compare against closed forms.

Runs the numerical two-sided geometric discord along each one-parameter
family and prints the worst deviation from the analytic expression, plus
the location where the closed form vanishes.

Usage: python3 closed_form_sweep.py [--m 3] [--points 11] [--restarts 16]
"""

import argparse

import numpy as np

import twodiscord as td


def sweep(family, m, xs, cfg):
    make = td.werner if family == "werner" else td.isotropic
    closed = td.werner_geo_closed if family == "werner" else td.isotropic_geo_closed
    print(f"\n{family} family, m={m}")
    print(f"{'x':>8} {'closed':>14} {'numeric':>14} {'gap':>10}")
    worst = 0.0
    for x in xs:
        want = closed(m, x)
        got = td.geo_discord_two_sided(make(m, x), cfg).value
        gap = abs(got - want)
        worst = max(worst, gap)
        print(f"{x:8.3f} {want:14.9f} {got:14.9f} {gap:10.2e}")
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=3, help="local dimension")
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--restarts", type=int, default=16)
    args = ap.parse_args()

    cfg = td.OptimizerConfig(restarts=args.restarts, seed=0)
    w = sweep("werner", args.m, np.linspace(-1.0, 1.0, args.points), cfg)
    i = sweep("isotropic", args.m, np.linspace(0.0, 1.0, args.points), cfg)

    m = args.m
    print(f"\nworst gaps: werner {w:.2e}, isotropic {i:.2e}")
    print(f"werner closed form vanishes at x = 1/m = {1 / m:.6f}:",
          td.werner_geo_closed(m, 1 / m))
    print(f"isotropic closed form vanishes at x = 1/m^2 = {1 / m**2:.6f}:",
          td.isotropic_geo_closed(m, 1 / m**2))


if __name__ == "__main__":
    main()
