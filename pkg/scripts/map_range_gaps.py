#!/usr/bin/env python3
"""Empirical map of the gap count across r for a fixed k.

For each r on a grid, runs the census up to the bound and prints the
number of closure intervals at the chosen resolution together with the
certified first-level gaps.  Exploratory evidence for the open question
of which r produce exactly L gaps; nothing here is a proof.
"""

import argparse

from sigma_density import explorer, primes, solver


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--r-min", type=float, default=1.5)
    parser.add_argument("--r-max", type=float, default=2.6)
    parser.add_argument("--r-step", type=float, default=0.1)
    parser.add_argument("--bound", type=int, default=100_000)
    parser.add_argument("--resolution", type=float, default=0.01)
    parser.add_argument("--prime-limit", type=int, default=primes.DEFAULT_LIMIT)
    args = parser.parse_args()

    table = primes.load_or_sieve(args.prime_limit)
    threshold = solver.eta(table, args.k, 1e-8).value.mid
    print(f"# k={args.k}, density threshold ~ {threshold:.7f}")
    print("r\tintervals\twide_gaps\tanalytic_gaps")
    r = args.r_min
    while r <= args.r_max + 1e-12:
        census = explorer.range_census(
            table, args.k, r, args.bound, resolution=args.resolution
        )
        analytic = ";".join(
            f"m={m}:({lo:.6f},{hi:.6f})" for m, lo, hi in census.analytic_gaps
        )
        print(f"{r:.3f}\t{census.estimated_intervals}\t{len(census.gaps)}\t{analytic or '-'}")
        r += args.r_step


if __name__ == "__main__":
    main()
