#!/usr/bin/env python3
"""Stress the certified bound against explicit witnesses on random sets.

Each trial draws a small random value set, certifies a lower bound on
the derivative scale, builds a staircase witness attaining the set, and
checks certified <= realized.  Any violation falsifies the bound
implementation and makes the script exit nonzero.
"""

import argparse
import sys
import time

import numpy as np

from rigidity.bounds import LambdaProfile, ProblemParams
from rigidity.sets import FinitePoints
from rigidity.witness import sandwich_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--d-values", default="1,2,3",
                    help="smoothness orders to cycle through")
    ap.add_argument("--size", type=int, default=None,
                    help="values per set (default d + 2)")
    ap.add_argument("--csv", help="write one row per trial here")
    args = ap.parse_args()

    orders = [int(tok) for tok in args.d_values.split(",")]
    rng = np.random.default_rng(args.seed)
    profile = LambdaProfile.zeros(1)

    failures = 0
    worst_ratio = 0.0
    rows = []
    start = time.perf_counter()
    for trial in range(args.trials):
        d = orders[trial % len(orders)]
        size = args.size if args.size is not None else d + 2
        values = rng.uniform(-2.0, 2.0, size=size)
        res = sandwich_check(ProblemParams(n=1, m=1, d=d), profile,
                             FinitePoints(values))
        ratio = res.gamma / res.witness_scale if res.witness_scale > 0 else 0.0
        worst_ratio = max(worst_ratio, ratio)
        if not res.ok:
            failures += 1
            print(f"trial {trial}: FALSIFIED  d={d} gamma={res.gamma!r} "
                  f"scale={res.witness_scale!r} values={values.tolist()}",
                  file=sys.stderr)
        rows.append((trial, d, res.gamma, res.witness_scale, ratio, res.ok))
    elapsed = time.perf_counter() - start

    print(f"trials: {args.trials}   failures: {failures}")
    print(f"worst certified/realized ratio: {worst_ratio:.6f}")
    print(f"elapsed: {elapsed:.2f}s")

    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("trial,d,gamma,witness_scale,ratio,ok\n")
            for row in rows:
                fh.write(",".join(str(v) for v in row) + "\n")
        print(f"wrote {args.csv}")

    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
