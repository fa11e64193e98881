"""Latency sweep for the cone projection across problem sizes.

Times the full certificate computation (projection, dual factor, residuals)
on random normal inputs and on already-ascending inputs, which force the
isotonic pass to merge everything into a single block. Medians are reported
per dimension so a stray scheduler hiccup does not skew the table.
"""

import argparse
import time
from statistics import median

import numpy as np

from mesoc import project_mesoc, warmup


def time_once(z, w):
    t0 = time.perf_counter()
    project_mesoc(z, w)
    return (time.perf_counter() - t0) * 1e3


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--dims",
        default="1000,10000,100000,1000000",
        help="comma-separated p values; q is set equal to p",
    )
    ap.add_argument("--reps", type=int, default=9)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    warmup()
    rng = np.random.default_rng(args.seed)
    dims = [int(c) for c in args.dims.split(",") if c.strip()]

    print(f"{'p = q':>10}  {'random ms':>12}  {'ascending ms':>13}")
    for p in dims:
        random_ms = []
        ascending_ms = []
        for _ in range(args.reps):
            random_ms.append(time_once(rng.standard_normal(p), rng.standard_normal(p)))
            z_adv = np.linspace(-1.0, 1.0, p)
            w_adv = np.full(p, 1.0 / np.sqrt(p))
            ascending_ms.append(time_once(z_adv, w_adv))
        print(f"{p:>10}  {median(random_ms):>12.3f}  {median(ascending_ms):>13.3f}")


if __name__ == "__main__":
    main()
