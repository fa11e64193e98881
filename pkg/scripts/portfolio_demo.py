"""Solve the deviation-penalized portfolio model over a sweep of risk weights."""

import argparse

import numpy as np

from mesoc import load_scenarios, read_returns_csv, refine_jstar


def synthetic_scenarios(rng, T, n):
    # factor structure so assets are correlated but not redundant
    common = rng.normal(0.005, 0.02, (T, 1))
    idio = rng.normal(0.0, 0.03, (T, n))
    drift = rng.normal(0.01, 0.01, n)
    return load_scenarios(common + idio + drift)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--file", help="CSV of scenario returns; synthetic when omitted")
    ap.add_argument("--probabilities-column", type=int, default=None)
    ap.add_argument("--scenarios", type=int, default=6)
    ap.add_argument("--assets", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument(
        "--c0",
        default="0.5,1,2,4,8",
        help="comma-separated risk-aversion weights to sweep",
    )
    args = ap.parse_args()

    if args.file:
        data = read_returns_csv(args.file, args.probabilities_column)
    else:
        rng = np.random.default_rng(args.seed)
        data = synthetic_scenarios(rng, args.scenarios, args.assets)
    print(f"{data.n_scenarios} scenarios, {data.n_assets} assets")

    print(f"{'c0':>6}  {'objective':>12}  {'mad':>12}  {'j*':>3}  weights")
    for c0 in [float(c) for c in args.c0.split(",") if c.strip()]:
        sol = refine_jstar(data, c0)
        weights = " ".join(f"{w:+.4f}" for w in sol.w)
        flag = "" if sol.converged else "  (not converged)"
        print(
            f"{c0:>6.2f}  {sol.objective:>12.6f}  {sol.mad_objective:>12.6f}"
            f"  {sol.jstar:>3}  [{weights}]{flag}"
        )


if __name__ == "__main__":
    main()
