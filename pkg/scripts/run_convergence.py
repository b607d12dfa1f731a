#!/usr/bin/env python3
"""Regularization convergence study.

Runs the quantitative-bound grid (error vs bound over (eps, delta)) and the
optimal-schedule rate measurement, writing both as CSV. Used for the tables
behind the strategy and rate claims.
"""

import argparse
from pathlib import Path

from torusradon.experiments import convergence_rate_experiment, strategy_bound_experiment
from torusradon.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/convergence", help="output directory")
    ap.add_argument("--band", type=int, default=8)
    ap.add_argument("--seed", type=int, default=20190614)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    eps_list = [10.0**-i for i in range(1, 7)]
    deltas = [0.25, 0.5, 0.75, 1.0, 1.5]
    rows = strategy_bound_experiment(eps_list, deltas, s=1.0, r=0.0, t=0.0,
                                     K=args.band, seed=args.seed)
    write_csv(out / "bound_grid.csv", "eps,delta,alpha,err,bound",
              [tuple(float(x) for x in r) for r in rows])
    worst = max(err / bound for _, _, _, err, bound in rows)
    print(f"bound grid: {len(rows)} points, worst err/bound = {worst:.3f}")

    rate_rows = []
    for delta, s in [(1.0, 2.0), (2.0, 2.0)]:
        slope, pts = convergence_rate_experiment(
            [1e-1, 1e-2, 1e-3, 1e-4, 1e-5], delta=delta, s=s, K=16)
        target = delta / (2 * s + delta)
        print(f"delta={delta}, s={s}: slope {slope:.3f} (theory {target:.3f})")
        for eps, err in pts:
            rate_rows.append((float(delta), float(s), float(eps), float(err),
                              float(slope), float(target)))
    write_csv(out / "rate.csv", "delta,s,eps,err,fitted_slope,theory_slope", rate_rows)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
