"""Paired-seed comparison of areal (aawa) and plain (awa) weight addition.

Run ``r`` of both variants starts from the same random stream, so the two
runs differ only in how new weight vectors are built. Reports per-pair PD
wins and a one-sided sign-test p-value.

    python3 scripts/ablation.py --cases C8,C9 --runs 10
"""

from __future__ import annotations

import argparse
from math import comb

import numpy as np

from uavmoead.harness import ExperimentPlan, run_plan


def sign_test(wins: int, n: int) -> float:
    """P(X >= wins) for X ~ Binomial(n, 1/2)."""
    return sum(comb(n, k) for k in range(wins, n + 1)) / 2**n


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cases", default="C8,C9")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/ablation")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    plan = ExperimentPlan(scenarios=args.cases.split(","), algorithms=["aawa", "awa"], runs=args.runs,
                          seed=args.seed, paired_seeds=True)
    rows = run_plan(plan, args.out, jobs=args.jobs)
    for case in plan.scenarios:
        pd = {(r.algorithm, r.run): r.pd for r in rows if r.case == case}
        diff = np.array([pd[("aawa", r)] - pd[("awa", r)] for r in range(args.runs)])
        wins = int(np.sum(diff >= 0))
        print(f"{case}: aawa PD >= awa PD in {wins}/{args.runs} pairs, mean difference {diff.mean():+.2f} "
              f"(sd {diff.std(ddof=1) if args.runs > 1 else 0:.2f}), sign-test p = {sign_test(wins, args.runs):.3f}")


if __name__ == "__main__":
    main()
