"""Run the C1 comparison of MOEA/D-AAWA against C-MOEA/D and report the
HV gap, PD ordering and front feasibility over ten seeded runs.

    python3 scripts/desk_check.py --out results/c1_desk
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from uavmoead.harness import ExperimentPlan, collect_results, revalidate, run_plan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results/c1_desk")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    plan = ExperimentPlan(scenarios=["C1"], algorithms=["aawa", "cmoead"], runs=args.runs, seed=args.seed)
    t0 = time.perf_counter()
    rows = run_plan(plan, args.out, jobs=args.jobs)
    elapsed = time.perf_counter() - t0

    docs = collect_results(args.out)["C1"]
    for alg in plan.algorithms:
        hv = [r.hv for r in rows if r.algorithm == alg]
        pd = [r.pd for r in rows if r.algorithm == alg]
        feasible = sum(bool(d["front"]) and not revalidate(d) for (a, _), d in docs.items() if a == alg)
        print(f"{alg:7s} HV {np.mean(hv):.4f}±{np.std(hv):.4f}  PD {np.mean(pd):9.2f}±{np.std(pd):8.2f}  "
              f"feasible fronts {feasible}/{args.runs}")
    gap = (np.mean([r.hv for r in rows if r.algorithm == "aawa"])
           - np.mean([r.hv for r in rows if r.algorithm == "cmoead"]))
    print(f"HV gap {gap:.4f}; wall time {elapsed:.0f} s")


if __name__ == "__main__":
    main()
