"""Per-generation trace of one run per algorithm on a single case.

Writes ``{out}/{case}_{algorithm}_trace.csv`` with the evaluation count,
feasible population size, archive size and reference point per generation,
plus the final front.

    python3 scripts/convergence.py C4 --seed 3 --out results/trace
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

from uavmoead.harness import write_front_csv
from uavmoead.optimizers import ALGORITHMS, RunConfig, run
from uavmoead.scenarios import build_problem, catalog_case, derive_seed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("case")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, help="override the catalog evaluation budget")
    ap.add_argument("--out", default="results/trace")
    args = ap.parse_args()

    spec = catalog_case(args.case)
    problem = build_problem(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for alg in ALGORITHMS:
        cfg = RunConfig(algorithm=alg, eval_budget=args.budget or spec.eval_budget,
                        seed=derive_seed(args.seed, spec.id, "paired", 0))
        res = run(problem, cfg, record_trace=True)
        with open(out / f"{spec.id}_{alg}_trace.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["generation", "evaluations", "feasible", "archive", "z1", "z2"])
            for t in res.trace:
                w.writerow([t["generation"], t["evaluations"], t["feasible"], t["archive"], *t["z"]])
        write_front_csv(out / f"{spec.id}_{alg}_front.csv", res.front_objectives())
        print(f"{alg}: {res.generations} generations, {len(res.front)} front members, "
              f"adjustments at {res.adjustments[:5]}{'...' if len(res.adjustments) > 5 else ''}")


if __name__ == "__main__":
    main()
