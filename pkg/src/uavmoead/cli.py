"""Command-line entry point: ``uavmoead {generate,run,metrics,export-paths}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .optimizers import ALGORITHMS
from .scenarios import ScenarioSpec, build_terrain, catalog_case, scaled
from .terrain import save_dem


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    specs = [ScenarioSpec.load(p) for p in args.spec or []]
    specs += [catalog_case(c, args.seed) for c in args.cases]
    if not specs:
        raise SystemExit("generate: give case ids or --spec files")
    for spec in specs:
        grid = build_terrain(spec)
        asc = out / f"{spec.id}.asc"
        save_dem(grid, asc)
        if spec.kind == "dem" and spec.dem_path is None:
            # the stand-in heightmap becomes the scenario's DEM source
            spec = scaled(spec, dem_path=str(asc))
        spec.save(out / f"{spec.id}.json")
        print(f"{spec.id}: {spec.kind}, {spec.obstacles} obstacles, grid {grid.shape[0]}x{grid.shape[1]}, "
              f"r_safe {spec.r_safe:g} m -> {asc}")
    return 0


def cmd_run(args) -> int:
    plan = harness.ExperimentPlan.load(args.plan) if args.plan else harness.ExperimentPlan()
    if args.cases:
        plan.scenarios = args.cases
    if args.algorithms:
        plan.algorithms = args.algorithms
    if args.runs is not None:
        plan.runs = args.runs
    if args.seed is not None:
        plan.seed = args.seed
    if args.out:
        plan.out = args.out
    plan.__post_init__()
    rows = harness.run_plan(plan, jobs=args.jobs)
    failures = (Path(plan.out) / "failures.log").read_text().splitlines()
    print(f"{len(rows)} metric rows written to {Path(plan.out) / 'metrics.csv'}")
    print((Path(plan.out) / "summary.csv").read_text(), end="")
    if failures:
        print(f"{len(failures)} cells failed, see failures.log", file=sys.stderr)
        return 1
    return 0


def cmd_metrics(args) -> int:
    out = Path(args.results)
    try:
        harness.compute_metrics(out)
    except FileNotFoundError as exc:
        print(f"metrics: {exc}", file=sys.stderr)
        return 2
    print((out / "summary.csv").read_text(), end="")
    return 0


def cmd_export_paths(args) -> int:
    out = Path(args.results)
    if not (out / "metrics.csv").exists():
        harness.compute_metrics(out)
    for p in harness.export_paths(out):
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavmoead", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write terrain heightmaps and scenario descriptors")
    g.add_argument("cases", nargs="*", help="catalog ids, e.g. C1 C11 C21")
    g.add_argument("--spec", action="append", help="scenario descriptor file (repeatable)")
    g.add_argument("--out", default="scenarios")
    g.add_argument("--seed", type=_u64, default=0)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="execute an experiment plan")
    r.add_argument("--plan", help="plan file (JSON); flags below override its fields")
    r.add_argument("--cases", type=_csv_list)
    r.add_argument("--algorithms", type=_csv_list, help=f"comma list from {','.join(ALGORITHMS)}")
    r.add_argument("--runs", type=int)
    r.add_argument("--seed", type=_u64)
    r.add_argument("--out")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_run)

    m = sub.add_parser("metrics", help="recompute metric tables from a result directory")
    m.add_argument("results", nargs="?", default="results")
    m.set_defaults(func=cmd_metrics)

    e = sub.add_parser("export-paths", help="write median-run fronts and shortest/safest paths")
    e.add_argument("results", nargs="?", default="results")
    e.set_defaults(func=cmd_export_paths)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (harness.PlanError, KeyError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
