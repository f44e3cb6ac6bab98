"""Experiment plans, seeded multi-run orchestration, result persistence and exports.

Output layout under a plan's output directory::

    scenarios/{case}.json            scenario descriptors
    results/{case}/{algo}/run_XX.json
    metrics.csv                      case,algorithm,run,hv,pd,score
    summary.csv                      mean±std (rank) per case, metric and algorithm
    ranking.csv                      overall rank sums
    fronts/{case}_{algo}.csv         median-score run front (f1,f2)
    paths/{case}_{algo}_{shortest|safest}.csv
    failures.log                     one line per failed cell
    timing.log                       wall times (the only non-deterministic file)
"""

from __future__ import annotations

import csv
import json
import logging
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .metrics import MetricRow, case_metrics, score_and_rank, _case_key
from .optimizers import ALGORITHMS, RunConfig, run
from .scenarios import ScenarioSpec, build_problem, catalog_case, derive_seed, scaled
from .spline import write_path_csv

log = logging.getLogger(__name__)

METRICS_HEADER = ["case", "algorithm", "run", "hv", "pd", "score"]
FRONT_HEADER = ["f1", "f2"]


class PlanError(ValueError):
    pass


@dataclass
class ExperimentPlan:
    """What to run: scenarios x algorithms x runs, plus shared run settings.

    ``scenarios`` entries are catalog ids (``"C1"``) or dicts with a ``"case"``
    id and ScenarioSpec field overrides (e.g. a coarser ``cell_size``).
    ``run_overrides`` are applied to every RunConfig. With ``paired_seeds``
    the algorithm id is left out of the seed hash, so run ``r`` of every
    algorithm starts from the same stream.
    """

    scenarios: list = field(default_factory=lambda: ["C1"])
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    runs: int = 10
    seed: int = 0
    out: str = "results"
    paired_seeds: bool = False
    run_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.runs < 1:
            raise PlanError("runs must be >= 1")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise PlanError(f"unknown algorithms {bad}; choose from {ALGORITHMS}")
        if not self.algorithms:
            raise PlanError("plan has no algorithms")
        ids = [s if isinstance(s, str) else s.get("case") for s in self.scenarios]
        if len(set(ids)) != len(ids):
            raise PlanError("duplicate scenario ids in plan")

    @classmethod
    def load(cls, path) -> "ExperimentPlan":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise PlanError(f"{path}: {exc}") from exc
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise PlanError(f"{path}: unknown plan keys {sorted(unknown)}")
        return cls(**data)

    def save(self, path) -> None:
        Path(path).write_text(_dumps(asdict(self)))

    def scenario_specs(self) -> list[ScenarioSpec]:
        specs = []
        for entry in self.scenarios:
            if isinstance(entry, str):
                specs.append(catalog_case(entry, self.seed))
            else:
                entry = dict(entry)
                case = entry.pop("case")
                specs.append(scaled(catalog_case(case, self.seed), **entry))
        return specs

    def cell_seed(self, case: str, algorithm: str, run_index: int) -> int:
        if self.paired_seeds:
            return derive_seed(self.seed, case, "paired", run_index)
        return derive_seed(self.seed, case, algorithm, run_index)


@dataclass(frozen=True)
class Cell:
    spec: ScenarioSpec
    algorithm: str
    run: int
    config: RunConfig
    path: Path


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def _dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def result_path(out: Path, case: str, algorithm: str, run_index: int) -> Path:
    return Path(out) / "results" / case / algorithm / f"run_{run_index:02d}.json"


def result_document(spec: ScenarioSpec, res) -> dict:
    return {
        "case": spec.id,
        "scenario": spec.to_dict(),
        "config": res.config.to_dict(),
        "seed": res.config.seed,
        "evaluations": res.evaluations,
        "generations": res.generations,
        "adjustments": res.adjustments,
        "feasible_population": int(sum(p.feasible for p in res.population)),
        "front": [{"f": p.f.tolist(), "x": p.x.tolist()} for p in res.front],
    }


def load_result(path) -> dict:
    doc = json.loads(Path(path).read_text())
    for key in ("case", "config", "front", "scenario"):
        if key not in doc:
            raise ValueError(f"{path}: missing key {key!r}")
    for member in doc["front"]:
        if len(member["f"]) != 2:
            raise ValueError(f"{path}: objective vectors must have two entries")
    return doc


def front_array(doc: dict) -> np.ndarray:
    if not doc["front"]:
        return np.empty((0, 2))
    return np.array([m["f"] for m in doc["front"]], dtype=float)


def write_metrics_csv(path, rows: list[MetricRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for r in rows:
            w.writerow([r.case, r.algorithm, r.run, repr(r.hv), repr(r.pd), r.score])


def read_metrics_csv(path) -> list[MetricRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != METRICS_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        return [MetricRow(c, a, int(r), float(h), float(p), int(s)) for c, a, r, h, p, s in reader]


def write_summary_csv(path, rows: list[MetricRow]) -> None:
    table, overall, _ = score_and_rank(rows)
    algs = sorted({r.algorithm for r in rows})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["case", "metric", *algs])
        for case, cells in table.items():
            for metric in ("hv", "pd"):
                line = [case, metric.upper()]
                for a in algs:
                    c = cells.get(a, {}).get(metric)
                    line.append("" if c is None else f"{c.mean:.4f}±{c.std:.4f} ({c.rank})")
                w.writerow(line)
        w.writerow(["overall", "rank sum", *[overall.get(a, "") for a in algs]])


def write_ranking_csv(path, rows: list[MetricRow]) -> None:
    _, overall, _ = score_and_rank(rows)
    order = sorted(overall, key=lambda a: (overall[a], a))
    places = {a: 1 + sum(1 for b in overall if overall[b] < overall[a]) for a in order}
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "rank_sum", "place"])
        for a in order:
            w.writerow([a, overall[a], places[a]])


def write_front_csv(path, front: np.ndarray) -> None:
    front = np.asarray(front, dtype=float).reshape(-1, 2)
    front = front[np.lexsort((front[:, 1], front[:, 0]))]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FRONT_HEADER)
        for f1, f2 in front:
            w.writerow([repr(float(f1)), repr(float(f2))])


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def plan_cells(plan: ExperimentPlan, out: Path) -> list[Cell]:
    cells = []
    for spec in plan.scenario_specs():
        for alg in plan.algorithms:
            for r in range(plan.runs):
                cfg = RunConfig(algorithm=alg, eval_budget=spec.eval_budget,
                                seed=plan.cell_seed(spec.id, alg, r))
                for k, v in plan.run_overrides.items():
                    if k in ("algorithm", "seed"):
                        raise PlanError(f"run_overrides may not set {k!r}")
                    setattr(cfg, k, v)
                cfg.__post_init__()
                cells.append(Cell(spec, alg, r, cfg, result_path(out, spec.id, alg, r)))
    return cells


def execute_cell(cell: Cell) -> tuple[Cell, float, str | None]:
    """Run one cell and persist its result. Returns (cell, wall seconds, error text)."""
    t0 = time.perf_counter()
    try:
        problem = build_problem(cell.spec)
        res = run(problem, cell.config)
        cell.path.parent.mkdir(parents=True, exist_ok=True)
        cell.path.write_text(_dumps(result_document(cell.spec, res)))
        return cell, time.perf_counter() - t0, None
    except Exception as exc:  # a failing cell must not stop the plan
        detail = traceback.format_exception_only(type(exc), exc)[-1].strip()
        return cell, time.perf_counter() - t0, detail


def run_plan(plan: ExperimentPlan, out=None, jobs: int = 1) -> list[MetricRow]:
    """Execute every cell of ``plan``, then write metrics, summaries and exports."""
    out = Path(out if out is not None else plan.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "scenarios").mkdir(exist_ok=True)
    for spec in plan.scenario_specs():
        spec.save(out / "scenarios" / f"{spec.id}.json")
    plan.save(out / "plan.json")
    cells = plan_cells(plan, out)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(execute_cell, cells))
    else:
        outcomes = [execute_cell(c) for c in cells]
    failures = []
    with open(out / "timing.log", "a") as tl:
        tl.write(f"# plan started {time.strftime('%Y-%m-%dT%H:%M:%S')}\n")
        for cell, secs, err in outcomes:
            tl.write(f"{cell.spec.id} {cell.algorithm} {cell.run} {secs:.3f}s\n")
            if err is not None:
                failures.append(f"{cell.spec.id} {cell.algorithm} run {cell.run}: {err}")
                log.warning("cell failed: %s", failures[-1])
    (out / "failures.log").write_text("".join(f + "\n" for f in failures))
    rows = compute_metrics(out)
    export_paths(out)
    return rows


# ---------------------------------------------------------------------------
# Aggregation and exports
# ---------------------------------------------------------------------------


def collect_results(out) -> dict[str, dict[tuple[str, int], dict]]:
    """All readable result documents, grouped by case. Corrupt files are skipped."""
    root = Path(out) / "results"
    grouped: dict[str, dict[tuple[str, int], dict]] = {}
    for path in sorted(root.glob("*/*/run_*.json")):
        try:
            doc = load_result(path)
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("skipping corrupt result %s: %s", path, exc)
            continue
        run_index = int(path.stem.split("_")[1])
        grouped.setdefault(doc["case"], {})[(doc["config"]["algorithm"], run_index)] = doc
    return grouped


def compute_metrics(out) -> list[MetricRow]:
    """Recompute HV/PD from persisted fronts and write the metric tables."""
    out = Path(out)
    grouped = collect_results(out)
    if not grouped:
        raise FileNotFoundError(f"no result files under {out / 'results'}")
    rows: list[MetricRow] = []
    for case in sorted(grouped, key=_case_key):
        fronts = {k: front_array(doc) for k, doc in grouped[case].items()}
        rows.extend(case_metrics(case, fronts))
    write_metrics_csv(out / "metrics.csv", rows)
    write_summary_csv(out / "summary.csv", rows)
    write_ranking_csv(out / "ranking.csv", rows)
    return rows


def export_paths(out) -> list[Path]:
    """Median-score fronts plus shortest and safest paths of those runs."""
    out = Path(out)
    grouped = collect_results(out)
    rows = read_metrics_csv(out / "metrics.csv")
    _, _, median_runs = score_and_rank(rows)
    (out / "fronts").mkdir(exist_ok=True)
    (out / "paths").mkdir(exist_ok=True)
    written = []
    for (case, alg), run_index in sorted(median_runs.items()):
        doc = grouped[case][(alg, run_index)]
        front_file = out / "fronts" / f"{case}_{alg}.csv"
        write_front_csv(front_file, front_array(doc))
        written.append(front_file)
        if not doc["front"]:
            continue
        problem = build_problem(ScenarioSpec.from_dict(doc["scenario"]))
        members = doc["front"]
        picks = {"shortest": min(members, key=lambda m: (m["f"][0], m["f"][1])),
                 "safest": min(members, key=lambda m: (m["f"][1], m["f"][0]))}
        for label, member in picks.items():
            path_file = out / "paths" / f"{case}_{alg}_{label}.csv"
            write_path_csv(path_file, problem.path(np.array(member["x"])))
            written.append(path_file)
    return written


def revalidate(doc: dict, tol: float = 1e-9) -> list[str]:
    """Problems found when re-evaluating a persisted front; empty when it is sound."""
    problem = build_problem(ScenarioSpec.from_dict(doc["scenario"]))
    issues = []
    fs = front_array(doc)
    for i, member in enumerate(doc["front"]):
        f, v = problem.evaluate(np.array(member["x"]))
        if not v.feasible:
            issues.append(f"member {i} infeasible")
        if not np.allclose(f, member["f"], rtol=0, atol=tol * max(1.0, float(np.max(np.abs(f))))):
            issues.append(f"member {i} objectives differ: {f.tolist()} vs {member['f']}")
        others = np.delete(fs, i, axis=0)
        if len(others) and np.any(np.all(others <= fs[i], axis=1) & np.any(others < fs[i], axis=1)):
            issues.append(f"member {i} dominated")
    return issues
