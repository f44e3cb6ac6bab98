"""MOEA/D-AAWA, MOEA/D-AWA and C-MOEA/D main loops.

All three share initialisation, utility-based resource allocation, variation
and the constrained population update. ``cmoead`` keeps its initial weights;
``awa`` and ``aawa`` adjust them late in the run and differ only in how the
weight of an added subproblem is built.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import aawa as adj
from .moead import (
    Individual,
    boundary_indices,
    build_neighborhoods,
    init_weights,
    polynomial_mutation,
    repair,
    sbx_crossover,
    tchebycheff,
    update_population,
    update_reference,
    REFERENCE_OFFSET,
)

ALGORITHMS = ("aawa", "awa", "cmoead")


@dataclass
class RunConfig:
    algorithm: str = "aawa"
    pop_size: int = 20
    neighborhood_size: int | None = None  # 0.1 * N
    delta: float = 0.9
    n_r: int = 2
    r_evol: float = 0.8
    r_pop: float = 0.2
    nus: int | None = None  # 0.1 * N
    g_r: int = 50
    g_w: int = 100
    eval_budget: int = 10000
    eta_c: float = 20.0
    eta_m: float = 1.0
    p_mut: float | None = None  # 1 / genome length
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not (0 < self.r_evol <= 1 and 0 < self.r_pop <= 1):
            raise ValueError("r_evol and r_pop must lie in (0, 1]")
        if self.T > self.pop_size:
            raise ValueError("neighbourhood size exceeds population size")
        if self.n_adjust > self.pop_size / 2:
            raise ValueError("nus must not exceed N/2")

    @property
    def T(self) -> int:
        if self.neighborhood_size is not None:
            return self.neighborhood_size
        return max(2, round(0.1 * self.pop_size))

    @property
    def n_adjust(self) -> int:
        return self.nus if self.nus is not None else round(0.1 * self.pop_size)

    @property
    def n_selected(self) -> int:
        return int(math.floor(self.pop_size * self.r_pop))

    def g_max(self) -> int:
        return int(math.ceil(max(self.eval_budget - self.pop_size, 0) / self.n_selected))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class UtilityState:
    utility: np.ndarray
    f_old: np.ndarray

    @classmethod
    def fresh(cls, values) -> "UtilityState":
        values = np.asarray(values, dtype=float)
        return cls(np.ones(len(values)), values.copy())

    def remap(self, kept: list[int], new_values) -> "UtilityState":
        """Carry utilities of surviving subproblems; new ones start at 1."""
        new_values = np.asarray(new_values, dtype=float)
        n_new = len(new_values) - len(kept)
        utility = np.concatenate([self.utility[kept], np.ones(n_new)])
        f_old = np.concatenate([self.f_old[kept], new_values[len(kept):]])
        return UtilityState(utility, f_old)


def update_utility(state: UtilityState, values) -> UtilityState:
    """Refresh utilities from the relative improvement of each aggregation value.

    Improvement above 0.001 resets the utility to 1; otherwise it decays by
    ``0.95 + 0.05 * delta / 0.001``, with delta clamped at 0 so worsening from
    a moving reference point cannot push the utility to or below zero.
    """
    values = np.asarray(values, dtype=float)
    f_old = state.f_old
    delta = np.zeros_like(values)
    ok = f_old > 0
    delta[ok] = (f_old[ok] - values[ok]) / f_old[ok]
    decay = (0.95 + 0.05 * np.clip(delta, 0.0, None) / 0.001) * state.utility
    utility = np.where(delta > 0.001, 1.0, decay)
    return UtilityState(np.minimum(utility, 1.0), values.copy())


def allocate_resources(state: UtilityState, values, weights, n_select: int,
                       rng: np.random.Generator) -> tuple[list[int], UtilityState]:
    """Pick the boundary subproblems plus 2-tournament winners on utility."""
    m = np.asarray(weights).shape[1]
    if n_select < m:
        raise ValueError(f"floor(N * r_pop) = {n_select} is smaller than m = {m}")
    state = update_utility(state, values)
    chosen = []
    for b in boundary_indices(weights):
        if b not in chosen:
            chosen.append(b)
    while len(chosen) < n_select:
        pool = [i for i in range(len(state.utility)) if i not in chosen]
        if len(pool) == 1:
            chosen.append(pool[0])
            continue
        a, b = rng.choice(pool, size=2, replace=False)
        chosen.append(int(a) if state.utility[a] >= state.utility[b] else int(b))
    return chosen, state


def front_of(individuals) -> list[Individual]:
    """Feasible, mutually nondominated members, one per distinct objective vector."""
    feas = [p for p in individuals if p.feasible]
    out: list[Individual] = []
    seen = set()
    for p in feas:
        key = tuple(p.f)
        if key in seen:
            continue
        if any(np.all(q.f <= p.f) and np.any(q.f < p.f) for q in feas):
            continue
        seen.add(key)
        out.append(p)
    return out


@dataclass
class RunResult:
    config: RunConfig
    population: list[Individual]
    weights: np.ndarray
    front: list[Individual]
    archive: list[Individual]
    evaluations: int
    generations: int
    adjustments: list[int] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)

    def front_objectives(self) -> np.ndarray:
        if not self.front:
            return np.empty((0, 2))
        return np.array([p.f for p in self.front])


def run(problem, cfg: RunConfig, record_trace: bool = False) -> RunResult:
    """Run one optimisation of ``problem`` under ``cfg``.

    ``problem`` needs ``evaluate(x) -> (f, ViolationReport)`` and ``lower`` /
    ``upper`` bound arrays.
    """
    n = cfg.pop_size
    if cfg.eval_budget < n:
        raise ValueError("evaluation budget is smaller than the population")
    rng = np.random.default_rng(cfg.seed)
    lower = np.asarray(problem.lower, dtype=float)
    upper = np.asarray(problem.upper, dtype=float)
    n_var = len(lower)
    p_mut = cfg.p_mut if cfg.p_mut is not None else 1.0 / n_var
    adaptive = cfg.algorithm != "cmoead"
    mode = "areal" if cfg.algorithm == "aawa" else "awa"

    def make(x) -> Individual:
        f, v = problem.evaluate(x)
        return Individual(x, f, v)

    pop = [make(rng.uniform(lower, upper)) for _ in range(n)]
    evals = n
    weights = init_weights(n, 2)
    hood = build_neighborhoods(weights, cfg.T)
    z = np.min([p.f for p in pop], axis=0) - REFERENCE_OFFSET
    archive = adj.EliteArchive(adj.archive_capacity(n))

    def aggregation_values():
        return np.array([tchebycheff(p.f, w, z) for p, w in zip(pop, weights)])

    utility = UtilityState.fresh(aggregation_values())
    g_max = cfg.g_max()
    gate = cfg.r_evol * g_max
    selected: list[int] = []
    adjustments: list[int] = []
    trace: list[dict] = []
    g = 1
    while evals < cfg.eval_budget:
        if g == 1 or g % cfg.g_r == 0:
            selected, utility = allocate_resources(utility, aggregation_values(), weights, cfg.n_selected, rng)
        offspring = []
        for i in selected:
            if evals >= cfg.eval_budget:
                break
            scope = hood[i] if rng.random() < cfg.delta else np.arange(n)
            if len(set(scope.tolist())) >= 2:
                r1, r2 = rng.choice(scope, size=2, replace=False)
            else:
                r1 = scope[0]
                r2 = rng.choice([j for j in range(n) if j != r1])
            child = sbx_crossover(pop[r1].x, pop[r2].x, cfg.eta_c, rng)
            child = repair(child, lower, upper, rng)
            child = polynomial_mutation(child, cfg.eta_m, p_mut, rng, lower, upper)
            y = make(child)
            evals += 1
            z = update_reference(z, y.f)
            update_population(y, scope, cfg.n_r, weights, z, pop, rng)
            offspring.append(y)

        if adaptive and g >= gate:
            archive = adj.update_archive(archive, offspring)
            # an adjustment after the last evaluation could no longer steer the search
            if g % cfg.g_w == 0 and evals < cfg.eval_budget:
                res = adj.adjust(pop, weights, archive, cfg.n_adjust, z, mode)
                pop, weights, archive = res.pop, res.weights, res.archive
                hood = build_neighborhoods(weights, cfg.T)
                utility = utility.remap(res.kept, aggregation_values())
                adjustments.append(g)
        if record_trace:
            feas = sum(p.feasible for p in pop)
            trace.append({"generation": g, "evaluations": evals, "feasible": feas,
                          "archive": len(archive), "z": z.tolist()})
        g += 1

    return RunResult(cfg, pop, weights, front_of(pop), list(archive.members), evals, g - 1,
                     adjustments, trace)
