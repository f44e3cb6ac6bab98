"""Adaptive areal weight adjustment.

Crowded subproblems (smallest vicinity-distance sparsity) are removed from the
population; the sparsest archive members relative to the remaining population
are added back, each with a weight built from the centroid of its nearest
population neighbours (``mode="areal"``) or from its own objective vector
(``mode="awa"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .moead import Individual, dominates, tchebycheff, ws_transform


def archive_capacity(pop_size: int) -> int:
    return int(1.5 * pop_size)


@dataclass
class EliteArchive:
    capacity: int
    members: list[Individual] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def objectives(self) -> np.ndarray:
        if not self.members:
            return np.empty((0, 2))
        return np.array([m.f for m in self.members])


# ---------------------------------------------------------------------------
# Sparsity
# ---------------------------------------------------------------------------


def sparsity_in(pop_objectives, point, k: int = 2) -> float:
    """Product of the distances from ``point`` to its ``k`` nearest population members."""
    pts = np.asarray(pop_objectives, dtype=float)
    if len(pts) < k:
        raise ValueError(f"population has {len(pts)} members, need at least k={k}")
    d = np.linalg.norm(pts - np.asarray(point, dtype=float), axis=1)
    return float(np.prod(np.partition(d, k - 1)[:k]))


def sparsity_levels(objectives, k: int = 2) -> np.ndarray:
    """Sparsity of each member against the others (self excluded)."""
    pts = np.asarray(objectives, dtype=float)
    n = len(pts)
    if n - 1 < k:
        raise ValueError(f"population has {n} members, need at least k+1={k + 1}")
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    np.fill_diagonal(d, np.inf)
    return np.prod(np.partition(d, k - 1, axis=1)[:, :k], axis=1)


def nearest(pop_objectives, point, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest rows, ties broken by lower index."""
    d = np.linalg.norm(np.asarray(pop_objectives, dtype=float) - np.asarray(point, dtype=float), axis=1)
    return np.argsort(d, kind="stable")[:k]


# ---------------------------------------------------------------------------
# Weight construction
# ---------------------------------------------------------------------------


def awa_weight(f_added, z) -> np.ndarray:
    return ws_transform(np.asarray(f_added, dtype=float) - np.asarray(z, dtype=float))


def areal_weight(f_added, pop_objectives, z, k: int | None = None) -> np.ndarray:
    """Weight from the centroid of the added point's ``k`` nearest population members.

    ``k`` defaults to the number of objectives. The added point only chooses
    the neighbours; its own objective value does not enter the centroid.
    """
    pts = np.asarray(pop_objectives, dtype=float)
    k = pts.shape[1] if k is None else k
    if len(pts) < k:
        raise ValueError(f"population has {len(pts)} members, need at least k={k}")
    centroid = pts[nearest(pts, f_added, k)].mean(axis=0)
    return ws_transform(np.maximum(centroid - np.asarray(z, dtype=float), 0.0))


# ---------------------------------------------------------------------------
# Archive
# ---------------------------------------------------------------------------


def truncate_archive(members: list[Individual], capacity: int, k: int = 2) -> list[Individual]:
    members = list(members)
    while len(members) > capacity:
        sl = sparsity_levels([m.f for m in members], k)
        members.pop(int(np.argmin(sl)))
    return members


def update_archive(archive: EliteArchive, offspring, k: int = 2) -> EliteArchive:
    """Insert feasible offspring, keep the archive mutually nondominated, then
    truncate to capacity by repeatedly dropping the smallest-sparsity member."""
    members = list(archive.members)
    for y in offspring:
        if not y.feasible:
            continue
        if any(dominates(m.f, y.f) for m in members):
            continue
        members = [m for m in members if not dominates(y.f, m.f)]
        members.append(y)
    return EliteArchive(archive.capacity, truncate_archive(members, archive.capacity, k))


def prune_archive(archive: EliteArchive, pop: list[Individual]) -> EliteArchive:
    """Drop archive members dominated by a feasible population member."""
    feas = [p.f for p in pop if p.feasible]
    kept = [m for m in archive.members if not any(dominates(f, m.f) for f in feas)]
    return EliteArchive(archive.capacity, kept)


# ---------------------------------------------------------------------------
# Adjustment steps
# ---------------------------------------------------------------------------


def delete_crowded(pop: list[Individual], weights, nus: int, k: int = 2):
    """Remove ``nus`` individuals (and their weights), one at a time, each the
    current minimum-sparsity member.

    Returns ``(pop, weights, kept)`` where ``kept`` lists the surviving
    original indices in order.
    """
    if nus >= len(pop) and nus > 0:
        raise ValueError("cannot delete the whole population")
    pop = list(pop)
    weights = np.asarray(weights, dtype=float)
    kept = list(range(len(pop)))
    for _ in range(nus):
        sl = sparsity_levels([p.f for p in pop], k)
        i = int(np.argmin(sl))
        pop.pop(i)
        kept.pop(i)
        weights = np.delete(weights, i, axis=0)
    return pop, weights, kept


def add_sparse(pop: list[Individual], weights, archive: EliteArchive, nus: int, z,
               mode: str = "areal", k: int = 2):
    """Append up to ``nus`` archive members, each time the one with the largest
    sparsity among the current population, along with its new weight."""
    if mode not in ("areal", "awa"):
        raise ValueError(f"unknown mode {mode!r}")
    pop = list(pop)
    weights = np.asarray(weights, dtype=float)
    pool = list(archive.members)
    for _ in range(nus):
        if not pool:
            break
        pop_f = np.array([p.f for p in pop])
        scores = [sparsity_in(pop_f, e.f, k) for e in pool]
        e = pool.pop(int(np.argmax(scores)))
        if mode == "areal":
            w = areal_weight(e.f, pop_f, z, k)
        else:
            w = awa_weight(e.f, z)
        pop.append(e)
        weights = np.vstack([weights, w])
    return pop, weights


def refresh_incumbents(pop: list[Individual], weights, archive: EliteArchive, z) -> list[Individual]:
    """Give each subproblem the best candidate from population plus archive at its weight.

    Feasible incumbents are only replaced by feasible candidates with a lower
    Tchebycheff value; infeasible incumbents take the best feasible candidate.
    """
    candidates = [c for c in list(pop) + list(archive.members) if c.feasible]
    if not candidates:
        return list(pop)
    cf = np.array([c.f for c in candidates])
    w = np.asarray(weights)
    values = np.max(w[:, None, :] * (cf[None, :, :] - np.asarray(z)), axis=2)
    best = np.argmin(values, axis=1)
    out = list(pop)
    for i, x in enumerate(pop):
        j = int(best[i])
        if not x.feasible or values[i, j] < tchebycheff(x.f, w[i], z):
            out[i] = candidates[j]
    return out


@dataclass
class AdjustResult:
    pop: list[Individual]
    weights: np.ndarray
    archive: EliteArchive
    kept: list[int]
    added: int


def adjust(pop: list[Individual], weights, archive: EliteArchive, nus: int, z,
           mode: str = "areal", k: int = 2) -> AdjustResult:
    """One pass of adaptive weight adjustment.

    Deletions and additions are paired: when the pruned archive cannot fund
    ``nus`` additions, only as many pairs as it can fund are performed, so the
    population size never changes. Neighbourhoods are left to the caller.
    """
    pop = refresh_incumbents(pop, weights, archive, z)
    weights = np.asarray(weights, dtype=float)
    nus = min(nus, len(pop) - k - 1)
    # Deleting p members keeps a superset of the survivors of p+1 deletions, so
    # the archive surviving the prune only grows with p: take the largest
    # p <= nus the archive can fund.
    for pairs in range(max(nus, 0), 0, -1):
        new_pop, new_weights, kept = delete_crowded(pop, weights, pairs, k)
        pruned = prune_archive(archive, new_pop)
        if len(pruned) >= pairs:
            new_pop, new_weights = add_sparse(new_pop, new_weights, pruned, pairs, z, mode, k)
            return AdjustResult(new_pop, new_weights, pruned, kept, pairs)
    return AdjustResult(pop, weights, prune_archive(archive, pop), list(range(len(pop))), 0)
