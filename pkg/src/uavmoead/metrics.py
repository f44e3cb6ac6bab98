"""Front quality indicators: 2-D hypervolume, pure diversity, pooled normalisation and ranking."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

PD_EXACT_LIMIT = 20
PD_P = 0.1


@dataclass(frozen=True)
class NormalizedFront:
    points: np.ndarray
    ideal: np.ndarray
    nadir: np.ndarray


@dataclass
class MetricRow:
    case: str
    algorithm: str
    run: int
    hv: float
    pd: float
    score: int = 0


# ---------------------------------------------------------------------------
# Hypervolume
# ---------------------------------------------------------------------------


def hypervolume_2d(front, reference=(1.0, 1.0)) -> float:
    """Exact area dominated by ``front`` and bounded by ``reference`` (minimisation).

    Points not strictly better than the reference in both objectives add nothing.
    """
    pts = np.asarray(front, dtype=float).reshape(-1, 2)
    rx, ry = float(reference[0]), float(reference[1])
    pts = pts[(pts[:, 0] < rx) & (pts[:, 1] < ry)]
    if len(pts) == 0:
        return 0.0
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    area = 0.0
    best_y = ry
    for x, y in pts:
        if y < best_y:
            area += (rx - x) * (best_y - y)
            best_y = y
    return float(area)


# ---------------------------------------------------------------------------
# Pure diversity
# ---------------------------------------------------------------------------


def dissimilarity_matrix(points, p: float = PD_P) -> np.ndarray:
    """Pairwise Minkowski-p dissimilarity, (sum |a_i - b_i|^p)^(1/p)."""
    x = np.asarray(points, dtype=float)
    diff = np.abs(x[:, None, :] - x[None, :, :])
    return np.power(np.sum(np.power(diff, p), axis=2), 1.0 / p)


def _pd_exact(d: np.ndarray) -> float:
    """Best total over all removal orders, by DP over subsets.

    ``value[S] = max_{j in S} value[S - j] + min_{i in S - j} d[j, i]``.
    """
    n = len(d)
    size = 1 << n
    masks = np.arange(size)
    # nn[j, S] = min distance from j to the members of S (inf for empty S)
    nn = np.full((n, size), np.inf)
    for b in range(n):
        lo = 1 << b
        nn[:, lo:2 * lo] = np.minimum(nn[:, :lo], d[:, b:b + 1])
    popcount = np.zeros(size, dtype=np.int64)
    for b in range(n):
        popcount += (masks >> b) & 1
    value = np.zeros(size)
    for k in range(2, n + 1):
        layer = masks[popcount == k]
        best = np.full(len(layer), -np.inf)
        for j in range(n):
            bit = 1 << j
            has = (layer & bit) != 0
            sub = layer[has] ^ bit
            cand = value[sub] + nn[j, sub]
            best[has] = np.maximum(best[has], cand)
        value[layer] = best
    return float(value[size - 1])


def _pd_greedy(d: np.ndarray) -> float:
    """Farthest-point insertion from every start, best total kept."""
    n = len(d)
    best = 0.0
    for start in range(n):
        nearest = d[start].copy()
        nearest[start] = -np.inf
        inserted = np.zeros(n, dtype=bool)
        inserted[start] = True
        total = 0.0
        for _ in range(n - 1):
            j = int(np.argmax(np.where(inserted, -np.inf, nearest)))
            total += nearest[j]
            inserted[j] = True
            nearest = np.minimum(nearest, d[j])
        best = max(best, total)
    return best


def pure_diversity(front, p: float = PD_P, exact_limit: int = PD_EXACT_LIMIT) -> float:
    """Pure diversity of a point set under Minkowski-p dissimilarity.

    Exact for up to ``exact_limit`` distinct points; larger sets fall back to
    best-start farthest-point insertion, which never exceeds the exact value.
    """
    pts = np.asarray(front, dtype=float)
    if pts.size == 0:
        return 0.0
    pts = np.unique(pts.reshape(len(pts), -1), axis=0)
    if len(pts) < 2:
        return 0.0
    d = dissimilarity_matrix(pts, p)
    np.fill_diagonal(d, np.inf)
    if len(pts) <= exact_limit:
        return _pd_exact(d)
    return _pd_greedy(d)


# ---------------------------------------------------------------------------
# Normalisation
# ---------------------------------------------------------------------------


def pooled_bounds(fronts) -> tuple[np.ndarray, np.ndarray] | None:
    pts = [np.asarray(f, dtype=float).reshape(-1, 2) for f in fronts]
    pts = [f for f in pts if len(f)]
    if not pts:
        return None
    allp = np.vstack(pts)
    return allp.min(axis=0), allp.max(axis=0)


def normalize(fronts, bounds=None) -> list[NormalizedFront]:
    """Map each front to [0, 1]^m using bounds pooled over all of them.

    A dimension with zero spread maps to 0. Returns an empty list when every
    front is empty.
    """
    if bounds is None:
        bounds = pooled_bounds(fronts)
    if bounds is None:
        return []
    ideal, nadir = (np.asarray(b, dtype=float) for b in bounds)
    span = nadir - ideal
    out = []
    for f in fronts:
        f = np.asarray(f, dtype=float).reshape(-1, len(ideal))
        scaled = np.zeros_like(f)
        ok = span > 0
        scaled[:, ok] = (f[:, ok] - ideal[ok]) / span[ok]
        out.append(NormalizedFront(np.clip(scaled, 0.0, 1.0), ideal, nadir))
    return out


# ---------------------------------------------------------------------------
# Scoring and ranking
# ---------------------------------------------------------------------------


def competition_ranks(values, larger_is_better: bool = True) -> list[int]:
    """1-based ranks; ties share the better rank and the next rank is skipped."""
    vals = list(values)
    ranks = []
    for v in vals:
        if larger_is_better:
            ranks.append(1 + sum(1 for w in vals if w > v))
        else:
            ranks.append(1 + sum(1 for w in vals if w < v))
    return ranks


def case_metrics(case: str, fronts: dict[tuple[str, int], np.ndarray]) -> list[MetricRow]:
    """HV and PD for every (algorithm, run) front of one case, pooled normalisation."""
    keys = sorted(fronts)
    normed = normalize([fronts[k] for k in keys])
    rows = []
    for i, (alg, run) in enumerate(keys):
        if normed and len(normed[i].points):
            pts = normed[i].points
            rows.append(MetricRow(case, alg, run, hypervolume_2d(pts), pure_diversity(pts)))
        else:
            rows.append(MetricRow(case, alg, run, 0.0, 0.0))
    # per-run score: sum of the HV and PD ranks among algorithms sharing the run index
    by_run = defaultdict(list)
    for r in rows:
        by_run[r.run].append(r)
    for group in by_run.values():
        hv_r = competition_ranks([r.hv for r in group])
        pd_r = competition_ranks([r.pd for r in group])
        for r, a, b in zip(group, hv_r, pd_r):
            r.score = a + b
    return rows


@dataclass
class SummaryCell:
    mean: float
    std: float
    rank: int


def score_and_rank(rows: list[MetricRow]):
    """Per-case mean/std/rank tables and the overall rank sum per algorithm.

    Returns ``(table, overall, median_runs)``: ``table[case][alg]`` maps
    ``"hv"``/``"pd"`` to a SummaryCell; ``overall[alg]`` is the sum of all
    ranks; ``median_runs[(case, alg)]`` is the run whose score is the lower
    median.
    """
    grouped: dict[str, dict[str, list[MetricRow]]] = defaultdict(lambda: defaultdict(list))
    for r in rows:
        grouped[r.case][r.algorithm].append(r)
    table: dict[str, dict[str, dict[str, SummaryCell]]] = {}
    overall: dict[str, int] = defaultdict(int)
    median_runs: dict[tuple[str, str], int] = {}
    for case in sorted(grouped, key=_case_key):
        algs = sorted(grouped[case])
        table[case] = {a: {} for a in algs}
        for metric in ("hv", "pd"):
            means = [float(np.mean([getattr(r, metric) for r in grouped[case][a]])) for a in algs]
            stds = [float(np.std([getattr(r, metric) for r in grouped[case][a]])) for a in algs]
            ranks = competition_ranks(means)
            for a, m, s, rk in zip(algs, means, stds, ranks):
                table[case][a][metric] = SummaryCell(m, s, rk)
                overall[a] += rk
        for a in algs:
            ordered = sorted(grouped[case][a], key=lambda r: (r.score, r.run))
            median_runs[(case, a)] = ordered[(len(ordered) - 1) // 2].run
    return table, dict(overall), median_runs


def _case_key(case: str):
    digits = "".join(ch for ch in case if ch.isdigit())
    return (int(digits) if digits else 0, case)
