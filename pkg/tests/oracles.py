"""Slow, independent reference implementations used only as test oracles.

Nothing here imports the production evaluator, metrics or adjustment code;
each routine recomputes its quantity from first principles with plain loops.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


# ---------------------------------------------------------------------------
# Path evaluation
# ---------------------------------------------------------------------------


def cox_de_boor(i: int, p: int, t: float, u) -> float:
    """Degree-``p`` basis with the last span closed at the end knot."""
    if p == 0:
        if u[i] <= t < u[i + 1]:
            return 1.0
        # right end: the last non-degenerate span owns t == u[-1]
        last = max(j for j in range(len(u) - 1) if u[j] < u[j + 1])
        return 1.0 if (t == u[-1] and i == last) else 0.0
    a = 0.0 if u[i + p] == u[i] else (t - u[i]) / (u[i + p] - u[i]) * cox_de_boor(i, p - 1, t, u)
    b = 0.0 if u[i + p + 1] == u[i + 1] else (u[i + p + 1] - t) / (u[i + p + 1] - u[i + 1]) * cox_de_boor(i + 1, p - 1, t, u)
    return a + b


def naive_path(genome, start, target, degree: int = 3, samples: int = 150) -> list[tuple[float, float, float]]:
    ctrl = [tuple(start)] + [tuple(genome[3 * j:3 * j + 3]) for j in range(len(genome) // 3)] + [tuple(target)]
    n = len(ctrl)
    interior = n - degree - 1
    knots = [0.0] * (degree + 1) + [j / (interior + 1) for j in range(1, interior + 1)] + [1.0] * (degree + 1)
    pts = []
    for step in range(samples + 1):
        t = step / samples
        w = [cox_de_boor(i, degree, t, knots) for i in range(n)]
        pts.append(tuple(sum(w[i] * ctrl[i][d] for i in range(n)) for d in range(3)))
    return pts


def naive_bilinear(elev, origin, cell, x, y) -> float:
    rows, cols = elev.shape
    u = min(max((x - origin[0]) / cell, 0.0), cols - 1)
    v = min(max((y - origin[1]) / cell, 0.0), rows - 1)
    c = min(int(math.floor(u)), cols - 2)
    r = min(int(math.floor(v)), rows - 2)
    fu, fv = u - c, v - r
    south = elev[r, c] * (1 - fu) + elev[r, c + 1] * fu
    north = elev[r + 1, c] * (1 - fu) + elev[r + 1, c + 1] * fu
    return south * (1 - fv) + north * fv


def naive_evaluate(genome, start, target, elev, origin, cell, r_safe,
                   alpha_max=math.pi / 4, beta_max=math.pi / 4, degree=3, samples=150):
    """(f1, f2, (g1, g2, g3)) by direct summation over every terrain node."""
    pts = naive_path(list(genome), start, target, degree, samples)
    f1 = 0.0
    for a, b in zip(pts, pts[1:]):
        f1 += math.dist(a, b)

    rows, cols = elev.shape
    node_x = origin[0] + np.arange(cols) * cell
    node_y = origin[1] + np.arange(rows) * cell
    gx, gy = np.meshgrid(node_x, node_y)
    f2 = 0.0
    for px, py, pz in pts:
        horiz2 = (gy - py) ** 2 + (gx - px) ** 2
        near = horiz2 <= r_safe * r_safe
        d2 = horiz2[near] + (elev[near] - pz) ** 2
        if np.any(d2 == 0):
            f2 = math.inf
            break
        f2 += float(np.sum(r_safe * r_safe / d2))

    g1 = sum(1 for x, y, z in pts if z - naive_bilinear(elev, origin, cell, x, y) <= r_safe)
    g2 = 0
    for i in range(1, len(pts) - 1):
        ax, ay = pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1]
        bx, by = pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1]
        na, nb = math.hypot(ax, ay), math.hypot(bx, by)
        if na == 0 or nb == 0:
            continue
        cosang = max(-1.0, min(1.0, (ax * bx + ay * by) / (na * nb)))
        if math.acos(cosang) > alpha_max:
            g2 += 1
    g3 = 0
    for a, b in zip(pts, pts[1:]):
        horiz = math.hypot(b[0] - a[0], b[1] - a[1])
        if math.atan2(abs(b[2] - a[2]), horiz) > beta_max:
            g3 += 1
    return f1, f2, (g1, g2, g3)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


def l_p(a, b, p: float = 0.1) -> float:
    return sum(abs(x - y) ** p for x, y in zip(a, b)) ** (1.0 / p)


def pd_exhaustive(points, p: float = 0.1) -> float:
    """Recursion over every removal order: PD(X) = max_s PD(X - s) + d(s, X - s)."""
    pts = [tuple(q) for q in points]
    unique = sorted(set(pts))

    def rec(xs: tuple) -> float:
        if len(xs) < 2:
            return 0.0
        best = -math.inf
        for i, s in enumerate(xs):
            rest = xs[:i] + xs[i + 1:]
            best = max(best, rec(rest) + min(l_p(s, r, p) for r in rest))
        return best

    return rec(tuple(unique))


def pd_all_orders(points, p: float = 0.1) -> float:
    """Same quantity, enumerating full removal permutations explicitly."""
    unique = sorted(set(tuple(q) for q in points))
    if len(unique) < 2:
        return 0.0
    best = -math.inf
    for order in itertools.permutations(range(len(unique))):
        total = 0.0
        remaining = set(range(len(unique)))
        for j in order[:-1]:
            remaining.discard(j)
            total += min(l_p(unique[j], unique[r], p) for r in remaining)
        best = max(best, total)
    return best


def hv_inclusion_exclusion(points, ref=(1.0, 1.0)) -> float:
    """Union of dominated boxes via inclusion-exclusion (fine for <= 12 points)."""
    boxes = [(x, y) for x, y in points if x < ref[0] and y < ref[1]]
    total = 0.0
    for r in range(1, len(boxes) + 1):
        for combo in itertools.combinations(boxes, r):
            x = max(b[0] for b in combo)
            y = max(b[1] for b in combo)
            total += (-1) ** (r + 1) * (ref[0] - x) * (ref[1] - y)
    return total


def hv_monte_carlo(points, samples: int, rng: np.random.Generator, ref=(1.0, 1.0)) -> float:
    pts = np.asarray(points, dtype=float)
    u = rng.random((samples, 2)) * np.asarray(ref)
    dominated = np.zeros(samples, dtype=bool)
    for p in pts:
        dominated |= (u[:, 0] >= p[0]) & (u[:, 1] >= p[1])
    return float(dominated.mean() * ref[0] * ref[1])


# ---------------------------------------------------------------------------
# Sparsity / deletion
# ---------------------------------------------------------------------------


def sl_bruteforce(points, idx: int, k: int = 2) -> float:
    d = sorted(math.dist(points[idx], q) for j, q in enumerate(points) if j != idx)
    return math.prod(d[:k])


def deletion_order(points, count: int, k: int = 2) -> list[int]:
    """Original indices removed, one at a time, each the current smallest-SL member."""
    alive = list(range(len(points)))
    removed = []
    for _ in range(count):
        cur = [points[i] for i in alive]
        scores = [sl_bruteforce(cur, j, k) for j in range(len(cur))]
        j = min(range(len(cur)), key=lambda q: (scores[q], q))
        removed.append(alive.pop(j))
    return removed
