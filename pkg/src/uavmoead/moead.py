"""Decomposition machinery shared by every optimizer variant.

Weight vectors, Tchebycheff aggregation, the WS-transformation, neighbourhoods,
SBX / polynomial mutation, constraint-domination and the bounded-replacement
population update.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .problem import ViolationReport

WS_FLOOR = 1e-6
REFERENCE_OFFSET = 1e-7


@dataclass(frozen=True, eq=False)
class Individual:
    x: np.ndarray
    f: np.ndarray
    violation: ViolationReport

    @property
    def cv(self) -> float:
        return self.violation.total

    @property
    def feasible(self) -> bool:
        return self.violation.feasible


def tchebycheff(f, weight, z) -> float:
    return float(np.max(np.asarray(weight) * (np.asarray(f) - np.asarray(z))))


def ws_transform(mapping) -> np.ndarray:
    """Map a solution-mapping vector to its weight vector (normalised reciprocals).

    Components below ``WS_FLOOR`` are raised to it first, so a zero component
    yields a weight that is almost entirely on that axis.
    """
    v = np.asarray(mapping, dtype=float)
    if np.any(v < 0) or not np.any(v > 0):
        raise ValueError(f"mapping vector must be non-negative and not all zero: {v}")
    inv = 1.0 / np.maximum(v, WS_FLOOR)
    return inv / inv.sum()


def simplex_lattice(n: int, m: int) -> np.ndarray:
    """Uniform points on the unit simplex; for m = 2 exactly n points."""
    if m == 2:
        a = np.arange(n) / (n - 1)
        return np.column_stack([a, 1 - a])
    h = 1
    while comb(h + m - 1, m - 1) < n:
        h += 1
    if comb(h + m - 1, m - 1) != n:
        raise ValueError(f"N={n} is not a simplex-lattice size for m={m}")
    pts = [c for c in itertools.product(range(h + 1), repeat=m) if sum(c) == h]
    return np.array(sorted(pts, reverse=True), dtype=float) / h


def init_weights(n: int, m: int = 2) -> np.ndarray:
    if not n >= m >= 2:
        raise ValueError(f"need N >= m >= 2, got N={n}, m={m}")
    return np.array([ws_transform(v) for v in simplex_lattice(n, m)])


def build_neighborhoods(weights, t: int) -> np.ndarray:
    """Indices of the ``t`` nearest weights to each weight, self first, ties by index."""
    w = np.asarray(weights, dtype=float)
    n = len(w)
    if not 1 <= t <= n:
        raise ValueError(f"neighbourhood size must be in [1, {n}], got {t}")
    d = np.linalg.norm(w[:, None, :] - w[None, :, :], axis=2)
    np.fill_diagonal(d, -1.0)
    return np.argsort(d, axis=1, kind="stable")[:, :t]


def boundary_indices(weights) -> list[int]:
    """For each objective, the subproblem whose weight leans hardest on it."""
    w = np.asarray(weights)
    return [int(i) for i in np.argmax(w, axis=0)]


# ---------------------------------------------------------------------------
# Variation
# ---------------------------------------------------------------------------


def sbx_beta(u, eta: float):
    u = np.asarray(u, dtype=float)
    return np.where(u <= 0.5,
                    np.power(2.0 * u, 1.0 / (1.0 + eta)),
                    np.power(1.0 / np.maximum(2.0 - 2.0 * u, 1e-300), 1.0 / (1.0 + eta)))


def sbx_crossover(xa, xb, eta: float, rng: np.random.Generator, u=None) -> np.ndarray:
    """One SBX child per coordinate: 0.5 * ((1 + beta) * xa + (1 - beta) * xb)."""
    xa = np.asarray(xa, dtype=float)
    xb = np.asarray(xb, dtype=float)
    if xa.shape != xb.shape:
        raise ValueError("parents differ in length")
    if u is None:
        u = rng.random(xa.shape)
    beta = sbx_beta(u, eta)
    return 0.5 * ((1.0 + beta) * xa + (1.0 - beta) * xb)


def pm_delta(u, eta: float):
    u = np.asarray(u, dtype=float)
    return np.where(u <= 0.5,
                    np.power(2.0 * u, 1.0 / (eta + 1.0)) - 1.0,
                    1.0 - np.power(2.0 * (1.0 - u), 1.0 / (eta + 1.0)))


def repair(y, lower, upper, rng: np.random.Generator) -> np.ndarray:
    """Resample any out-of-bounds coordinate uniformly inside its bounds."""
    y = np.array(y, dtype=float)
    bad = (y < lower) | (y > upper)
    if bad.any():
        y[bad] = rng.uniform(lower[bad], upper[bad])
    return y


def polynomial_mutation(y, eta: float, p_mut: float, rng: np.random.Generator, lower, upper) -> np.ndarray:
    """Perturb each coordinate with probability ``p_mut`` by delta * (upper - lower), then repair."""
    if not 0.0 <= p_mut <= 1.0:
        raise ValueError("p_mut must lie in [0, 1]")
    y = np.array(y, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    hit = rng.random(y.shape) < p_mut
    if hit.any():
        u = rng.random(int(hit.sum()))
        y[hit] += pm_delta(u, eta) * (upper[hit] - lower[hit])
    return repair(y, lower, upper, rng)


# ---------------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------------


def dominates(fa, fb) -> bool:
    fa = np.asarray(fa)
    fb = np.asarray(fb)
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def cdp_compare(a: Individual, b: Individual) -> int:
    """-1 if ``a`` constraint-dominates ``b``, 1 for the reverse, 0 otherwise."""
    fa, fb = a.feasible, b.feasible
    if fa and not fb:
        return -1
    if fb and not fa:
        return 1
    if not fa:
        if a.cv < b.cv:
            return -1
        if b.cv < a.cv:
            return 1
        return 0
    if dominates(a.f, b.f):
        return -1
    if dominates(b.f, a.f):
        return 1
    return 0


def update_reference(z, f) -> np.ndarray:
    z = np.array(z, dtype=float)
    f = np.asarray(f, dtype=float)
    better = z > f
    z[better] = f[better] - REFERENCE_OFFSET
    return z


def update_population(y: Individual, scope, n_r: int, weights, z, pop: list[Individual],
                      rng: np.random.Generator) -> int:
    """Offer ``y`` to the subproblems in ``scope`` in random order.

    A subproblem takes ``y`` when ``y`` has less violation, or when both are
    feasible and ``y`` has the lower Tchebycheff value at that subproblem's
    weight. Stops after ``n_r`` replacements. Returns the replacement count.
    """
    order = rng.permutation(np.asarray(scope))
    replaced = 0
    vy = y.cv
    for j in order:
        if replaced >= n_r:
            break
        xj = pop[j]
        vx = xj.cv
        if vy < vx or (vy == 0 and vx == 0
                       and tchebycheff(y.f, weights[j], z) < tchebycheff(xj.f, weights[j], z)):
            pop[j] = y
            replaced += 1
    return replaced
