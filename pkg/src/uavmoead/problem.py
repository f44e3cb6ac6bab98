"""Bi-objective UAV path problem: path length, terrain threat and constraint violation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spline import PathSample, SplineConfig, basis_matrix, sample_path
from .terrain import TerrainGrid, elevations_at


@dataclass(frozen=True)
class ViolationReport:
    altitude: int
    turning: int
    climbing: int
    altitude_norm: float
    turning_norm: float
    climbing_norm: float

    @property
    def total(self) -> float:
        return self.altitude_norm + self.turning_norm + self.climbing_norm

    @property
    def feasible(self) -> bool:
        return self.altitude == 0 and self.turning == 0 and self.climbing == 0

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.altitude, self.turning, self.climbing


@dataclass(frozen=True, eq=False)
class ProblemConfig:
    start: np.ndarray
    target: np.ndarray
    r_safe: float
    dop: int
    lower: np.ndarray
    upper: np.ndarray
    alpha_max: float = math.pi / 4
    beta_max: float = math.pi / 4
    spline: SplineConfig = field(default_factory=SplineConfig)

    def __post_init__(self):
        for name in ("start", "target", "lower", "upper"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not self.r_safe > 0:
            raise ValueError("r_safe must be positive")
        if not (0 < self.alpha_max <= math.pi and 0 < self.beta_max <= math.pi):
            raise ValueError("angle limits must lie in (0, pi]")
        if self.start.shape != (3,) or self.target.shape != (3,):
            raise ValueError("start and target must be 3-D points")
        if np.array_equal(self.start, self.target):
            raise ValueError("start and target coincide")
        n = 3 * self.dop
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError(f"bounds must have length 3*dop={n}")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def n_var(self) -> int:
        return 3 * self.dop


def genome_bounds(grid: TerrainGrid, dop: int, r_safe: float) -> tuple[np.ndarray, np.ndarray]:
    """x, y limited to the map; z from the lowest terrain to 4*r_safe above the highest."""
    xmin, xmax, ymin, ymax = grid.bounds
    zmin = float(grid.elevations.min())
    zmax = float(grid.elevations.max()) + 4 * r_safe
    lo = np.tile([xmin, ymin, zmin], dop)
    hi = np.tile([xmax, ymax, zmax], dop)
    return lo, hi


def corner_endpoints(grid: TerrainGrid, r_safe: float, inset: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Start/target at opposite map corners, inset from the edges, 2*r_safe above ground."""
    xmin, xmax, ymin, ymax = grid.bounds
    w, h = xmax - xmin, ymax - ymin
    sx, sy = xmin + inset * w, ymin + inset * h
    tx, ty = xmax - inset * w, ymax - inset * h
    start = np.array([sx, sy, float(elevations_at(grid, sx, sy)) + 2 * r_safe])
    target = np.array([tx, ty, float(elevations_at(grid, tx, ty)) + 2 * r_safe])
    return start, target


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------


def path_length(sample: PathSample | np.ndarray) -> float:
    pts = sample.points if isinstance(sample, PathSample) else np.asarray(sample, dtype=float)
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def threat_degree(sample: PathSample | np.ndarray, grid: TerrainGrid, r_safe: float) -> float:
    """Sum over path points of (r_safe / r)^2 for every terrain node within
    ``r_safe`` horizontally, with r the 3-D point-to-node distance.

    Returns ``inf`` when a path point sits exactly on a node.
    """
    pts = sample.points if isinstance(sample, PathSample) else np.asarray(sample, dtype=float)
    if not r_safe > 0:
        raise ValueError("r_safe must be positive")
    cs = grid.cell_size
    x0, y0 = grid.origin
    rows, cols = grid.shape
    reach = int(math.ceil(r_safe / cs))
    offsets = np.arange(-reach, reach + 2)

    # candidate window of nodes around each point, masked to the disc
    c = np.floor((pts[:, 0] - x0) / cs).astype(np.intp)[:, None] + offsets
    r = np.floor((pts[:, 1] - y0) / cs).astype(np.intp)[:, None] + offsets
    c_ok = (c >= 0) & (c < cols)
    r_ok = (r >= 0) & (r < rows)
    dx = (x0 + c * cs) - pts[:, 0:1]
    dy = (y0 + r * cs) - pts[:, 1:2]
    d2h = dy[:, :, None] ** 2 + dx[:, None, :] ** 2
    mask = (r_ok[:, :, None] & c_ok[:, None, :]) & (d2h <= r_safe * r_safe)
    if not mask.any():
        return 0.0
    pi, ri, ci = np.nonzero(mask)
    gz = grid.elevations[r[pi, ri], c[pi, ci]]
    d2 = d2h[pi, ri, ci] + (gz - pts[pi, 2]) ** 2
    if np.any(d2 == 0):
        return math.inf
    return float(np.sum(r_safe * r_safe / d2))


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------


def turning_angles(pts: np.ndarray) -> np.ndarray:
    """Horizontal heading change at each interior point; 0 at a zero-length segment."""
    d = np.diff(pts[:, :2], axis=0)
    a, b = d[:-1], d[1:]
    na = np.hypot(a[:, 0], a[:, 1])
    nb = np.hypot(b[:, 0], b[:, 1])
    den = na * nb
    dot = a[:, 0] * b[:, 0] + a[:, 1] * b[:, 1]
    cos = np.divide(dot, den, out=np.ones_like(dot), where=den > 0)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def climbing_slopes(pts: np.ndarray) -> np.ndarray:
    """Absolute climb angle of each segment; pi/2 for a purely vertical segment."""
    d = np.diff(pts, axis=0)
    horiz = np.hypot(d[:, 0], d[:, 1])
    return np.arctan2(np.abs(d[:, 2]), horiz)


def check_constraints(sample: PathSample | np.ndarray, grid: TerrainGrid, cfg: ProblemConfig) -> ViolationReport:
    pts = sample.points if isinstance(sample, PathSample) else np.asarray(sample, dtype=float)
    s = len(pts) - 1
    clearance = pts[:, 2] - elevations_at(grid, pts[:, 0], pts[:, 1])
    g1 = int(np.count_nonzero(clearance <= cfg.r_safe))
    g2 = int(np.count_nonzero(turning_angles(pts) > cfg.alpha_max))
    g3 = int(np.count_nonzero(climbing_slopes(pts) > cfg.beta_max))
    return ViolationReport(g1, g2, g3, g1 / (s + 1), g2 / (s - 1) if s > 1 else 0.0, g3 / s)


# ---------------------------------------------------------------------------
# Full evaluation
# ---------------------------------------------------------------------------


class UAVPathProblem:
    """Evaluate genomes against a fixed terrain and problem configuration."""

    n_obj = 2

    def __init__(self, grid: TerrainGrid, cfg: ProblemConfig):
        self.grid = grid
        self.cfg = cfg
        self._basis = basis_matrix(cfg.dop + 2, cfg.spline.degree, cfg.spline.samples)
        self.evaluations = 0

    @property
    def lower(self) -> np.ndarray:
        return self.cfg.lower

    @property
    def upper(self) -> np.ndarray:
        return self.cfg.upper

    def path(self, genome) -> PathSample:
        return sample_path(genome, self.cfg.start, self.cfg.target, self.cfg.spline, dop=self.cfg.dop)

    def evaluate(self, genome) -> tuple[np.ndarray, ViolationReport]:
        g = np.asarray(genome, dtype=float)
        if g.shape != (self.cfg.n_var,):
            raise ValueError(f"genome must have shape ({self.cfg.n_var},), got {g.shape}")
        ctrl = np.vstack([self.cfg.start, g.reshape(-1, 3), self.cfg.target])
        pts = self._basis @ ctrl
        self.evaluations += 1
        f = np.array([path_length(pts), threat_degree(pts, self.grid, self.cfg.r_safe)])
        return f, check_constraints(pts, self.grid, self.cfg)

    def trace(self, genome) -> np.ndarray:
        """Per-point debugging table: index, z, terrain z, turn angle, climb angle, threat."""
        pts = self.path(genome).points
        terrain = elevations_at(self.grid, pts[:, 0], pts[:, 1])
        alpha = np.concatenate([[np.nan], turning_angles(pts), [np.nan]])
        beta = np.concatenate([[np.nan], climbing_slopes(pts)])
        threat = np.array([threat_degree(p[None, :], self.grid, self.cfg.r_safe) for p in pts])
        return np.column_stack([np.arange(len(pts)), pts[:, 2], terrain, alpha, beta, threat])


def evaluate(genome, grid: TerrainGrid, cfg: ProblemConfig) -> tuple[np.ndarray, ViolationReport]:
    return UAVPathProblem(grid, cfg).evaluate(genome)
