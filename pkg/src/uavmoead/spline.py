"""Clamped uniform B-spline paths from interior control points."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class GenomeError(ValueError):
    """Genome shape or bounds mismatch."""


@dataclass(frozen=True)
class SplineConfig:
    degree: int = 3
    samples: int = 150

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        if self.samples < self.degree + 1:
            raise ValueError(f"samples must be >= degree + 1, got {self.samples}")


@dataclass(frozen=True, eq=False)
class PathSample:
    """The s+1 points of a sampled path and the per-segment deltas."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def deltas(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    def __len__(self):
        return len(self.points)


def basis(i: int, k: int, t: float, knots) -> float:
    """Cox-de Boor blending function of *order* ``k`` (``k = 1`` is the step function).

    A zero-width knot span makes the corresponding term vanish. At the final
    knot the last non-empty span is treated as closed, so the basis is the
    left limit there.
    """
    u = knots
    if k == 1:
        if u[i] <= t < u[i + 1]:
            return 1.0
        if t == u[-1] and u[i] < u[i + 1] == u[-1]:
            return 1.0
        return 0.0
    left = 0.0
    den = u[i + k - 1] - u[i]
    if den > 0:
        left = (t - u[i]) / den * basis(i, k - 1, t, u)
    right = 0.0
    den = u[i + k] - u[i + 1]
    if den > 0:
        right = (u[i + k] - t) / den * basis(i + 1, k - 1, t, u)
    return left + right


def clamped_knots(n_ctrl: int, degree: int) -> np.ndarray:
    """Knots on [0, 1] with end multiplicity degree+1 and uniform interior."""
    if n_ctrl < degree + 1:
        raise ValueError(f"need at least degree+1={degree + 1} control points, got {n_ctrl}")
    n_inner = n_ctrl - degree - 1
    inner = np.arange(1, n_inner + 1) / (n_inner + 1)
    return np.concatenate([np.zeros(degree + 1), inner, np.ones(degree + 1)])


@lru_cache(maxsize=64)
def basis_matrix(n_ctrl: int, degree: int, samples: int) -> np.ndarray:
    """(samples+1, n_ctrl) matrix mapping control points to sampled path points."""
    knots = clamped_knots(n_ctrl, degree)
    ts = np.linspace(0.0, 1.0, samples + 1)
    m = np.array([[basis(i, degree + 1, t, knots) for i in range(n_ctrl)] for t in ts])
    m.setflags(write=False)
    return m


def control_points(genome, start, target) -> np.ndarray:
    """Stack [start, interior..., target] from a flat or (DOP, 3) genome."""
    inner = np.asarray(genome, dtype=float).reshape(-1, 3)
    return np.vstack([np.asarray(start, dtype=float), inner, np.asarray(target, dtype=float)])


def sample_path(genome, start, target, cfg: SplineConfig = SplineConfig(), dop: int | None = None) -> PathSample:
    """Sample the clamped B-spline through ``start`` and ``target``.

    Args:
        genome: interior control points, flat ``(3*DOP,)`` or ``(DOP, 3)``.
        start, target: fixed end points.
        cfg: spline degree and sample count.
        dop: expected number of interior points; checked when given.
    """
    g = np.asarray(genome, dtype=float)
    if g.size % 3 or g.size == 0:
        raise GenomeError(f"genome size {g.size} is not a positive multiple of 3")
    if dop is not None and g.size != 3 * dop:
        raise GenomeError(f"expected {dop} interior points, got {g.size // 3}")
    ctrl = control_points(g, start, target)
    if len(ctrl) < cfg.degree + 1:
        raise GenomeError(f"degree {cfg.degree} needs at least {cfg.degree - 1} interior points")
    m = basis_matrix(len(ctrl), cfg.degree, cfg.samples)
    return PathSample(m @ ctrl)


def write_path_csv(path, sample: PathSample) -> None:
    np.savetxt(path, sample.points, delimiter=",", header="x,y,z", comments="", fmt="%.17g")
