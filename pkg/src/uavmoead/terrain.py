"""Elevation grids: synthetic mountain/urban generators, ASCII DEM I/O and queries.

Grids are node-registered: ``elevations[r, c]`` is the height at
``(origin_x + c * cell_size, origin_y + r * cell_size)``, so row 0 is the
southern edge. The ASCII grid files store the northern row first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Base-surface coefficients used for every mountain case.
DEFAULT_SURFACE = (3 * math.pi, 0.1, 0.3, 0.9, 0.5, 0.5)


class TerrainError(ValueError):
    """Invalid terrain specification."""


class DomainError(ValueError):
    """Query point outside the grid extent."""


class DEMParseError(ValueError):
    """Malformed ASCII grid file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True, eq=False)
class TerrainGrid:
    elevations: np.ndarray
    cell_size: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        z = np.array(self.elevations, dtype=float)
        if z.ndim != 2 or z.shape[0] < 2 or z.shape[1] < 2:
            raise TerrainError(f"elevations must be a 2-D array of at least 2x2, got shape {z.shape}")
        if not np.all(np.isfinite(z)):
            raise TerrainError("elevations must be finite")
        if not self.cell_size > 0:
            raise TerrainError(f"cell_size must be positive, got {self.cell_size}")
        z.setflags(write=False)
        object.__setattr__(self, "elevations", z)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "cell_size", float(self.cell_size))

    @property
    def shape(self) -> tuple[int, int]:
        return self.elevations.shape

    @property
    def extent(self) -> tuple[float, float]:
        """(width, height) in world units."""
        rows, cols = self.elevations.shape
        return (cols - 1) * self.cell_size, (rows - 1) * self.cell_size

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax)."""
        w, h = self.extent
        x0, y0 = self.origin
        return x0, x0 + w, y0, y0 + h

    def node_coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Return the x coordinates of the columns and y coordinates of the rows."""
        rows, cols = self.elevations.shape
        xs = self.origin[0] + self.cell_size * np.arange(cols)
        ys = self.origin[1] + self.cell_size * np.arange(rows)
        return xs, ys


# ---------------------------------------------------------------------------
# Synthetic generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MountainObstacle:
    center: tuple[float, float]
    height: float
    slope_x: float
    slope_y: float


@dataclass(frozen=True)
class MountainSpec:
    coefficients: tuple[float, float, float, float, float, float] = DEFAULT_SURFACE
    obstacles: tuple[MountainObstacle, ...] = ()

    @property
    def count(self) -> int:
        return len(self.obstacles)


@dataclass(frozen=True)
class Prism:
    x_min: float
    y_min: float
    x_max: float
    y_max: float
    height: float


@dataclass(frozen=True)
class UrbanSpec:
    prisms: tuple[Prism, ...] = ()
    protected_width: float = 0.0


def base_surface(x, y, coefficients=DEFAULT_SURFACE):
    """Undulating base terrain built from sines and cosines of x, y and radius."""
    a, b, c, d, e, f = coefficients
    r = np.sqrt(np.square(x) + np.square(y))
    return np.sin(y + a) + b * np.sin(x) + c * np.cos(y) + d * np.cos(e * r) + f * np.sin(f * r)


def obstacle_surface(x, y, obstacles) -> np.ndarray:
    """Sum of Gaussian-shaped mountain bumps."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.zeros(np.broadcast(x, y).shape)
    for ob in obstacles:
        x0, y0 = ob.center
        z = z + ob.height * np.exp(-np.square((x - x0) / ob.slope_x) - np.square((y - y0) / ob.slope_y))
    return z


def _check_shape(grid_shape, cell_size):
    rows, cols = grid_shape
    if rows < 2 or cols < 2:
        raise TerrainError(f"grid_shape must be at least 2x2, got {grid_shape}")
    if not cell_size > 0:
        raise TerrainError(f"cell_size must be positive, got {cell_size}")


def synth_mountain(spec: MountainSpec, grid_shape: tuple[int, int], cell_size: float,
                   origin: tuple[float, float] = (0.0, 0.0)) -> TerrainGrid:
    """Mountain environment: pointwise max of the base surface and the obstacle bumps."""
    _check_shape(grid_shape, cell_size)
    w = (grid_shape[1] - 1) * cell_size
    h = (grid_shape[0] - 1) * cell_size
    for ob in spec.obstacles:
        if not (ob.height > 0 and ob.slope_x > 0 and ob.slope_y > 0):
            raise TerrainError(f"obstacle height and slopes must be positive: {ob}")
        cx, cy = ob.center
        if not (origin[0] <= cx <= origin[0] + w and origin[1] <= cy <= origin[1] + h):
            raise TerrainError(f"obstacle center {ob.center} outside the map")
    xs = origin[0] + cell_size * np.arange(grid_shape[1])
    ys = origin[1] + cell_size * np.arange(grid_shape[0])
    gx, gy = np.meshgrid(xs, ys)
    z = base_surface(gx, gy, spec.coefficients)
    if spec.obstacles:
        z = np.maximum(z, obstacle_surface(gx, gy, spec.obstacles))
    return TerrainGrid(z, cell_size, origin)


def synth_urban(spec: UrbanSpec, grid_shape: tuple[int, int], cell_size: float,
                origin: tuple[float, float] = (0.0, 0.0)) -> TerrainGrid:
    """Urban environment: each cell takes the tallest prism covering it, else 0.

    A prism covers a point when the point lies inside its footprint grown by
    ``spec.protected_width`` on every side.
    """
    _check_shape(grid_shape, cell_size)
    if spec.protected_width < 0:
        raise TerrainError("protected_width must be non-negative")
    xmax = origin[0] + (grid_shape[1] - 1) * cell_size
    ymax = origin[1] + (grid_shape[0] - 1) * cell_size
    xs = origin[0] + cell_size * np.arange(grid_shape[1])
    ys = origin[1] + cell_size * np.arange(grid_shape[0])
    z = np.zeros(grid_shape)
    pad = spec.protected_width
    for p in spec.prisms:
        if not p.height > 0:
            raise TerrainError(f"prism height must be positive: {p}")
        if not (p.x_min < p.x_max and p.y_min < p.y_max):
            raise TerrainError(f"degenerate prism footprint: {p}")
        if p.x_min < origin[0] or p.y_min < origin[1] or p.x_max > xmax or p.y_max > ymax:
            raise TerrainError(f"prism footprint outside the map: {p}")
        cols = (xs >= p.x_min - pad) & (xs <= p.x_max + pad)
        rows = (ys >= p.y_min - pad) & (ys <= p.y_max + pad)
        block = np.ix_(rows, cols)
        z[block] = np.maximum(z[block], p.height)
    return TerrainGrid(z, cell_size, origin)


def random_mountain_spec(rng: np.random.Generator, count: int, extent: float, height_budget: float,
                         coefficients=DEFAULT_SURFACE, origin=(0.0, 0.0)) -> MountainSpec:
    """Draw ``count`` obstacles: heights in [0.3, 0.9] of the budget, slopes in
    [5%, 15%] of the extent, centers in the middle 80% of the map."""
    obstacles = []
    for _ in range(count):
        cx, cy = origin[0] + extent * rng.uniform(0.1, 0.9, size=2)
        height = height_budget * rng.uniform(0.3, 0.9)
        sx, sy = extent * rng.uniform(0.05, 0.15, size=2)
        obstacles.append(MountainObstacle((float(cx), float(cy)), float(height), float(sx), float(sy)))
    return MountainSpec(tuple(coefficients), tuple(obstacles))


def random_urban_spec(rng: np.random.Generator, count: int, extent: float, height_budget: float,
                      protected_width: float = 0.0, origin=(0.0, 0.0)) -> UrbanSpec:
    """Draw ``count`` prisms with sides in [5%, 15%] of the extent, heights in
    [0.3, 0.9] of the budget, footprints centered in the middle 80% of the map."""
    prisms = []
    for _ in range(count):
        cx, cy = extent * rng.uniform(0.1, 0.9, size=2)
        wx, wy = extent * rng.uniform(0.05, 0.15, size=2)
        height = height_budget * rng.uniform(0.3, 0.9)
        x0 = max(0.0, cx - wx / 2) + origin[0]
        y0 = max(0.0, cy - wy / 2) + origin[1]
        x1 = min(extent, cx + wx / 2) + origin[0]
        y1 = min(extent, cy + wy / 2) + origin[1]
        prisms.append(Prism(float(x0), float(y0), float(x1), float(y1), float(height)))
    return UrbanSpec(tuple(prisms), float(protected_width))


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def elevations_at(grid: TerrainGrid, x, y) -> np.ndarray:
    """Vectorised bilinear interpolation; raises DomainError outside the extent."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xmin, xmax, ymin, ymax = grid.bounds
    # rounding slack for spline points that land on the map edge
    tol = 1e-9 * grid.cell_size
    if (np.any((x < xmin - tol) | (x > xmax + tol) | (y < ymin - tol) | (y > ymax + tol))
            or np.any(np.isnan(x) | np.isnan(y))):
        raise DomainError("query outside terrain extent")
    rows, cols = grid.shape
    u = np.clip((x - xmin) / grid.cell_size, 0, cols - 1)
    v = np.clip((y - ymin) / grid.cell_size, 0, rows - 1)
    c = np.clip(np.floor(u).astype(np.intp), 0, cols - 2)
    r = np.clip(np.floor(v).astype(np.intp), 0, rows - 2)
    fu = u - c
    fv = v - r
    z = grid.elevations
    z00 = z[r, c]
    z01 = z[r, c + 1]
    z10 = z[r + 1, c]
    z11 = z[r + 1, c + 1]
    return (z00 * (1 - fu) + z01 * fu) * (1 - fv) + (z10 * (1 - fu) + z11 * fu) * fv


def elevation_at(grid: TerrainGrid, x: float, y: float) -> float:
    return float(elevations_at(grid, x, y))


def grid_points_within(grid: TerrainGrid, center, radius: float) -> np.ndarray:
    """Grid nodes whose horizontal distance to ``center`` is at most ``radius``.

    Returns an array of shape (k, 3) holding (x, y, elevation), ordered by row
    then column.
    """
    if not radius > 0:
        raise TerrainError("radius must be positive")
    cx, cy = float(center[0]), float(center[1])
    xs, ys = grid.node_coordinates()
    cols = np.nonzero(np.abs(xs - cx) <= radius)[0]
    rows = np.nonzero(np.abs(ys - cy) <= radius)[0]
    if cols.size == 0 or rows.size == 0:
        return np.empty((0, 3))
    gx, gy = np.meshgrid(xs[cols], ys[rows])
    inside = np.square(gx - cx) + np.square(gy - cy) <= radius * radius
    gz = grid.elevations[np.ix_(rows, cols)]
    return np.column_stack([gx[inside], gy[inside], gz[inside]])


# ---------------------------------------------------------------------------
# ASCII grid I/O
# ---------------------------------------------------------------------------

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def load_dem(path: str | Path, cell_size_override: float | None = None) -> TerrainGrid:
    """Read an ESRI-style ASCII grid.

    ``xllcorner``/``yllcorner`` (or the ``*center`` variants) are taken as the
    position of the south-west node. Any cell equal to ``NODATA_value`` is an
    error, since the evaluator needs a complete surface.
    """
    text = Path(path).read_text()
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        raise DEMParseError("empty file", line=1)

    header: dict[str, float] = {}
    i = 0
    while i < len(lines):
        stripped = lines[i].strip()
        if not stripped:
            i += 1
            continue
        parts = stripped.split()
        key = parts[0].lower()
        if key[0].isalpha():
            if key in ("xllcenter", "yllcenter"):
                key = key.replace("center", "corner")
            if key not in _HEADER_KEYS:
                raise DEMParseError(f"unknown header key {parts[0]!r}", line=i + 1, column=1)
            if len(parts) != 2:
                raise DEMParseError(f"header {parts[0]!r} needs exactly one value", line=i + 1)
            try:
                header[key] = float(parts[1])
            except ValueError:
                raise DEMParseError(f"bad header value {parts[1]!r}", line=i + 1, column=2) from None
            i += 1
        else:
            break

    for key in ("ncols", "nrows", "cellsize"):
        if key not in header:
            raise DEMParseError(f"missing header {key!r}", line=i + 1)
    ncols, nrows = header["ncols"], header["nrows"]
    if ncols != int(ncols) or nrows != int(nrows) or ncols < 2 or nrows < 2:
        raise DEMParseError("ncols and nrows must be integers >= 2")
    ncols, nrows = int(ncols), int(nrows)
    nodata = header.get("nodata_value")

    data = np.empty((nrows, ncols))
    row = 0
    for lineno in range(i, len(lines)):
        stripped = lines[lineno].strip()
        if not stripped:
            continue
        if row >= nrows:
            raise DEMParseError(f"more than nrows={nrows} data rows", line=lineno + 1)
        parts = stripped.split()
        if len(parts) != ncols:
            raise DEMParseError(f"expected {ncols} values, found {len(parts)}", line=lineno + 1)
        for col, token in enumerate(parts):
            try:
                value = float(token)
            except ValueError:
                raise DEMParseError(f"bad number {token!r}", line=lineno + 1, column=col + 1) from None
            if nodata is not None and value == nodata:
                raise DEMParseError("NODATA cell present", line=lineno + 1, column=col + 1)
            if not math.isfinite(value):
                raise DEMParseError(f"non-finite value {token!r}", line=lineno + 1, column=col + 1)
            data[row, col] = value
        row += 1
    if row != nrows:
        raise DEMParseError(f"expected {nrows} data rows, found {row}", line=len(lines))

    cell = header["cellsize"] if cell_size_override is None else float(cell_size_override)
    origin = (header.get("xllcorner", 0.0), header.get("yllcorner", 0.0))
    return TerrainGrid(data[::-1].copy(), cell, origin)


def save_dem(grid: TerrainGrid, path: str | Path, nodata: float = -9999.0) -> None:
    """Write ``grid`` as an ASCII grid, north row first, values at full precision."""
    rows, cols = grid.shape
    out = [
        f"ncols {cols}",
        f"nrows {rows}",
        f"xllcorner {grid.origin[0]!r}",
        f"yllcorner {grid.origin[1]!r}",
        f"cellsize {grid.cell_size!r}",
        f"NODATA_value {nodata!r}",
    ]
    body = [" ".join(map(repr, map(float, line))) for line in grid.elevations[::-1]]
    Path(path).write_text("\n".join(out + body) + "\n")
