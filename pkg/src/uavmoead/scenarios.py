"""Scenario catalog C1-C24 and construction of the matching problems.

Mountain cases (C1-C10) use a 200 km square map, urban cases (C11-C20) a 2 km
square, DEM cases (C21-C24) a 10 km square at 5 m resolution. All coordinates
are metres. Synthetic grids use a cell size of r_safe / 2 so every path point
sees a dozen or so terrain nodes inside its safety disc.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from .problem import ProblemConfig, UAVPathProblem, corner_endpoints, genome_bounds
from .spline import SplineConfig
from .terrain import (
    TerrainGrid,
    load_dem,
    random_mountain_spec,
    random_urban_spec,
    synth_mountain,
    synth_urban,
)

R_SAFE = {"mountain": 200.0, "urban": 10.0, "dem": 20.0}
EXTENT = {"mountain": 200_000.0, "urban": 2_000.0, "dem": 10_000.0}
HEIGHT_BUDGET = {"mountain": 3000.0, "urban": 150.0, "dem": 1000.0}
DEM_RESOLUTION = 5.0
DEM_STANDIN_OBSTACLES = 8


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary printable parts."""
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def table_budget(case: int) -> tuple[int, int]:
    """(evaluation budget, DOP) for a catalog case number."""
    if case >= 21:
        return 10000, 4
    j = (case - 1) % 10
    if j < 3:
        return 10000, 2
    if j < 6:
        return 12000, 3
    if j < 9:
        return 14000, 4
    return 16000, 5


@dataclass(frozen=True)
class ScenarioSpec:
    id: str
    kind: str
    obstacles: int
    extent: float
    cell_size: float
    r_safe: float
    dop: int
    eval_budget: int
    terrain_seed: int
    height_budget: float
    dem_path: str | None = None
    degree: int = 3
    samples: int = 150

    @property
    def grid_shape(self) -> tuple[int, int]:
        n = int(round(self.extent / self.cell_size)) + 1
        return n, n

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioSpec":
        return cls(**data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "ScenarioSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))


def catalog_case(case_id: str, seed: int = 0) -> ScenarioSpec:
    """Catalog entry for ``C1`` .. ``C24``."""
    if not (case_id[:1].upper() == "C" and case_id[1:].isdigit()):
        raise KeyError(f"unknown case {case_id!r}")
    num = int(case_id[1:])
    if not 1 <= num <= 24:
        raise KeyError(f"unknown case {case_id!r}")
    cid = f"C{num}"
    budget, dop = table_budget(num)
    if num <= 10:
        kind, count = "mountain", 2 * num
    elif num <= 20:
        kind, count = "urban", 2 * (num - 10)
    else:
        kind, count = "dem", DEM_STANDIN_OBSTACLES
    r_safe = R_SAFE[kind]
    cell = DEM_RESOLUTION if kind == "dem" else r_safe / 2
    return ScenarioSpec(cid, kind, count, EXTENT[kind], cell, r_safe, dop, budget,
                        derive_seed(seed, cid, "terrain"), HEIGHT_BUDGET[kind])


def catalog(seed: int = 0) -> dict[str, ScenarioSpec]:
    return {f"C{i}": catalog_case(f"C{i}", seed) for i in range(1, 25)}


def build_terrain(spec: ScenarioSpec) -> TerrainGrid:
    return _build_terrain_cached(spec)


@lru_cache(maxsize=4)
def _build_terrain_cached(spec: ScenarioSpec) -> TerrainGrid:
    rng = np.random.default_rng(spec.terrain_seed)
    if spec.kind == "dem" and spec.dem_path:
        return load_dem(spec.dem_path)
    if spec.kind in ("mountain", "dem"):
        ms = random_mountain_spec(rng, spec.obstacles, spec.extent, spec.height_budget)
        return synth_mountain(ms, spec.grid_shape, spec.cell_size)
    if spec.kind == "urban":
        us = random_urban_spec(rng, spec.obstacles, spec.extent, spec.height_budget,
                               protected_width=spec.r_safe)
        return synth_urban(us, spec.grid_shape, spec.cell_size)
    raise ValueError(f"unknown environment kind {spec.kind!r}")


def build_problem(spec: ScenarioSpec, grid: TerrainGrid | None = None) -> UAVPathProblem:
    grid = build_terrain(spec) if grid is None else grid
    start, target = corner_endpoints(grid, spec.r_safe)
    lo, hi = genome_bounds(grid, spec.dop, spec.r_safe)
    cfg = ProblemConfig(start, target, spec.r_safe, spec.dop, lo, hi,
                        spline=SplineConfig(spec.degree, spec.samples))
    return UAVPathProblem(grid, cfg)


def scaled(spec: ScenarioSpec, **changes) -> ScenarioSpec:
    """Copy of ``spec`` with fields replaced (e.g. a coarser grid for tests)."""
    return replace(spec, **changes)
