"""Decomposition-based multi-objective optimisation with adaptive areal weight
adjustment, applied to UAV 3-D path planning."""

from .metrics import hypervolume_2d, normalize, pure_diversity, score_and_rank
from .optimizers import ALGORITHMS, RunConfig, RunResult, run
from .problem import ProblemConfig, UAVPathProblem
from .scenarios import ScenarioSpec, build_problem, catalog_case

__all__ = [
    "ALGORITHMS",
    "ProblemConfig",
    "RunConfig",
    "RunResult",
    "ScenarioSpec",
    "UAVPathProblem",
    "build_problem",
    "catalog_case",
    "hypervolume_2d",
    "normalize",
    "pure_diversity",
    "run",
    "score_and_rank",
]
