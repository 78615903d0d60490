"""Population-based optimizers over bounded mixed integer/continuous spaces."""

from .benchmarks import BENCHMARK_BOUNDS, BENCHMARKS, benchmark_objective, rastrigin, rosenbrock, sphere
from .de import DeConfig, crossover, de_optimize, draw_donor_indices, mutate, select
from .ga import GaConfig, ga_optimize
from .pso import PsoConfig, pso_optimize
from .result import GenerationStats, OptimizeResult, write_history_csv
from .space import Candidate, ParamSpec, Population, SearchSpace, decode, init_population

__all__ = [
    "BENCHMARKS",
    "BENCHMARK_BOUNDS",
    "Candidate",
    "DeConfig",
    "GaConfig",
    "GenerationStats",
    "OptimizeResult",
    "ParamSpec",
    "Population",
    "PsoConfig",
    "SearchSpace",
    "benchmark_objective",
    "crossover",
    "de_optimize",
    "decode",
    "draw_donor_indices",
    "ga_optimize",
    "init_population",
    "mutate",
    "pso_optimize",
    "rastrigin",
    "rosenbrock",
    "select",
    "sphere",
    "write_history_csv",
]
