"""Global-best particle swarm baseline.

Standard velocity update with constant inertia, cognitive and social pulls
toward the personal and global bests, and velocity clamping as a fraction of
each bound width. Positions are clamped back into the box after each move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigurationError
from .de import Objective, evaluate_all
from .result import GenerationStats, OptimizeResult
from .space import Candidate, SearchSpace

__all__ = ["PsoConfig", "pso_optimize"]


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 20
    max_iterations: int = 100
    inertia: float = 0.7298
    cognitive: float = 1.49618
    social: float = 1.49618
    velocity_clamp: float = 0.5  # max speed per dimension, as a fraction of bound width
    seed: int = 0

    def __post_init__(self) -> None:
        if self.swarm_size < 2:
            raise ConfigurationError(f"swarm_size must be >= 2, got {self.swarm_size}")
        if self.max_iterations < 0:
            raise ConfigurationError("max_iterations must be >= 0")
        if self.inertia < 0 or self.cognitive < 0 or self.social < 0:
            raise ConfigurationError("inertia and acceleration coefficients must be >= 0")
        if not 0 < self.velocity_clamp <= 1:
            raise ConfigurationError("velocity_clamp must be in (0, 1]")


def pso_optimize(
    space: SearchSpace,
    objective: Objective,
    cfg: PsoConfig,
    on_generation: Callable[[GenerationStats], None] | None = None,
    workers: int = 1,
) -> OptimizeResult:
    rng = np.random.default_rng(cfg.seed)
    n, d = cfg.swarm_size, space.dim
    lowers, uppers = space.lowers, space.uppers
    v_max = cfg.velocity_clamp * (uppers - lowers)

    x = rng.uniform(lowers, uppers, size=(n, d))
    v = np.zeros((n, d))
    fitness = np.array(evaluate_all(objective, list(x), workers))
    evaluations = n

    pbest_x = x.copy()
    pbest_f = fitness.copy()
    g = int(np.argmin(pbest_f))
    gbest = Candidate(pbest_x[g].copy(), float(pbest_f[g]))

    history: list[GenerationStats] = []

    def record(iteration: int, current_f: np.ndarray) -> None:
        stats = GenerationStats(iteration, gbest.fitness, float(np.mean(current_f)), evaluations)
        history.append(stats)
        if on_generation is not None:
            on_generation(stats)

    record(0, fitness)

    for iteration in range(1, cfg.max_iterations + 1):
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        v = (
            cfg.inertia * v
            + cfg.cognitive * r1 * (pbest_x - x)
            + cfg.social * r2 * (gbest.genes - x)
        )
        v = np.clip(v, -v_max, v_max)
        x = np.clip(x + v, lowers, uppers)

        fitness = np.array(evaluate_all(objective, list(x), workers))
        evaluations += n

        improved = fitness < pbest_f
        pbest_x[improved] = x[improved]
        pbest_f[improved] = fitness[improved]
        g = int(np.argmin(pbest_f))
        if pbest_f[g] < gbest.fitness:
            gbest = Candidate(pbest_x[g].copy(), float(pbest_f[g]))

        record(iteration, fitness)

    return OptimizeResult(best=gbest, history=history, evaluations=evaluations)
