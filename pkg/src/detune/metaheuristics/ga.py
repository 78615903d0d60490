"""Real-coded genetic algorithm baseline.

Textbook formulation: tournament parent selection, blend (BLX-alpha)
crossover, per-gene Gaussian mutation with a geometrically decaying step
size, and elitism. Shares the SearchSpace/objective interface with the other
optimizers so comparisons stay apples-to-apples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigurationError
from .de import Objective, evaluate_all
from .result import GenerationStats, OptimizeResult
from .space import Candidate, Population, SearchSpace, init_population

__all__ = ["GaConfig", "ga_optimize"]


@dataclass(frozen=True)
class GaConfig:
    pop_size: int = 20
    max_generations: int = 100
    tournament_size: int = 3
    crossover_rate: float = 0.9
    blend_alpha: float = 0.5
    mutation_rate: float = 0.15
    mutation_sigma: float = 0.1  # initial step, as a fraction of each bound width
    sigma_decay: float = 0.93  # per-generation multiplier on the step
    elite_count: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.pop_size < 4:
            raise ConfigurationError(f"pop_size must be >= 4, got {self.pop_size}")
        if self.max_generations < 0:
            raise ConfigurationError("max_generations must be >= 0")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigurationError("crossover_rate must be in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigurationError("mutation_rate must be in [0, 1]")
        if self.tournament_size < 2:
            raise ConfigurationError("tournament_size must be >= 2")
        if not 0 < self.elite_count < self.pop_size:
            raise ConfigurationError("elite_count must be in (0, pop_size)")


def _tournament(pop: Population, k: int, rng: np.random.Generator) -> Candidate:
    entrants = rng.integers(len(pop), size=k)
    return min((pop.members[int(i)] for i in entrants), key=lambda m: m.fitness)


def ga_optimize(
    space: SearchSpace,
    objective: Objective,
    cfg: GaConfig,
    on_generation: Callable[[GenerationStats], None] | None = None,
    workers: int = 1,
) -> OptimizeResult:
    rng = np.random.default_rng(cfg.seed)
    widths = space.uppers - space.lowers
    pop = init_population(space, cfg.pop_size, rng)

    fitnesses = evaluate_all(objective, [m.genes for m in pop.members], workers)
    for member, f in zip(pop.members, fitnesses):
        member.fitness = f
    evaluations = len(pop)

    best = pop.best().copy()
    history: list[GenerationStats] = []

    def record(generation: int) -> None:
        stats = GenerationStats(generation, best.fitness, pop.mean_fitness(), evaluations)
        history.append(stats)
        if on_generation is not None:
            on_generation(stats)

    record(0)

    sigma = cfg.mutation_sigma
    for generation in range(1, cfg.max_generations + 1):
        elites = [
            m.copy()
            for m in sorted(pop.members, key=lambda m: m.fitness)[: cfg.elite_count]
        ]

        children: list[Candidate] = []
        while len(children) < cfg.pop_size - cfg.elite_count:
            pa = _tournament(pop, cfg.tournament_size, rng)
            pb = _tournament(pop, cfg.tournament_size, rng)
            if rng.random() < cfg.crossover_rate:
                # BLX-alpha: each gene uniform on the parent interval extended
                # by alpha on both sides
                gamma = rng.uniform(-cfg.blend_alpha, 1.0 + cfg.blend_alpha, size=space.dim)
                genes = pa.genes + gamma * (pb.genes - pa.genes)
            else:
                genes = pa.genes.copy()
            mutate_mask = rng.random(space.dim) < cfg.mutation_rate
            noise = rng.normal(0.0, sigma * widths)
            genes = np.where(mutate_mask, genes + noise, genes)
            children.append(Candidate(space.clamp(genes)))

        fitnesses = evaluate_all(objective, [c.genes for c in children], workers)
        for child, f in zip(children, fitnesses):
            child.fitness = f
        evaluations += len(children)

        pop.members = elites + children
        pop.generation = generation
        sigma *= cfg.sigma_decay

        gen_best = pop.best()
        if gen_best.fitness < best.fitness:
            best = gen_best.copy()
        record(generation)

    return OptimizeResult(best=best, history=history, evaluations=evaluations)
