"""Differential Evolution, rand/1/bin variant.

Per generation, each member i is challenged by a trial vector built in three
steps: mutation (base donor plus a scaled difference of two other donors),
binomial crossover against member i, and greedy selection that keeps the
trial whenever its fitness is less than or equal to the incumbent's.

All random draws for a generation happen before any objective evaluation, so
evaluations may be dispatched concurrently without changing the outcome.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import ConfigurationError
from .result import GenerationStats, OptimizeResult
from .space import Candidate, Population, SearchSpace, init_population

__all__ = ["DeConfig", "draw_donor_indices", "mutate", "crossover", "select", "de_optimize"]

Objective = Callable[[np.ndarray], float]


def _default_rng(seed: int) -> np.random.Generator:
    # seam: tests replace this to drive the optimizer from a scripted tape
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class DeConfig:
    f_scale: float = 0.8
    cr: float = 0.9
    pop_size: int = 20
    max_generations: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.f_scale <= 2.0:
            raise ConfigurationError(f"f_scale must be in [0, 2], got {self.f_scale}")
        if not 0.0 <= self.cr <= 1.0:
            raise ConfigurationError(f"cr must be in [0, 1], got {self.cr}")
        if self.pop_size < 4:
            raise ConfigurationError(f"pop_size must be >= 4, got {self.pop_size}")
        if self.max_generations < 0:
            raise ConfigurationError("max_generations must be >= 0")


def draw_donor_indices(
    rng: np.random.Generator, pop_size: int, target_index: int
) -> tuple[int, int, int]:
    """Draw r1, r2, r3 pairwise distinct and distinct from the target.

    Rejection sampling on rng.integers keeps the draw sequence trivial to
    replay against a scripted rng.
    """
    if pop_size < 4:
        raise ConfigurationError(
            f"mutation needs 3 donors distinct from the target; pop_size {pop_size} < 4"
        )
    r1 = target_index
    while r1 == target_index:
        r1 = int(rng.integers(pop_size))
    r2 = target_index
    while r2 in (target_index, r1):
        r2 = int(rng.integers(pop_size))
    r3 = target_index
    while r3 in (target_index, r1, r2):
        r3 = int(rng.integers(pop_size))
    return r1, r2, r3


def mutate(
    pop: Population, target_index: int, f_scale: float, rng: np.random.Generator
) -> np.ndarray:
    """Mutant vector x_r1 + F * (x_r2 - x_r3); bounds repair is the caller's step."""
    r1, r2, r3 = draw_donor_indices(rng, len(pop), target_index)
    m = pop.members
    return m[r1].genes + f_scale * (m[r2].genes - m[r3].genes)


def crossover(
    target_genes: np.ndarray, mutant: np.ndarray, cr: float, rng: np.random.Generator
) -> np.ndarray:
    """Binomial crossover: gene j comes from the mutant when its uniform draw
    is <= cr or j is the pre-drawn forced index, so at least one gene always
    comes from the mutant."""
    if target_genes.shape != mutant.shape:
        raise ValueError(f"shape mismatch: target {target_genes.shape} vs mutant {mutant.shape}")
    d = len(target_genes)
    j_rand = int(rng.integers(d))
    draws = rng.random(d)
    take_mutant = draws <= cr
    take_mutant[j_rand] = True
    return np.where(take_mutant, mutant, target_genes)


def select(target: Candidate, trial: Candidate) -> Candidate:
    """Greedy survivor selection; ties go to the trial."""
    if target.fitness is None or trial.fitness is None:
        raise ValueError("selection requires evaluated fitness on both candidates")
    return trial if trial.fitness <= target.fitness else target


def _sanitize(value: float) -> float:
    # Non-finite objective values would poison comparisons; worst-possible
    # fitness keeps the run going and lets selection reject them.
    value = float(value)
    return value if math.isfinite(value) else math.inf


def evaluate_all(
    objective: Objective, genes_list: Sequence[np.ndarray], workers: int = 1
) -> list[float]:
    """Evaluate a batch of vectors, optionally on a thread pool.

    Result order always matches input order, so concurrency cannot change
    which (candidate, fitness) pairs are produced.
    """
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return [_sanitize(f) for f in pool.map(objective, genes_list)]
    return [_sanitize(objective(g)) for g in genes_list]


def de_optimize(
    space: SearchSpace,
    objective: Objective,
    cfg: DeConfig,
    on_generation: Callable[[GenerationStats], None] | None = None,
    workers: int = 1,
) -> OptimizeResult:
    rng = _default_rng(cfg.seed)
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

    for generation in range(1, cfg.max_generations + 1):
        trials = []
        for i, member in enumerate(pop.members):
            mutant = mutate(pop, i, cfg.f_scale, rng)
            trial_genes = crossover(member.genes, mutant, cfg.cr, rng)
            trials.append(Candidate(space.clamp(trial_genes)))

        fitnesses = evaluate_all(objective, [t.genes for t in trials], workers)
        for trial, f in zip(trials, fitnesses):
            trial.fitness = f
        evaluations += len(trials)

        pop.members = [select(member, trial) for member, trial in zip(pop.members, trials)]
        pop.generation = generation

        gen_best = pop.best()
        if gen_best.fitness < best.fitness:
            best = gen_best.copy()
        record(generation)

    return OptimizeResult(best=best, history=history, evaluations=evaluations)
