"""Optimization run results and their CSV history serialization."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .space import Candidate

__all__ = ["GenerationStats", "OptimizeResult", "write_history_csv"]

HISTORY_COLUMNS = ("generation", "best_fitness", "mean_fitness", "evaluations")


@dataclass(frozen=True)
class GenerationStats:
    """Snapshot after one generation: best/mean fitness and cumulative objective calls."""

    generation: int
    best_fitness: float
    mean_fitness: float
    evaluations: int


@dataclass
class OptimizeResult:
    """Outcome of a population-based run.

    `best` is the lowest-fitness candidate ever evaluated; greedy selection
    makes `best_fitness` non-increasing along `history`.
    """

    best: Candidate
    history: list[GenerationStats] = field(default_factory=list)
    evaluations: int = 0

    @property
    def best_fitness(self) -> float:
        return float(self.best.fitness)


def write_history_csv(result: OptimizeResult, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HISTORY_COLUMNS)
        for row in result.history:
            writer.writerow(
                [row.generation, repr(row.best_fitness), repr(row.mean_fitness), row.evaluations]
            )
    return path
