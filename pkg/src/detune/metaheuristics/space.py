"""Bounded mixed integer/continuous search spaces and their candidate vectors.

A search space is an ordered list of named, bounded dimensions.  Candidates
live in the continuous box regardless of dimension kind; integer dimensions
only take effect when a vector is decoded into named values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError

__all__ = [
    "ParamSpec",
    "SearchSpace",
    "Candidate",
    "Population",
    "init_population",
    "decode",
]


@dataclass(frozen=True)
class ParamSpec:
    """One bounded search dimension.

    kind "integer" means decoded values are rounded to the nearest integer
    (halves away from zero) and clamped back into [lower, upper]; the raw
    gene itself stays continuous.
    """

    name: str
    lower: float
    upper: float
    kind: str = "continuous"

    def __post_init__(self) -> None:
        if self.kind not in ("integer", "continuous"):
            raise ConfigurationError(f"unknown param kind {self.kind!r} for {self.name!r}")
        if not self.lower < self.upper:
            raise ConfigurationError(
                f"param {self.name!r}: lower ({self.lower}) must be < upper ({self.upper})"
            )
        if self.kind == "integer" and math.ceil(self.lower) > math.floor(self.upper):
            raise ConfigurationError(
                f"param {self.name!r}: no integer in [{self.lower}, {self.upper}]"
            )


@dataclass(frozen=True)
class SearchSpace:
    """Ordered list of ParamSpec; its length is the problem dimension."""

    params: tuple[ParamSpec, ...]

    def __post_init__(self) -> None:
        if len(self.params) < 1:
            raise ConfigurationError("search space needs at least one parameter")
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate parameter names: {names}")
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def dim(self) -> int:
        return len(self.params)

    @property
    def lowers(self) -> np.ndarray:
        return np.array([p.lower for p in self.params], dtype=float)

    @property
    def uppers(self) -> np.ndarray:
        return np.array([p.upper for p in self.params], dtype=float)

    def clamp(self, genes: np.ndarray) -> np.ndarray:
        """Repair out-of-bounds genes by clipping to the violated bound."""
        return np.clip(genes, self.lowers, self.uppers)

    def contains(self, genes: np.ndarray) -> bool:
        return bool(np.all(genes >= self.lowers) and np.all(genes <= self.uppers))


@dataclass
class Candidate:
    """A real vector in the search box with an optional cached fitness.

    Fitness is lower-is-better and is cached so each new vector costs exactly
    one objective call (objective calls may be full training runs).
    """

    genes: np.ndarray
    fitness: float | None = None

    def copy(self) -> "Candidate":
        return Candidate(self.genes.copy(), self.fitness)


@dataclass
class Population:
    members: list[Candidate]
    generation: int = 0

    def __len__(self) -> int:
        return len(self.members)

    def best(self) -> Candidate:
        evaluated = [m for m in self.members if m.fitness is not None]
        if not evaluated:
            raise ValueError("population has no evaluated members")
        return min(evaluated, key=lambda m: m.fitness)

    def mean_fitness(self) -> float:
        return float(np.mean([m.fitness for m in self.members]))


def init_population(space: SearchSpace, n: int, rng: np.random.Generator) -> Population:
    """Draw n candidates uniformly within the space's bounds (generation 0)."""
    if n < 4:
        raise ConfigurationError(f"population size must be >= 4, got {n}")
    lowers, uppers = space.lowers, space.uppers
    members = [Candidate(rng.uniform(lowers, uppers)) for _ in range(n)]
    return Population(members, generation=0)


def _round_half_away(x: float) -> int:
    # round() would go to even on halves; hyperparameter grids want 16.5 -> 17
    return int(math.floor(x + 0.5)) if x >= 0 else int(math.ceil(x - 0.5))


def decode(candidate: Candidate, space: SearchSpace) -> dict[str, float | int]:
    """Map raw genes to named values: round+clamp integers, pass continuous through."""
    out: dict[str, float | int] = {}
    for gene, spec in zip(candidate.genes, space.params):
        if spec.kind == "integer":
            value = _round_half_away(float(gene))
            out[spec.name] = min(max(value, math.ceil(spec.lower)), math.floor(spec.upper))
        else:
            out[spec.name] = float(np.clip(gene, spec.lower, spec.upper))
    return out
