"""Analytic benchmark objectives with known minima, for optimizer validation."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError

__all__ = ["sphere", "rastrigin", "rosenbrock", "benchmark_objective", "BENCHMARKS"]


def sphere(x: np.ndarray) -> float:
    """Sum of squares; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x))


def rastrigin(x: np.ndarray) -> float:
    """Highly multimodal; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x: np.ndarray) -> float:
    """Curved valley; minimum 0 at the all-ones vector."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


BENCHMARKS = {"sphere": sphere, "rastrigin": rastrigin, "rosenbrock": rosenbrock}

# Suggested box bounds for each benchmark.
BENCHMARK_BOUNDS = {"sphere": (-5.0, 5.0), "rastrigin": (-5.12, 5.12), "rosenbrock": (-2.048, 2.048)}


def benchmark_objective(name: str, d: int):
    """Look up a benchmark by name, validated for dimension d >= 1."""
    if d < 1:
        raise ConfigurationError(f"benchmark dimension must be >= 1, got {d}")
    try:
        fn = BENCHMARKS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}"
        ) from None

    def objective(x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if x.size != d:
            raise ValueError(f"expected a {d}-vector, got shape {x.shape}")
        return fn(x)

    return objective
