"""Mini-batch training of the GRU with Adam, and the tuning objective.

The tuned hyperparameters are exactly (batch_size, epochs, learning_rate);
everything else (Adam moments, clipping threshold, init scheme) is fixed so
that a candidate's fitness depends only on its decoded triple and the seed.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..metaheuristics.space import SearchSpace, Candidate, decode
from .backprop import backward
from .model import GruModel, PARAM_NAMES, mse_loss

__all__ = [
    "TrialConfig",
    "EpochStats",
    "TrainReport",
    "Adam",
    "clip_gradients",
    "train",
    "objective_from_pipeline",
    "write_report_csv",
]

GRAD_CLIP_NORM = 5.0  # survives lr ~0.1-scale trials that otherwise diverge


@dataclass(frozen=True)
class TrialConfig:
    """The tunable training triple.

    epochs=0 and learning_rate=0 are legal no-op settings (they leave the
    initialized model untouched); batch sizes beyond the training-set size
    are truncated to it at use.
    """

    batch_size: int
    epochs: int
    learning_rate: float

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_mse: float
    val_mse: float


@dataclass
class TrainReport:
    final_train_mse: float
    final_val_mse: float
    curve: list[EpochStats] = field(default_factory=list)
    wall_time: float = 0.0
    diverged: bool = False


class Adam:
    """Adaptive-moment update over the model's parameter dict."""

    def __init__(self, model: GruModel, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.model = model
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p) for name, p in model.params().items()}
        self.v = {name: np.zeros_like(p) for name, p in model.params().items()}

    def step(self, grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for name in PARAM_NAMES:
            g = grads[name]
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            m_hat = self.m[name] / bc1
            v_hat = self.v[name] / bc2
            getattr(self.model, name)[...] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def clip_gradients(grads: dict[str, np.ndarray], max_norm: float = GRAD_CLIP_NORM) -> float:
    """Scale all gradients down to a global L2 norm of max_norm. Returns the norm."""
    total = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if total > max_norm and total > 0:
        scale = max_norm / total
        for g in grads.values():
            g *= scale
    return total


def _as_xy(data) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(data, "X") and hasattr(data, "Y"):
        return data.X, data.Y
    x, y = data
    return np.asarray(x, dtype=float), np.asarray(y, dtype=float)


def train(
    train_data,
    val_data,
    config: TrialConfig,
    seed: int = 0,
    on_epoch: Callable[[EpochStats], None] | None = None,
) -> tuple[GruModel, TrainReport]:
    """Train a fresh model with seeded init and per-epoch seeded shuffles.

    train_data/val_data are (X, Y) pairs or objects exposing X and Y.
    Divergence (non-finite loss) aborts the run: the report keeps the curve
    up to the last full epoch and carries worst-possible final losses.
    """
    x_train, y_train = _as_xy(train_data)
    x_val, y_val = _as_xy(val_data)
    n = len(x_train)
    if n == 0:
        raise ValueError("empty training split")
    batch_size = min(config.batch_size, n)

    rng = np.random.default_rng(seed)
    model = GruModel(x_train.shape[2], 64, y_train.shape[1], rng=rng)

    started = time.perf_counter()

    def full_mse(x, y) -> float:
        return mse_loss(model.forward(x), y)

    stats = EpochStats(0, full_mse(x_train, y_train), full_mse(x_val, y_val))
    curve = [stats]
    if on_epoch is not None:
        on_epoch(stats)

    adam = Adam(model, config.learning_rate)
    diverged = False
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        sq_err_sum = 0.0
        for start in range(0, n, batch_size):  # final partial batch included
            idx = order[start : start + batch_size]
            loss, grads = backward(model, x_train[idx], y_train[idx])
            if not math.isfinite(loss):
                diverged = True
                break
            sq_err_sum += loss * idx.size * y_train.shape[1]
            clip_gradients(grads)
            adam.step(grads)
        if diverged or not all(np.all(np.isfinite(getattr(model, p))) for p in PARAM_NAMES):
            diverged = True
            break
        stats = EpochStats(epoch, sq_err_sum / (n * y_train.shape[1]), full_mse(x_val, y_val))
        curve.append(stats)
        if on_epoch is not None:
            on_epoch(stats)

    report = TrainReport(
        final_train_mse=math.inf if diverged else curve[-1].train_mse,
        final_val_mse=math.inf if diverged else curve[-1].val_mse,
        curve=curve,
        wall_time=time.perf_counter() - started,
        diverged=diverged,
    )
    return model, report


def objective_from_pipeline(
    train_data,
    val_data,
    space: SearchSpace,
    seed: int = 0,
    epoch_cap: int | None = 50,
) -> Callable[[np.ndarray], float]:
    """Fitness function for the optimizers: validation MSE of a model trained
    with the candidate's decoded (batch_size, epochs, learning_rate).

    The epoch cap keeps tuning budgets sane; the winning triple keeps its
    full epoch count for any final training. Deterministic per (genes, seed).
    """

    def objective(genes: np.ndarray) -> float:
        values = decode(Candidate(np.asarray(genes, dtype=float)), space)
        epochs = int(values["epochs"])
        if epoch_cap is not None:
            epochs = min(epochs, epoch_cap)
        config = TrialConfig(
            batch_size=int(values["batch_size"]),
            epochs=epochs,
            learning_rate=float(values["learning_rate"]),
        )
        _, report = train(train_data, val_data, config, seed=seed)
        return report.final_val_mse

    return objective


def write_report_csv(report: TrainReport, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_mse", "val_mse"])
        for row in report.curve:
            writer.writerow([row.epoch, repr(row.train_mse), repr(row.val_mse)])
    return path
