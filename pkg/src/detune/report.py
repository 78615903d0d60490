"""Figure rendering for the CLI's report path.

Every figure lands next to its CSV: convergence curves for bench/tune,
the per-method MAPE bar chart for compare, and the 24-hour forecast overlay.
CSV files remain the canonical artifacts; figures are for eyeballs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .grunet.training import TrainReport
from .metaheuristics.result import OptimizeResult
from .metrics import EvalReport

__all__ = [
    "save_history_figure",
    "save_training_figure",
    "save_comparison_figure",
    "save_forecast_figure",
]


def save_history_figure(result: OptimizeResult, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    gens = [s.generation for s in result.history]
    best = [s.best_fitness for s in result.history]
    mean = [s.mean_fitness for s in result.history]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gens, best, marker="o", ms=3, label="best")
    if all(np.isfinite(mean)):
        ax.plot(gens, mean, ls="--", label="population mean")
    if min(best) > 0:
        ax.set_yscale("log")
    ax.set_xlabel("generation")
    ax.set_ylabel("fitness")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_training_figure(report: TrainReport, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    epochs = [s.epoch for s in report.curve]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(epochs, [s.train_mse for s in report.curve], label="train MSE")
    ax.plot(epochs, [s.val_mse for s in report.curve], label="val MSE")
    ax.set_xlabel("epoch")
    ax.set_ylabel("MSE (scaled)")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_comparison_figure(reports: list[EvalReport], path: str | Path) -> Path:
    path = Path(path)
    ok = [r for r in reports if not r.failed]
    ok.sort(key=lambda r: r.mape)
    fig, ax = plt.subplots(figsize=(6, 4))
    if ok:
        names = [r.method for r in ok]
        bars = ax.bar(names, [r.mape for r in ok], color="#4878cf")
        ax.bar_label(bars, fmt="%.2f")
    ax.set_ylabel("MAPE (%)")
    ax.set_title("Tuning method comparison")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_forecast_figure(
    hours: list[str], actual_kw: np.ndarray, predicted_kw: np.ndarray, path: str | Path
) -> Path:
    path = Path(path)
    x = np.arange(len(hours))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, actual_kw, marker="o", ms=3, label="actual")
    ax.plot(x, predicted_kw, marker="s", ms=3, label="predicted")
    step = max(1, len(hours) // 8)
    ax.set_xticks(x[::step])
    ax.set_xticklabels([h[-8:-3] if len(h) >= 8 else h for h in hours[::step]], rotation=45)
    ax.set_xlabel("hour")
    ax.set_ylabel("demand (kW)")
    ax.legend()
    ax.set_title("24 hours ahead forecast")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
