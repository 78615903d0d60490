"""Forecast evaluation: MSE in the scaled domain, MAPE in physical kW, and
the cross-method comparison table."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .data.pipeline import ScalerParams, WindowedDataset, inverse_scale_demand
from .errors import EvaluationError
from .grunet.model import GruModel, mse_loss

__all__ = ["EvalReport", "mape", "evaluate", "comparison_table", "comparison_csv"]

_ZERO_GUARD = 1e-9


@dataclass(frozen=True)
class EvalReport:
    method: str
    mape: float
    mse: float
    n_windows: int
    error: str | None = None  # set when the method's run failed

    @property
    def failed(self) -> bool:
        return self.error is not None


def mape(actual: np.ndarray, predicted: np.ndarray) -> float:
    """Mean absolute percentage error, 100/n * sum(|a - p| / |a|).

    Load is physically positive, so near-zero actuals indicate broken data
    and raise rather than being skipped.
    """
    actual = np.asarray(actual, dtype=float).ravel()
    predicted = np.asarray(predicted, dtype=float).ravel()
    if actual.shape != predicted.shape:
        raise ValueError(f"length mismatch: {actual.shape} vs {predicted.shape}")
    tiny = np.flatnonzero(np.abs(actual) < _ZERO_GUARD)
    if tiny.size:
        raise EvaluationError(
            f"actual value too close to zero at index {int(tiny[0])}; MAPE undefined"
        )
    # scale before dividing so round percentages come out exact
    return float(np.mean(100.0 * np.abs(actual - predicted) / np.abs(actual)))


def evaluate(
    model: GruModel, test: WindowedDataset, scaler: ScalerParams | None = None, method: str = "model"
) -> EvalReport:
    """MSE on scaled targets; MAPE after inverse-scaling both sides to kW."""
    scaler = scaler if scaler is not None else test.scaler
    pred_scaled = model.forward(test.X)
    mse = mse_loss(pred_scaled, test.Y)
    actual_kw = inverse_scale_demand(test.Y, scaler)
    pred_kw = inverse_scale_demand(pred_scaled, scaler)
    return EvalReport(method=method, mape=mape(actual_kw, pred_kw), mse=mse, n_windows=len(test))


def _sorted_reports(reports: list[EvalReport]) -> list[EvalReport]:
    # MAPE ascending, failures last, name as the stable tie-break
    return sorted(
        reports,
        key=lambda r: (r.failed, r.mape if math.isfinite(r.mape) else math.inf, r.method),
    )


def comparison_table(reports: list[EvalReport]) -> str:
    """Aligned plain-text rendering, best method first."""
    if not reports:
        raise ValueError("at least one report required")
    rows = [("method", "mape_pct", "mse", "n_windows")]
    for r in _sorted_reports(reports):
        if r.failed:
            rows.append((r.method, "failed", r.error or "", str(r.n_windows)))
        else:
            rows.append((r.method, f"{r.mape:.4f}", f"{r.mse:.6g}", str(r.n_windows)))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def comparison_csv(reports: list[EvalReport]) -> str:
    if not reports:
        raise ValueError("at least one report required")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["method", "mape", "mse", "n_windows"])
    for r in _sorted_reports(reports):
        if r.failed:
            writer.writerow([r.method, "", "", r.n_windows])
        else:
            writer.writerow([r.method, repr(r.mape), repr(r.mse), r.n_windows])
    return buf.getvalue()
