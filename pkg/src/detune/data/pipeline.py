"""Feature selection, standard scaling, sliding windows, chronological splits.

The canonical path is build_datasets(): window the raw series, partition the
windows chronologically, fit the scaler on the rows covered by the training
windows only, then scale every split with those statistics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

import numpy as np

from ..errors import ConfigurationError, DataError, LeakageError
from .loading import RawRecord, COLUMNS

__all__ = [
    "DEFAULT_FEATURES",
    "N_FEATURES",
    "INPUT_LEN",
    "HORIZON",
    "ScalerParams",
    "WindowedDataset",
    "select_features",
    "fit_scaler",
    "scale",
    "inverse_scale",
    "scale_demand",
    "inverse_scale_demand",
    "make_windows",
    "split_counts",
    "chronological_split",
    "build_datasets",
]

N_FEATURES = 8
INPUT_LEN = 3
HORIZON = 24

# Which 8 of the available columns feed the model. Demand must be one of
# them; the rest are a documented default, overridable through RunConfig.
DEFAULT_FEATURES = (
    "ontario_demand",
    "temperature",
    "dew_point",
    "relative_humidity",
    "wind_speed",
    "hour_of_day",
    "day_of_week",
    "state_holiday",
)

_SELECTABLE = tuple(c for c in COLUMNS if c not in ("date", "time"))


def select_features(
    records: Sequence[RawRecord], feature_names: Sequence[str] = DEFAULT_FEATURES
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Build the [T, 8] feature matrix, demand series, and hour-epoch timestamps."""
    names = tuple(feature_names)
    unknown = [n for n in names if n not in _SELECTABLE]
    if unknown:
        raise ConfigurationError(
            f"unknown feature column(s): {', '.join(unknown)}; choose from {_SELECTABLE}"
        )
    if len(names) != N_FEATURES:
        raise ConfigurationError(
            f"exactly {N_FEATURES} features required to match the model, got {len(names)}"
        )
    if "ontario_demand" not in names:
        raise ConfigurationError("ontario_demand must be among the selected features")

    features = np.array(
        [[float(getattr(r, name)) for name in names] for r in records], dtype=float
    )
    demand = np.array([r.ontario_demand for r in records], dtype=float)
    # naive-datetime arithmetic keeps hour offsets timezone-free
    epoch = datetime(1970, 1, 1)
    hours = np.array(
        [(r.timestamp - epoch).total_seconds() / 3600.0 for r in records], dtype=float
    )
    return features, demand, hours


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature standardization statistics plus the demand target's own."""

    mean: np.ndarray
    std: np.ndarray
    target_mean: float
    target_std: float


def fit_scaler(features: np.ndarray, demand: np.ndarray, split: str = "train") -> ScalerParams:
    """Fit standardization statistics; only legal on training-tagged data."""
    if split != "train":
        raise LeakageError(f"scaler must be fit on the train split, not {split!r}")
    features = np.asarray(features, dtype=float)
    demand = np.asarray(demand, dtype=float)
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    constant = std <= 1e-12
    if np.any(constant):
        warnings.warn(
            f"constant feature column(s) at index {np.flatnonzero(constant).tolist()}; "
            "std forced to 1",
            stacklevel=2,
        )
        std = np.where(constant, 1.0, std)
    t_mean = float(demand.mean())
    t_std = float(demand.std())
    if t_std <= 1e-12:
        warnings.warn("constant demand series; std forced to 1", stacklevel=2)
        t_std = 1.0
    return ScalerParams(mean=mean, std=std, target_mean=t_mean, target_std=t_std)


def scale(features: np.ndarray, params: ScalerParams) -> np.ndarray:
    return (np.asarray(features, dtype=float) - params.mean) / params.std


def inverse_scale(scaled: np.ndarray, params: ScalerParams) -> np.ndarray:
    return np.asarray(scaled, dtype=float) * params.std + params.mean


def scale_demand(demand: np.ndarray, params: ScalerParams) -> np.ndarray:
    return (np.asarray(demand, dtype=float) - params.target_mean) / params.target_std


def inverse_scale_demand(scaled: np.ndarray, params: ScalerParams) -> np.ndarray:
    return np.asarray(scaled, dtype=float) * params.target_std + params.target_mean


@dataclass(frozen=True)
class WindowedDataset:
    """Scaled input windows [n, input_len, 8] and targets [n, horizon].

    origins[i] is the row index of window i's first target hour, so the
    window's inputs are rows origins[i]-input_len .. origins[i]-1. Arrays are
    frozen read-only: datasets are shared across concurrent trainings.
    """

    X: np.ndarray
    Y: np.ndarray
    split: str
    scaler: ScalerParams
    origins: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.X, self.Y, self.origins):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.X)


def _window_block(
    features: np.ndarray, demand: np.ndarray, start: int, stop: int, input_len: int, horizon: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    length = stop - start
    n = length - input_len - horizon + 1
    if n <= 0:
        return None
    f = features[start:stop]
    d = demand[start:stop]
    x = np.stack([f[i : i + n] for i in range(input_len)], axis=1)
    y = np.stack([d[input_len + i : input_len + i + n] for i in range(horizon)], axis=1)
    origins = np.arange(start + input_len, start + input_len + n)
    return x, y, origins


def make_windows(
    features: np.ndarray,
    demand: np.ndarray,
    input_len: int = INPUT_LEN,
    horizon: int = HORIZON,
    timestamps: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Slide (input_len, horizon) windows over the series.

    Window i's input rows immediately precede its horizon target rows. When
    hour-epoch timestamps are given, the series is cut at every non-hourly
    step and no window spans a cut.
    """
    features = np.asarray(features, dtype=float)
    demand = np.asarray(demand, dtype=float)
    t = len(features)
    minimum = input_len + horizon
    if t < minimum:
        raise DataError(f"need at least {minimum} rows for one window, got {t}")

    if timestamps is None:
        boundaries = [0, t]
    else:
        steps = np.diff(np.asarray(timestamps, dtype=float))
        cuts = np.flatnonzero(~np.isclose(steps, 1.0)) + 1
        boundaries = [0, *cuts.tolist(), t]

    xs, ys, origins = [], [], []
    for start, stop in zip(boundaries[:-1], boundaries[1:]):
        block = _window_block(features, demand, start, stop, input_len, horizon)
        if block is not None:
            xs.append(block[0])
            ys.append(block[1])
            origins.append(block[2])
    if not xs:
        raise DataError(
            f"no contiguous run of {minimum} hourly rows; the series is too fragmented"
        )
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(origins)


def split_counts(n: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    if len(ratios) != 3 or any(r < 0 for r in ratios):
        raise ConfigurationError(f"ratios must be three non-negative numbers, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigurationError(f"ratios must sum to 1, got {sum(ratios)}")
    n_train = int(n * ratios[0])
    n_val = int(n * ratios[1])
    n_test = n - n_train - n_val
    if min(n_train, n_val, n_test) < 1:
        raise ConfigurationError(
            f"degenerate split: {n} windows at ratios {ratios} "
            f"gives sizes {(n_train, n_val, n_test)}"
        )
    return n_train, n_val, n_test


def chronological_split(
    x: np.ndarray,
    y: np.ndarray,
    origins: np.ndarray,
    ratios: tuple[float, float, float],
    scaler: ScalerParams,
) -> tuple[WindowedDataset, WindowedDataset, WindowedDataset]:
    """Partition windows in time order; no shuffling across boundaries."""
    n_train, n_val, _ = split_counts(len(x), ratios)
    pieces = (
        (slice(0, n_train), "train"),
        (slice(n_train, n_train + n_val), "val"),
        (slice(n_train + n_val, len(x)), "test"),
    )
    return tuple(
        WindowedDataset(x[s].copy(), y[s].copy(), tag, scaler, origins[s].copy())
        for s, tag in pieces
    )


def build_datasets(
    features: np.ndarray,
    demand: np.ndarray,
    timestamps: np.ndarray | None = None,
    ratios: tuple[float, float, float] = (0.70, 0.15, 0.15),
    input_len: int = INPUT_LEN,
    horizon: int = HORIZON,
) -> tuple[WindowedDataset, WindowedDataset, WindowedDataset]:
    """Window, split, and scale: statistics come only from rows the training
    windows cover (inputs and targets), never from val/test rows."""
    x, y, origins = make_windows(features, demand, input_len, horizon, timestamps)
    n_train, _, _ = split_counts(len(x), ratios)
    train_row_stop = int(origins[n_train - 1]) + horizon
    scaler = fit_scaler(features[:train_row_stop], demand[:train_row_stop], split="train")
    x_scaled = (x - scaler.mean) / scaler.std
    y_scaled = (y - scaler.target_mean) / scaler.target_std
    return chronological_split(x_scaled, y_scaled, origins, ratios, scaler)
