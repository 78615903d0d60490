"""Hourly load/weather data: CSV ingestion, scaling, windowing, synthesis."""

from .loading import COLUMNS, RawRecord, WEATHER_COLUMNS, load_csv, write_csv
from .pipeline import (
    DEFAULT_FEATURES,
    HORIZON,
    INPUT_LEN,
    N_FEATURES,
    ScalerParams,
    WindowedDataset,
    build_datasets,
    chronological_split,
    fit_scaler,
    inverse_scale,
    inverse_scale_demand,
    make_windows,
    scale,
    scale_demand,
    select_features,
    split_counts,
)
from .synthetic import synthesize_load

__all__ = [
    "COLUMNS",
    "DEFAULT_FEATURES",
    "HORIZON",
    "INPUT_LEN",
    "N_FEATURES",
    "RawRecord",
    "ScalerParams",
    "WEATHER_COLUMNS",
    "WindowedDataset",
    "build_datasets",
    "chronological_split",
    "fit_scaler",
    "inverse_scale",
    "inverse_scale_demand",
    "load_csv",
    "make_windows",
    "scale",
    "scale_demand",
    "select_features",
    "split_counts",
    "synthesize_load",
    "write_csv",
]
