"""From-scratch GRU forecaster with exact BPTT gradients and Adam training."""

from .backprop import backward, forward_with_cache, zero_gradients
from .model import (
    GruModel,
    PARAM_NAMES,
    forward,
    gru_cell_forward,
    load_weights,
    mse_loss,
    predict_horizon,
    relu,
    save_weights,
    sigmoid,
)
from .training import (
    Adam,
    EpochStats,
    TrainReport,
    TrialConfig,
    clip_gradients,
    objective_from_pipeline,
    train,
    write_report_csv,
)

__all__ = [
    "Adam",
    "EpochStats",
    "GruModel",
    "PARAM_NAMES",
    "TrainReport",
    "TrialConfig",
    "backward",
    "clip_gradients",
    "forward",
    "forward_with_cache",
    "gru_cell_forward",
    "load_weights",
    "mse_loss",
    "objective_from_pipeline",
    "predict_horizon",
    "relu",
    "save_weights",
    "sigmoid",
    "train",
    "write_report_csv",
    "zero_gradients",
]
