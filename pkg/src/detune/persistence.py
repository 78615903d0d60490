"""Self-contained forecaster bundles (weights + scaler + feature list) and
windowed-dataset caches. Round-trips are bit-exact."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data.pipeline import ScalerParams, WindowedDataset
from .grunet.model import GruModel, PARAM_NAMES

__all__ = [
    "ForecasterBundle",
    "save_forecaster",
    "load_forecaster",
    "save_dataset",
    "load_dataset",
]


@dataclass
class ForecasterBundle:
    model: GruModel
    scaler: ScalerParams
    feature_names: tuple[str, ...]
    input_len: int
    horizon: int


def save_forecaster(bundle: ForecasterBundle, path: str | Path) -> Path:
    path = Path(path)
    model = bundle.model
    arrays = {name: getattr(model, name) for name in PARAM_NAMES}
    np.savez(
        path,
        sizes=np.array([model.input_size, model.hidden_size, model.output_size]),
        scaler_mean=bundle.scaler.mean,
        scaler_std=bundle.scaler.std,
        scaler_target=np.array([bundle.scaler.target_mean, bundle.scaler.target_std]),
        feature_names=np.array(bundle.feature_names, dtype=str),
        geometry=np.array([bundle.input_len, bundle.horizon]),
        **arrays,
    )
    return path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz")


def save_dataset(dataset: WindowedDataset, path: str | Path) -> Path:
    """Cache a windowed split (tensors + scaler) between tuning runs."""
    path = Path(path)
    np.savez(
        path,
        X=dataset.X,
        Y=dataset.Y,
        origins=dataset.origins,
        split=np.array(dataset.split, dtype=str),
        scaler_mean=dataset.scaler.mean,
        scaler_std=dataset.scaler.std,
        scaler_target=np.array([dataset.scaler.target_mean, dataset.scaler.target_std]),
    )
    return path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz")


def load_dataset(path: str | Path) -> WindowedDataset:
    with np.load(path) as data:
        target = data["scaler_target"]
        scaler = ScalerParams(
            mean=data["scaler_mean"].astype(float),
            std=data["scaler_std"].astype(float),
            target_mean=float(target[0]),
            target_std=float(target[1]),
        )
        return WindowedDataset(
            X=data["X"].astype(float),
            Y=data["Y"].astype(float),
            split=str(data["split"]),
            scaler=scaler,
            origins=data["origins"].copy(),
        )


def load_forecaster(path: str | Path) -> ForecasterBundle:
    with np.load(path) as data:
        sizes = data["sizes"]
        model = GruModel(int(sizes[0]), int(sizes[1]), int(sizes[2]))
        for name in PARAM_NAMES:
            setattr(model, name, data[name].astype(float))
        target = data["scaler_target"]
        scaler = ScalerParams(
            mean=data["scaler_mean"].astype(float),
            std=data["scaler_std"].astype(float),
            target_mean=float(target[0]),
            target_std=float(target[1]),
        )
        geometry = data["geometry"]
        return ForecasterBundle(
            model=model,
            scaler=scaler,
            feature_names=tuple(str(n) for n in data["feature_names"]),
            input_len=int(geometry[0]),
            horizon=int(geometry[1]),
        )
