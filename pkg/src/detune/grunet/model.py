"""From-scratch GRU forecaster: sequence input -> GRU layer -> dense ReLU head.

Shape conventions (row vectors, batch first):
    x_t          (batch, input_size)
    h_t          (batch, hidden_size)
    input->hidden weights  (input_size, hidden_size), applied as x @ W
    hidden->hidden weights (hidden_size, hidden_size), applied as h @ U
    output head  (hidden_size, output_size), y = relu(h_T @ W_out + b_out)

Cell update, with sigmoid gates z (update) and r (reset) and a tanh
candidate state:

    z   = sigmoid(x @ W_z + h_prev @ U_z + b_z)
    r   = sigmoid(x @ W_r + h_prev @ U_r + b_r)
    cand = tanh(x @ W_h + (r * h_prev) @ U_h + b_h)
    h   = (1 - z) * h_prev + z * cand

so a saturated update gate (z -> 1) hands the state over to the candidate.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = [
    "relu",
    "sigmoid",
    "mse_loss",
    "GruModel",
    "gru_cell_forward",
    "forward",
    "predict_horizon",
    "save_weights",
    "load_weights",
]

PARAM_NAMES = ("w_z", "u_z", "b_z", "w_r", "u_r", "b_r", "w_h", "u_h", "b_h", "w_out", "b_out")


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, x)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # two-branch form avoids exp overflow for large negative inputs
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def mse_loss(pred: np.ndarray, target: np.ndarray) -> float:
    """Mean over all elements of the squared differences."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs target {target.shape}")
    diff = pred - target
    return float(np.mean(diff * diff))


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class GruModel:
    """Gate and head parameters for a single-layer GRU with a dense ReLU output.

    All arrays are float64; training-time code relies on that for gradient
    checks. Biases start at zero, weights Glorot-uniform from the given rng.
    """

    def __init__(
        self,
        input_size: int = 8,
        hidden_size: int = 64,
        output_size: int = 24,
        rng: np.random.Generator | None = None,
    ) -> None:
        if min(input_size, hidden_size, output_size) < 1:
            raise ValueError("all layer sizes must be >= 1")
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.output_size = output_size
        if rng is None:
            rng = np.random.default_rng(0)
        for gate in ("z", "r", "h"):
            setattr(self, f"w_{gate}", _glorot(rng, input_size, hidden_size))
            setattr(self, f"u_{gate}", _glorot(rng, hidden_size, hidden_size))
            setattr(self, f"b_{gate}", np.zeros(hidden_size))
        self.w_out = _glorot(rng, hidden_size, output_size)
        self.b_out = np.zeros(output_size)

    def params(self) -> dict[str, np.ndarray]:
        """Live views of every parameter array, keyed by PARAM_NAMES."""
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def cell(self, x_t: np.ndarray, h_prev: np.ndarray) -> np.ndarray:
        """One GRU step. Accepts single vectors or (batch, ...) stacks."""
        x_t = np.asarray(x_t, dtype=float)
        h_prev = np.asarray(h_prev, dtype=float)
        if x_t.shape[-1] != self.input_size:
            raise ValueError(f"expected input size {self.input_size}, got {x_t.shape[-1]}")
        if h_prev.shape[-1] != self.hidden_size:
            raise ValueError(f"expected hidden size {self.hidden_size}, got {h_prev.shape[-1]}")
        z = sigmoid(x_t @ self.w_z + h_prev @ self.u_z + self.b_z)
        r = sigmoid(x_t @ self.w_r + h_prev @ self.u_r + self.b_r)
        cand = np.tanh(x_t @ self.w_h + (r * h_prev) @ self.u_h + self.b_h)
        return (1.0 - z) * h_prev + z * cand

    def forward(self, windows: np.ndarray) -> np.ndarray:
        """Unroll over the window's timesteps from h=0 and apply the ReLU head.

        A single (steps, input_size) window yields an (output_size,) vector; a
        (n, steps, input_size) batch yields (n, output_size).
        """
        windows = np.asarray(windows, dtype=float)
        single = windows.ndim == 2
        if single:
            windows = windows[None, :, :]
        if windows.ndim != 3 or windows.shape[2] != self.input_size:
            raise ValueError(
                f"expected windows shaped (n, steps, {self.input_size}), got {windows.shape}"
            )
        n, steps, _ = windows.shape
        hid = self.hidden_size
        # stacked gate weights: one GEMM per side per step instead of three
        w_x = np.hstack((self.w_z, self.w_r, self.w_h))
        u_zr = np.hstack((self.u_z, self.u_r))
        b_zr = np.concatenate((self.b_z, self.b_r))
        h = np.zeros((n, hid))
        for t in range(steps):
            gx = windows[:, t, :] @ w_x
            gates = sigmoid(gx[:, : 2 * hid] + h @ u_zr + b_zr)
            z, r = gates[:, :hid], gates[:, hid:]
            cand = np.tanh(gx[:, 2 * hid :] + (r * h) @ self.u_h + self.b_h)
            h = (1.0 - z) * h + z * cand
        out = relu(h @ self.w_out + self.b_out)
        return out[0] if single else out


def gru_cell_forward(x_t: np.ndarray, h_prev: np.ndarray, model: GruModel) -> np.ndarray:
    return model.cell(x_t, h_prev)


def forward(window: np.ndarray, model: GruModel) -> np.ndarray:
    return model.forward(window)


def predict_horizon(model: GruModel, window: np.ndarray) -> np.ndarray:
    """Forecast the next `output_size` steps (scaled domain) from one window."""
    return model.forward(window)


def save_weights(model: GruModel, path: str | Path) -> Path:
    """Binary round-trip is bit-exact: arrays carry shape and dtype headers."""
    path = Path(path)
    arrays = {name: getattr(model, name) for name in PARAM_NAMES}
    np.savez(
        path,
        sizes=np.array([model.input_size, model.hidden_size, model.output_size]),
        **arrays,
    )
    return path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz")


def load_weights(path: str | Path) -> GruModel:
    with np.load(path) as data:
        sizes = data["sizes"]
        model = GruModel(int(sizes[0]), int(sizes[1]), int(sizes[2]))
        for name in PARAM_NAMES:
            setattr(model, name, data[name].astype(float))
    return model
