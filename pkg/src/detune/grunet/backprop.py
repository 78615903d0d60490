"""Exact gradients of the batch MSE through the unrolled GRU and ReLU head.

The forward pass caches every gate activation per timestep; the backward
pass walks the unroll in reverse, accumulating parameter gradients and
propagating the hidden-state gradient through the three paths it feeds
(carry-through, candidate recurrence, and both gate pre-activations).

The update/reset/candidate weight blocks are stacked into single matrices so
each timestep costs a handful of GEMMs; results are identical to the
per-gate formulation in GruModel.cell.
"""

from __future__ import annotations

import numpy as np

from .model import GruModel, PARAM_NAMES, relu, sigmoid

__all__ = ["forward_with_cache", "backward", "zero_gradients"]


def zero_gradients(model: GruModel) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(getattr(model, name)) for name in PARAM_NAMES}


def _stacked_weights(model: GruModel):
    w_x = np.hstack((model.w_z, model.w_r, model.w_h))  # (in, 3h)
    u_zr = np.hstack((model.u_z, model.u_r))  # (h, 2h)
    b_zr = np.concatenate((model.b_z, model.b_r))
    return w_x, u_zr, b_zr


def forward_with_cache(model: GruModel, windows: np.ndarray):
    """Batch forward pass returning the prediction plus per-step tensors for backward."""
    windows = np.asarray(windows, dtype=float)
    n, steps, _ = windows.shape
    hid = model.hidden_size
    w_x, u_zr, b_zr = _stacked_weights(model)

    h = np.zeros((n, hid))
    hs = [h]  # hs[t] = hidden state entering step t
    zs, rs, cands = [], [], []
    for t in range(steps):
        gx = windows[:, t, :] @ w_x
        a_zr = gx[:, : 2 * hid] + h @ u_zr + b_zr
        gates = sigmoid(a_zr)
        z, r = gates[:, :hid], gates[:, hid:]
        cand = np.tanh(gx[:, 2 * hid :] + (r * h) @ model.u_h + model.b_h)
        h = (1.0 - z) * h + z * cand
        zs.append(z)
        rs.append(r)
        cands.append(cand)
        hs.append(h)
    pre_out = h @ model.w_out + model.b_out
    pred = relu(pre_out)
    return pred, (windows, hs, zs, rs, cands, pre_out)


def backward(
    model: GruModel, windows: np.ndarray, targets: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    """Batch MSE loss and its gradient w.r.t. every parameter."""
    targets = np.asarray(targets, dtype=float)
    pred, cache = forward_with_cache(model, windows)
    if pred.shape != targets.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs targets {targets.shape}")
    windows, hs, zs, rs, cands, pre_out = cache
    n, steps, _ = windows.shape
    hid = model.hidden_size
    _, u_zr, _ = _stacked_weights(model)

    diff = pred - targets
    loss = float(np.mean(diff * diff))

    # fused accumulators, split into the per-gate dict at the end
    g_wx = np.zeros((model.input_size, 3 * hid))
    g_uzr = np.zeros((hid, 2 * hid))
    g_uh = np.zeros((hid, hid))
    g_b = np.zeros(3 * hid)

    d_pre_out = (2.0 / diff.size) * diff * (pre_out > 0)
    g_wout = hs[-1].T @ d_pre_out
    g_bout = d_pre_out.sum(axis=0)
    dh = d_pre_out @ model.w_out.T

    for t in range(steps - 1, -1, -1):
        x_t = windows[:, t, :]
        h_prev, z, r, cand = hs[t], zs[t], rs[t], cands[t]

        da_cand = (dh * z) * (1.0 - cand * cand)  # through tanh
        d_gated = da_cand @ model.u_h.T  # gradient w.r.t. r * h_prev
        da_z = (dh * (cand - h_prev)) * z * (1.0 - z)  # through sigmoid
        da_r = (d_gated * h_prev) * r * (1.0 - r)

        da_zr = np.hstack((da_z, da_r))
        da_all = np.hstack((da_zr, da_cand))
        g_wx += x_t.T @ da_all
        g_uzr += h_prev.T @ da_zr
        g_uh += (r * h_prev).T @ da_cand
        g_b += da_all.sum(axis=0)

        dh = dh * (1.0 - z) + d_gated * r + da_zr @ u_zr.T

    grads = {
        "w_z": g_wx[:, :hid],
        "w_r": g_wx[:, hid : 2 * hid],
        "w_h": g_wx[:, 2 * hid :],
        "u_z": g_uzr[:, :hid],
        "u_r": g_uzr[:, hid:],
        "u_h": g_uh,
        "b_z": g_b[:hid],
        "b_r": g_b[hid : 2 * hid],
        "b_h": g_b[2 * hid :],
        "w_out": g_wout,
        "b_out": g_bout,
    }
    return loss, grads
