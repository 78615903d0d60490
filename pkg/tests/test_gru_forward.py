import math

import numpy as np
import pytest

from detune.grunet import (
    GruModel,
    forward,
    gru_cell_forward,
    load_weights,
    mse_loss,
    predict_horizon,
    relu,
    save_weights,
)
from detune.grunet.backprop import forward_with_cache


class TestRelu:
    def test_elementwise_max(self):
        np.testing.assert_array_equal(relu(np.array([-3.0, 0.0, 2.0])), [0.0, 0.0, 2.0])

    def test_zero_fixed_point(self):
        np.testing.assert_array_equal(relu(np.zeros(5)), np.zeros(5))

    def test_identity_on_positive(self, rng):
        x = np.abs(rng.normal(size=10)) + 0.1
        np.testing.assert_array_equal(relu(x), x)


class TestMseLoss:
    def test_zero_residual(self, rng):
        x = rng.normal(size=(4, 6))
        assert mse_loss(x, x) == 0.0

    def test_hand_value(self):
        assert mse_loss(np.array([1.0, 1.0]), np.array([0.0, 2.0])) == 1.0

    def test_quadratic_homogeneity(self, rng):
        pred = rng.normal(size=(3, 5))
        target = rng.normal(size=(3, 5))
        base = mse_loss(pred, target)
        doubled = mse_loss(target + 2.0 * (pred - target), target)
        assert doubled == pytest.approx(4.0 * base, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mse_loss(np.zeros((2, 3)), np.zeros((3, 2)))


def zero_model(input_size=8, hidden=64, output=24):
    model = GruModel(input_size, hidden, output)
    for name in ("w_z", "u_z", "w_r", "u_r", "w_h", "u_h", "w_out"):
        getattr(model, name)[...] = 0.0
    return model


class TestGruCell:
    def test_zero_weights_halve_previous_state(self, rng):
        model = zero_model(3, 5, 2)
        h_prev = rng.normal(size=5)
        x = rng.normal(size=3)
        h = gru_cell_forward(x, h_prev, model)
        # sigmoid(0)=0.5 gates, tanh(0)=0 candidate: h = (1-z)*h_prev
        np.testing.assert_allclose(h, 0.5 * h_prev, rtol=1e-15)

    def test_zero_state_zero_weights_stay_zero(self, rng):
        model = zero_model(3, 5, 2)
        h = gru_cell_forward(rng.normal(size=3), np.zeros(5), model)
        np.testing.assert_array_equal(h, np.zeros(5))

    def test_saturated_update_gate_hands_state_to_candidate(self, rng):
        model = zero_model(3, 5, 2)
        model.b_z[...] = 60.0  # z -> 1
        model.b_h[...] = 0.7  # candidate = tanh(0.7)
        h_prev = rng.normal(size=5) + 3.0
        h = gru_cell_forward(rng.normal(size=3), h_prev, model)
        np.testing.assert_allclose(h, math.tanh(0.7), rtol=1e-9)

    def test_gates_strictly_inside_unit_interval(self, rng):
        model = GruModel(4, 6, 3, rng=rng)
        h = np.zeros((1, 6))
        x = rng.normal(size=(1, 4)) * 10
        h_next = model.cell(x, h)
        # convex-combination update keeps the state bounded by the candidate range
        assert np.all(np.abs(h_next) < 1.0)

    def test_shape_contracts(self, rng):
        model = GruModel(4, 6, 3)
        with pytest.raises(ValueError):
            model.cell(np.zeros(5), np.zeros(6))
        with pytest.raises(ValueError):
            model.cell(np.zeros(4), np.zeros(7))


def scalar_reference_forward(model, window):
    """Independent unroll in pure python loops, straight from the cell equations."""

    def sig(v):
        return 1.0 / (1.0 + math.exp(-v))

    hid = model.hidden_size
    h = [0.0] * hid
    for t in range(window.shape[0]):
        x = window[t]
        z, r, cand = [0.0] * hid, [0.0] * hid, [0.0] * hid
        for j in range(hid):
            az = sum(x[i] * model.w_z[i, j] for i in range(len(x)))
            az += sum(h[k] * model.u_z[k, j] for k in range(hid)) + model.b_z[j]
            ar = sum(x[i] * model.w_r[i, j] for i in range(len(x)))
            ar += sum(h[k] * model.u_r[k, j] for k in range(hid)) + model.b_r[j]
            z[j], r[j] = sig(az), sig(ar)
        for j in range(hid):
            ah = sum(x[i] * model.w_h[i, j] for i in range(len(x)))
            ah += sum(r[k] * h[k] * model.u_h[k, j] for k in range(hid)) + model.b_h[j]
            cand[j] = math.tanh(ah)
        h = [(1.0 - z[j]) * h[j] + z[j] * cand[j] for j in range(hid)]
    out = []
    for o in range(model.output_size):
        v = sum(h[j] * model.w_out[j, o] for j in range(hid)) + model.b_out[o]
        out.append(max(0.0, v))
    return np.array(out)


class TestForward:
    def test_zero_model_zero_window_gives_zeros(self):
        model = zero_model()
        np.testing.assert_array_equal(forward(np.zeros((3, 8)), model), np.zeros(24))

    def test_output_non_negative_for_random_models(self, rng):
        for _ in range(20):
            model = GruModel(8, 12, 24, rng=rng)
            model.b_out[...] = rng.normal(size=24)
            window = rng.normal(size=(3, 8)) * 3
            assert np.all(forward(window, model) >= 0.0)

    def test_matches_independent_scalar_unroll(self, rng):
        model = GruModel(3, 2, 4, rng=rng)
        model.b_z[...] = rng.normal(size=2)
        model.b_r[...] = rng.normal(size=2)
        model.b_h[...] = rng.normal(size=2)
        model.b_out[...] = rng.normal(size=4)
        window = rng.normal(size=(3, 3))
        np.testing.assert_allclose(
            forward(window, model), scalar_reference_forward(model, window), rtol=1e-12
        )

    def test_batch_agrees_with_single(self, rng):
        model = GruModel(8, 10, 24, rng=rng)
        windows = rng.normal(size=(5, 3, 8))
        batch = model.forward(windows)
        for i in range(5):
            # atol covers ReLU zeros that differ by one ulp across BLAS kernels
            np.testing.assert_allclose(batch[i], model.forward(windows[i]), rtol=1e-12, atol=1e-12)

    def test_wrong_window_shape_rejected(self):
        model = GruModel(8, 10, 24)
        with pytest.raises(ValueError):
            model.forward(np.zeros((3, 7)))
        with pytest.raises(ValueError):
            model.forward(np.zeros((2, 3, 7)))

    def test_predict_horizon_is_forward(self, rng):
        model = GruModel(8, 10, 24, rng=rng)
        window = rng.normal(size=(3, 8))
        np.testing.assert_array_equal(predict_horizon(model, window), forward(window, model))

    def test_gate_activations_strictly_in_unit_interval(self, rng):
        for _ in range(10):
            model = GruModel(4, 6, 3, rng=rng)
            windows = rng.normal(size=(5, 3, 4)) * 4
            _, (_, hs, zs, rs, cands, _) = forward_with_cache(model, windows)
            for z, r in zip(zs, rs):
                assert np.all((z > 0.0) & (z < 1.0))
                assert np.all((r > 0.0) & (r < 1.0))
            # convex-combination update: each state bounded by its inputs
            for h_prev, h_next, cand in zip(hs[:-1], hs[1:], cands):
                bound = np.maximum(np.abs(h_prev), np.abs(cand)) + 1e-15
                assert np.all(np.abs(h_next) <= bound)


class TestWeightSerialization:
    def test_round_trip_bit_exact(self, rng, tmp_path):
        model = GruModel(8, 16, 24, rng=rng)
        path = save_weights(model, tmp_path / "weights.npz")
        loaded = load_weights(path)
        assert (loaded.input_size, loaded.hidden_size, loaded.output_size) == (8, 16, 24)
        for name in ("w_z", "u_z", "b_z", "w_r", "u_r", "b_r", "w_h", "u_h", "b_h", "w_out", "b_out"):
            np.testing.assert_array_equal(getattr(loaded, name), getattr(model, name))
