"""Tests for the stable logistic loss, probabilities, and exact gradients."""

import math

import numpy as np
import pytest

from projlogit.model import (
    ModelParams,
    load_model,
    loss_and_grad,
    predict_proba,
    save_model,
    sigmoid,
)
from projlogit.oracle import finite_diff_grad

from conftest import dense_matrix, random_dataset, random_params


class TestSigmoid:
    def test_zero(self):
        assert sigmoid(0.0) == 0.5

    def test_saturation_without_overflow(self):
        with np.errstate(over="raise"):
            assert sigmoid(1000.0) == 1.0
            assert sigmoid(-1000.0) == pytest.approx(0.0, abs=1e-300)
            assert sigmoid(0.0 + np.finfo(float).max / 2) == 1.0

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        z = rng.uniform(-40, 40, size=1000)
        np.testing.assert_allclose(sigmoid(z) + sigmoid(-z), 1.0, rtol=0, atol=1e-15)

    def test_scalar_in_float_out(self):
        assert isinstance(sigmoid(1.3), float)
        assert isinstance(sigmoid(np.float64(1.3)), float)
        assert sigmoid(np.array([0.0, 1000.0])).shape == (2,)


class TestPredictProba:
    def test_zero_params_give_half(self):
        ds = random_dataset(0, n=8, d=4)
        probs = predict_proba(ds, ModelParams.zeros(4))
        np.testing.assert_array_equal(probs, np.full(8, 0.5))

    def test_large_bias_saturates(self):
        ds = random_dataset(1, n=6, d=3)
        probs = predict_proba(ds, ModelParams(np.zeros(3), 500.0))
        np.testing.assert_array_equal(probs, np.ones(6))

    def test_matches_scalar_evaluation(self):
        ds = random_dataset(2, n=3, d=4)
        params = random_params(3, 4)
        X = dense_matrix(ds)
        probs = predict_proba(ds, params)
        for i in range(3):
            z = float(X[i] @ params.w + params.b)
            expected = 1.0 / (1.0 + math.exp(-z))
            assert abs(probs[i] - expected) <= 1e-15

    def test_dimension_mismatch(self):
        ds = random_dataset(2, n=3, d=4)
        with pytest.raises(ValueError):
            predict_proba(ds, ModelParams.zeros(5))


class TestLossAndGrad:
    def test_zero_params_balanced_labels_gives_log_two(self):
        ds = random_dataset(4, n=10, d=3)
        labels = np.array([0, 1] * 5, dtype=np.int8)
        ds = type(ds)(ds.n_samples, ds.n_features, ds.row_offsets, ds.col_indices,
                      ds.values, labels)
        g, obj = loss_and_grad(ds, ModelParams.zeros(3), 0.0)
        assert g.loss == pytest.approx(math.log(2.0), abs=1e-15)
        assert obj == g.loss

    def test_grad_b_closed_form_at_origin(self):
        ds = random_dataset(5, n=11, d=4)
        g, _ = loss_and_grad(ds, ModelParams.zeros(4), 1.0)
        assert g.grad_b == pytest.approx(float(np.mean(0.5 - ds.labels)), abs=1e-15)

    def test_objective_adds_penalty(self):
        ds = random_dataset(6, n=9, d=5)
        params = random_params(7, 5)
        g, obj = loss_and_grad(ds, params, 0.3)
        assert obj == pytest.approx(g.loss + 0.3 * np.abs(params.w).sum(), rel=1e-15)

    def test_gradient_matches_finite_differences(self):
        ds = random_dataset(8, n=6, d=4)
        params = random_params(9, 4)
        g, _ = loss_and_grad(ds, params, 0.0)
        fd = finite_diff_grad(ds, params, h=1e-6)
        denom = 1.0 + max(np.abs(g.grad_w).max(), abs(g.grad_b))
        assert np.abs(g.grad_w - fd.grad_w).max() / denom < 1e-5
        assert abs(g.grad_b - fd.grad_b) / denom < 1e-5

    def test_gradient_property_batch(self):
        for seed in range(10):
            rng = np.random.default_rng(1000 + seed)
            ds = random_dataset(seed, n=int(rng.integers(2, 20)), d=int(rng.integers(1, 10)))
            params = random_params(seed + 1, ds.n_features)
            g, _ = loss_and_grad(ds, params, 0.0)
            fd = finite_diff_grad(ds, params, h=1e-6)
            err = max(np.abs(g.grad_w - fd.grad_w).max(), abs(g.grad_b - fd.grad_b))
            assert err / (1.0 + max(np.abs(g.grad_w).max(), abs(g.grad_b))) < 1e-5

    def test_convexity_probe(self):
        ds = random_dataset(10, n=12, d=6)
        for seed in range(20):
            p1 = random_params(2 * seed, 6, scale=2.0)
            p2 = random_params(2 * seed + 1, 6, scale=2.0)
            mid = ModelParams((p1.w + p2.w) / 2.0, (p1.b + p2.b) / 2.0)
            l1 = loss_and_grad(ds, p1, 0.0)[0].loss
            l2 = loss_and_grad(ds, p2, 0.0)[0].loss
            lm = loss_and_grad(ds, mid, 0.0)[0].loss
            assert lm <= (l1 + l2) / 2.0 + 1e-12

    def test_loss_finite_at_huge_margins(self):
        # margins of +-1e4 overflow a naive exp
        ds = random_dataset(11, n=10, d=3, scale=1.0)
        params = ModelParams(np.full(3, 1e4), 1e4)
        with np.errstate(over="raise"):
            g, obj = loss_and_grad(ds, params, 0.0)
        assert math.isfinite(g.loss) and math.isfinite(obj)
        assert g.loss >= 0.0

    def test_negative_lambda_rejected(self):
        ds = random_dataset(12, n=4, d=2)
        with pytest.raises(ValueError):
            loss_and_grad(ds, ModelParams.zeros(2), -0.1)


class TestModelSerialization:
    def test_bit_exact_round_trip(self, tmp_path):
        params = random_params(13, 7, scale=3.3)
        meta = {"iterations": 42, "terminated": "converged"}
        path = tmp_path / "model.json"
        save_model(path, params, 0.125, meta)
        loaded, lam, solver_meta = load_model(path)
        assert lam == 0.125
        assert loaded.b == params.b
        np.testing.assert_array_equal(loaded.w, params.w)
        assert solver_meta["iterations"] == 42

    def test_rejects_foreign_json(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text('{"hello": 1}')
        with pytest.raises(ValueError):
            load_model(path)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            ModelParams(np.array([1.0, np.nan]), 0.0)
        with pytest.raises(ValueError):
            ModelParams(np.zeros((2, 2)), 0.0)
