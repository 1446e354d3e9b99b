"""Model file round trips."""

import json

import numpy as np
import pytest

from oilcast import (
    ArimaOrder,
    FFNetConfig,
    RidgeModel,
    arima_fit,
    init_model,
    load_model,
    ridge_fit,
    save_model,
    train,
)
from oilcast.modelio import UnknownModelKind


def small_xy(seed=0, n=40, k=4):
    rng = np.random.default_rng(seed)
    x = rng.uniform(size=(n, k))
    y = x @ rng.normal(size=k) + 0.01 * rng.normal(size=n)
    return x, y


class TestNnRoundTrip:
    def test_bit_exact(self, tmp_path):
        x, y = small_xy(seed=1)
        cfg = FFNetConfig(
            input_dim=4, hidden_dim=6, learning_rate=0.01, epochs=5, seed=9
        )
        model = train(init_model(cfg), x, y)
        path = tmp_path / "nn.json"
        save_model(model, path)
        loaded, norm = load_model(path)
        assert norm is None
        assert np.array_equal(loaded.w1, model.w1)
        assert np.array_equal(loaded.b1, model.b1)
        assert np.array_equal(loaded.w2, model.w2)
        assert np.array_equal(loaded.b2, model.b2)
        assert np.array_equal(loaded.w3, model.w3)
        assert loaded.b3 == model.b3
        assert loaded.train_loss_history == model.train_loss_history
        assert loaded.config == cfg

    def test_normalization_block(self, tmp_path):
        x, y = small_xy(seed=2)
        cfg = FFNetConfig(
            input_dim=4, hidden_dim=3, learning_rate=0.01, epochs=1, seed=0
        )
        model = train(init_model(cfg), x, y)
        path = tmp_path / "nn.json"
        norm_in = {"a": (0.25, 9.75), "b": (-1.5, 3.0)}
        save_model(model, path, normalization=norm_in)
        _, norm_out = load_model(path)
        assert norm_out == norm_in


class TestRidgeRoundTrip:
    def test_bit_exact(self, tmp_path):
        x, y = small_xy(seed=3)
        model = ridge_fit(x, y, 0.75)
        path = tmp_path / "ridge.json"
        save_model(model, path)
        loaded, _ = load_model(path)
        assert loaded.lam == model.lam
        assert np.array_equal(loaded.beta, model.beta)


class TestArimaRoundTrip:
    def test_bit_exact(self, tmp_path):
        rng = np.random.default_rng(4)
        s = rng.normal(size=220).cumsum()
        model = arima_fit(s, ArimaOrder(1, 1, 2))
        path = tmp_path / "arima.json"
        save_model(model, path)
        loaded, _ = load_model(path)
        assert loaded.order.as_tuple() == (1, 1, 2)
        assert np.array_equal(loaded.phi, model.phi)
        assert np.array_equal(loaded.theta, model.theta)
        assert loaded.drift == model.drift
        assert loaded.css == model.css
        assert np.array_equal(loaded.last_values, model.last_values)
        assert np.array_equal(loaded.last_residuals, model.last_residuals)
        assert np.array_equal(loaded.residuals, model.residuals)
        assert loaded.ar_near_unit_root == model.ar_near_unit_root
        assert loaded.ma_near_unit_root == model.ma_near_unit_root


class TestErrors:
    def test_unknown_kind_on_load(self, tmp_path):
        path = tmp_path / "weird.json"
        path.write_text(json.dumps({"kind": "gbm"}))
        with pytest.raises(UnknownModelKind):
            load_model(path)

    def test_unknown_type_on_save(self, tmp_path):
        with pytest.raises(UnknownModelKind):
            save_model({"not": "a model"}, tmp_path / "x.json")

    def test_kind_discriminators(self, tmp_path):
        x, y = small_xy(seed=5)
        path = tmp_path / "m.json"
        save_model(RidgeModel(lam=0.5, beta=np.array([1.0])), path)
        assert json.loads(path.read_text())["kind"] == "ridge"
