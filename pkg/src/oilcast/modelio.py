"""JSON model files for all three model kinds.

Floats are serialized with Python's shortest round-trip representation,
so save followed by load reproduces every parameter bit for bit. Each
file carries a "kind" discriminator ("nn", "ridge", "arima") and may
carry a "normalization" block (column name -> [min, max]) so a model
trained on rescaled inputs can be applied to raw CSV data later.
"""

import json

import numpy as np

from .arima import ArimaModel, ArimaOrder
from .exceptions import OilcastError
from .ffnet import FFNetConfig, FFNetModel
from .ridge import RidgeModel


class UnknownModelKind(OilcastError):
    """The model file's kind discriminator is not recognized."""


def _nn_payload(model: FFNetModel) -> dict:
    cfg = model.config
    return {
        "kind": "nn",
        "config": {
            "input_dim": cfg.input_dim,
            "hidden_dim": cfg.hidden_dim,
            "learning_rate": cfg.learning_rate,
            "epochs": cfg.epochs,
            "alpha": cfg.alpha,
            "seed": cfg.seed,
            "batch_mode": cfg.batch_mode,
        },
        "w1": model.w1.tolist(),
        "b1": model.b1.tolist(),
        "w2": model.w2.tolist(),
        "b2": model.b2.tolist(),
        "w3": model.w3.tolist(),
        "b3": model.b3,
        "train_loss_history": list(model.train_loss_history),
    }


def _nn_from_payload(payload: dict) -> FFNetModel:
    cfg = FFNetConfig(**payload["config"])
    return FFNetModel(
        config=cfg,
        w1=np.asarray(payload["w1"], dtype=float),
        b1=np.asarray(payload["b1"], dtype=float),
        w2=np.asarray(payload["w2"], dtype=float),
        b2=np.asarray(payload["b2"], dtype=float),
        w3=np.asarray(payload["w3"], dtype=float),
        b3=float(payload["b3"]),
        train_loss_history=tuple(payload.get("train_loss_history", ())),
    )


def _ridge_payload(model: RidgeModel) -> dict:
    return {
        "kind": "ridge",
        "lambda": model.lam,
        "beta": model.beta.tolist(),
    }


def _ridge_from_payload(payload: dict) -> RidgeModel:
    return RidgeModel(
        lam=float(payload["lambda"]),
        beta=np.asarray(payload["beta"], dtype=float),
    )


def _arima_payload(model: ArimaModel) -> dict:
    return {
        "kind": "arima",
        "order": list(model.order.as_tuple()),
        "phi": model.phi.tolist(),
        "theta": model.theta.tolist(),
        "drift": model.drift,
        "css": model.css,
        "anchors": {
            "last_values": model.last_values.tolist(),
            "last_residuals": model.last_residuals.tolist(),
        },
        "residuals": model.residuals.tolist(),
        "ar_near_unit_root": model.ar_near_unit_root,
        "ma_near_unit_root": model.ma_near_unit_root,
    }


def _arima_from_payload(payload: dict) -> ArimaModel:
    anchors = payload.get("anchors", {})
    return ArimaModel(
        order=ArimaOrder(*payload["order"]),
        phi=np.asarray(payload["phi"], dtype=float),
        theta=np.asarray(payload["theta"], dtype=float),
        drift=float(payload["drift"]),
        residuals=np.asarray(payload.get("residuals", []), dtype=float),
        css=float(payload["css"]),
        last_values=np.asarray(anchors.get("last_values", []), dtype=float),
        last_residuals=np.asarray(
            anchors.get("last_residuals", []), dtype=float
        ),
        ar_near_unit_root=bool(payload.get("ar_near_unit_root", False)),
        ma_near_unit_root=bool(payload.get("ma_near_unit_root", False)),
    )


def save_model(model, path, normalization: dict | None = None) -> None:
    """Write a model file; normalization maps column name -> [min, max]."""
    if isinstance(model, FFNetModel):
        payload = _nn_payload(model)
    elif isinstance(model, RidgeModel):
        payload = _ridge_payload(model)
    elif isinstance(model, ArimaModel):
        payload = _arima_payload(model)
    else:
        raise UnknownModelKind(f"cannot serialize {type(model).__name__}")
    if normalization is not None:
        payload["normalization"] = {
            name: [float(lo), float(hi)]
            for name, (lo, hi) in normalization.items()
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_model(path):
    """Read a model file; returns (model, normalization or None)."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    kind = payload.get("kind")
    if kind == "nn":
        model = _nn_from_payload(payload)
    elif kind == "ridge":
        model = _ridge_from_payload(payload)
    elif kind == "arima":
        model = _arima_from_payload(payload)
    else:
        raise UnknownModelKind(f"unknown model kind {kind!r}")
    normalization = payload.get("normalization")
    if normalization is not None:
        normalization = {
            name: (float(lo), float(hi))
            for name, (lo, hi) in normalization.items()
        }
    return model, normalization
