"""Feed-forward regression network trained by gradient descent.

Architecture: input -> hidden -> hidden -> scalar output. Both hidden
layers apply the exponential linear unit; the output is affine. The loss
is mean squared error and all gradients are exact analytic backprop (a
finite-difference check lives in the test suite). The canonical setup is
12 inputs and 12 units per hidden layer.

Training modes:

* ``per_sample`` (default): each epoch sweeps the rows in order, taking
  one gradient step per row on that row's squared error.
* ``full_batch``: each epoch takes a single step on the mean loss.

Weight initialization draws from a seeded splitmix64 stream, uniform on
[-r, r] with r = sqrt(6 / (fan_in + fan_out)), in a fixed order: w1 row
by row, then w2, then w3. Biases start at zero and consume no draws, so
a seed pins every weight bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import DimensionMismatch, DivergedToNonFinite
from .rng import SplitMix64
from .validation import as_matrix, as_vector, require_nonempty, require_same_length

BATCH_MODES = ("per_sample", "full_batch")


def elu(x, alpha: float = 1.0):
    """Exponential linear unit: x for x > 0, alpha*(exp(x)-1) otherwise."""
    arr = np.asarray(x, dtype=float)
    out = np.where(arr > 0, arr, alpha * np.expm1(np.minimum(arr, 0.0)))
    return float(out) if out.ndim == 0 else out


def elu_prime(x, alpha: float = 1.0):
    """Derivative of elu: 1 for x > 0, alpha*exp(x) otherwise."""
    arr = np.asarray(x, dtype=float)
    out = np.where(arr > 0, 1.0, alpha * np.exp(np.minimum(arr, 0.0)))
    return float(out) if out.ndim == 0 else out


def loss_mse(y_hat, y) -> float:
    """Mean squared error between predictions and targets."""
    y_hat = as_vector(y_hat, "y_hat")
    y = as_vector(y, "y")
    require_same_length(y_hat, y, "y_hat", "y")
    require_nonempty(y, "y")
    return float(np.mean((y_hat - y) ** 2))


@dataclass(frozen=True)
class FFNetConfig:
    """Hyperparameters; learning_rate 0 is degenerate but legal (it makes
    train a no-op, which some tests rely on)."""

    input_dim: int
    hidden_dim: int = 12
    learning_rate: float = 1e-4
    epochs: int = 100
    alpha: float = 1.0
    seed: int = 0
    batch_mode: str = "per_sample"

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be >= 1")
        if not self.learning_rate >= 0:
            raise ValueError("learning_rate must be >= 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.batch_mode not in BATCH_MODES:
            raise ValueError(
                f"batch_mode must be one of {BATCH_MODES}, "
                f"got {self.batch_mode!r}"
            )


@dataclass(frozen=True, eq=False)
class FFNetModel:
    """Immutable weight snapshot; train() returns a new one."""

    config: FFNetConfig
    w1: np.ndarray = field(repr=False)
    b1: np.ndarray = field(repr=False)
    w2: np.ndarray = field(repr=False)
    b2: np.ndarray = field(repr=False)
    w3: np.ndarray = field(repr=False)
    b3: float
    train_loss_history: tuple = ()

    def weight_arrays(self) -> dict:
        return {
            "w1": self.w1,
            "b1": self.b1,
            "w2": self.w2,
            "b2": self.b2,
            "w3": self.w3,
            "b3": np.asarray([self.b3]),
        }


@dataclass(frozen=True, eq=False)
class Gradients:
    """Analytic gradient of the mean MSE, one field per parameter."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: float


def init_model(config: FFNetConfig) -> FFNetModel:
    """Seeded Glorot-uniform weights, zero biases.

    Draw order is fixed (w1 row-major, then w2, then w3) so a given seed
    reproduces the exact same parameters on any platform.
    """
    rng = SplitMix64(config.seed)

    def draw_matrix(fan_in: int, fan_out: int, shape) -> np.ndarray:
        r = np.sqrt(6.0 / (fan_in + fan_out))
        flat = [rng.next_uniform(-r, r) for _ in range(int(np.prod(shape)))]
        return np.asarray(flat, dtype=float).reshape(shape)

    d, hdim = config.input_dim, config.hidden_dim
    w1 = draw_matrix(d, hdim, (d, hdim))
    w2 = draw_matrix(hdim, hdim, (hdim, hdim))
    w3 = draw_matrix(hdim, 1, (hdim,))
    return FFNetModel(
        config=config,
        w1=w1,
        b1=np.zeros(hdim),
        w2=w2,
        b2=np.zeros(hdim),
        w3=w3,
        b3=0.0,
        train_loss_history=(),
    )


def _forward_batch(model_or_weights, x: np.ndarray):
    """All layer pre-activations and activations for a 2-D batch."""
    m = model_or_weights
    z1 = x @ m.w1 + m.b1
    a1 = elu(z1, m.config.alpha)
    z2 = a1 @ m.w2 + m.b2
    a2 = elu(z2, m.config.alpha)
    y_hat = a2 @ m.w3 + m.b3
    return y_hat, z1, a1, z2, a2


def _dim_error(got: int, model: FFNetModel):
    raise DimensionMismatch(
        f"input has {got} features, model expects {model.config.input_dim}"
    )


def forward(model: FFNetModel, x_row):
    """Single-row forward pass: (y_hat, activations cache)."""
    x = as_vector(x_row, "x_row")
    if x.size != model.config.input_dim:
        _dim_error(x.size, model)
    y_hat, z1, a1, z2, a2 = _forward_batch(model, x[None, :])
    cache = {"z1": z1[0], "a1": a1[0], "z2": z2[0], "a2": a2[0]}
    return float(y_hat[0]), cache


def predict(model: FFNetModel, x) -> np.ndarray:
    """Predictions for each row of x (empty x gives an empty vector)."""
    x = as_matrix(x, "x")
    if x.shape[0] == 0:
        return np.empty(0)
    if x.shape[1] != model.config.input_dim:
        _dim_error(x.shape[1], model)
    y_hat, *_ = _forward_batch(model, x)
    return y_hat


def gradients(model: FFNetModel, x, y) -> Gradients:
    """Exact gradient of the mean MSE over the batch (x, y)."""
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    require_same_length(x, y, "x", "y")
    require_nonempty(y, "y")
    if x.shape[1] != model.config.input_dim:
        _dim_error(x.shape[1], model)

    alpha = model.config.alpha
    n = y.size
    y_hat, z1, a1, z2, a2 = _forward_batch(model, x)

    delta = 2.0 * (y_hat - y) / n
    g_b3 = float(delta.sum())
    g_w3 = a2.T @ delta
    dz2 = np.outer(delta, model.w3) * elu_prime(z2, alpha)
    g_b2 = dz2.sum(axis=0)
    g_w2 = a1.T @ dz2
    dz1 = (dz2 @ model.w2.T) * elu_prime(z1, alpha)
    g_b1 = dz1.sum(axis=0)
    g_w1 = x.T @ dz1
    return Gradients(w1=g_w1, b1=g_b1, w2=g_w2, b2=g_b2, w3=g_w3, b3=g_b3)


def train(model: FFNetModel, x, y) -> FFNetModel:
    """Gradient-descent training; returns a new model with loss history.

    Runs config.epochs full passes. Epoch-end MSE over the whole training
    set is appended to train_loss_history after each epoch. Raises
    DivergedToNonFinite as soon as a weight or the loss stops being finite.
    """
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    require_same_length(x, y, "x", "y")
    require_nonempty(y, "y")
    cfg = model.config
    if x.shape[1] != cfg.input_dim:
        _dim_error(x.shape[1], model)

    w1 = model.w1.copy()
    b1 = model.b1.copy()
    w2 = model.w2.copy()
    b2 = model.b2.copy()
    w3 = model.w3.copy()
    b3 = float(model.b3)
    lr = cfg.learning_rate
    alpha = cfg.alpha
    n = y.size

    history = []
    # overflow to inf/nan is exactly how divergence shows up; the per-epoch
    # check below turns it into DivergedToNonFinite, so the warning is noise
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(cfg.epochs):
            if cfg.batch_mode == "full_batch":
                z1 = x @ w1 + b1
                a1 = elu(z1, alpha)
                z2 = a1 @ w2 + b2
                a2 = elu(z2, alpha)
                y_hat = a2 @ w3 + b3
                delta = 2.0 * (y_hat - y) / n
                dz2 = np.outer(delta, w3) * elu_prime(z2, alpha)
                dz1 = (dz2 @ w2.T) * elu_prime(z1, alpha)
                w3 -= lr * (a2.T @ delta)
                b3 -= lr * float(delta.sum())
                w2 -= lr * (a1.T @ dz2)
                b2 -= lr * dz2.sum(axis=0)
                w1 -= lr * (x.T @ dz1)
                b1 -= lr * dz1.sum(axis=0)
            else:
                for i in range(n):
                    xi = x[i]
                    z1 = xi @ w1 + b1
                    a1 = elu(z1, alpha)
                    z2 = a1 @ w2 + b2
                    a2 = elu(z2, alpha)
                    y_hat = float(a2 @ w3) + b3
                    delta = 2.0 * (y_hat - y[i])
                    dz2 = (delta * w3) * elu_prime(z2, alpha)
                    dz1 = (w2 @ dz2) * elu_prime(z1, alpha)
                    w3 -= lr * delta * a2
                    b3 -= lr * delta
                    w2 -= lr * np.outer(a1, dz2)
                    b2 -= lr * dz2
                    w1 -= lr * np.outer(xi, dz1)
                    b1 -= lr * dz1

            for arr in (w1, b1, w2, b2, w3):
                if not np.all(np.isfinite(arr)):
                    raise DivergedToNonFinite(
                        "a weight became non-finite during training"
                    )
            if not np.isfinite(b3):
                raise DivergedToNonFinite(
                    "a weight became non-finite during training"
                )
            z1 = x @ w1 + b1
            a2 = elu(elu(z1, alpha) @ w2 + b2, alpha)
            epoch_loss = float(np.mean((a2 @ w3 + b3 - y) ** 2))
            if not np.isfinite(epoch_loss):
                raise DivergedToNonFinite(
                    "loss became non-finite during training"
                )
            history.append(epoch_loss)

    return FFNetModel(
        config=cfg,
        w1=w1,
        b1=b1,
        w2=w2,
        b2=b2,
        w3=w3,
        b3=b3,
        train_loss_history=tuple(history),
    )


# --- estimator wrapper ------------------------------------------------------


class FFNetRegressor(BaseEstimator, RegressorMixin):
    """Estimator-style wrapper around the functional training API.

    Parameters mirror FFNetConfig minus input_dim, which is taken from
    the training data. The fitted snapshot is available as ``model_``.
    """

    def __init__(
        self,
        hidden_dim: int = 12,
        learning_rate: float = 1e-4,
        epochs: int = 100,
        alpha: float = 1.0,
        seed: int = 0,
        batch_mode: str = "per_sample",
    ):
        self.hidden_dim = hidden_dim
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.alpha = alpha
        self.seed = seed
        self.batch_mode = batch_mode

    def fit(self, X, y):
        X = as_matrix(X, "X")
        y = as_vector(y, "y")
        config = FFNetConfig(
            input_dim=X.shape[1],
            hidden_dim=self.hidden_dim,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            alpha=self.alpha,
            seed=self.seed,
            batch_mode=self.batch_mode,
        )
        self.model_ = train(init_model(config), X, y)
        self.loss_history_ = list(self.model_.train_loss_history)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise NotFittedError("FFNetRegressor is not fitted yet")
        return predict(self.model_, X)
