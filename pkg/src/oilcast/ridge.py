"""Ridge regression solved in closed form.

Minimizes ||y - X b||^2 + lambda ||b||^2 with no intercept term: the
coefficient vector is the unique solution of (X^T X + lambda I) b = X^T y,
obtained by a Cholesky solve. In the benchmark harness X holds the
min-max-normalized independent variables and the canonical penalty grid is
{0, 0.25, 0.5, 0.75, 0.95, 0.99}.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import DimensionMismatch, NotPositiveDefinite, SingularSystem
from .linalg import cholesky_solve
from .validation import as_matrix, as_vector, require_nonempty, require_same_length

CANONICAL_LAMBDAS = (0.0, 0.25, 0.5, 0.75, 0.95, 0.99)


@dataclass(frozen=True, eq=False)
class RidgeModel:
    """Fitted penalty and coefficients (one per input column)."""

    lam: float
    beta: np.ndarray = field(repr=False)


def ridge_objective(x, y, beta, lam: float) -> float:
    """Penalized residual sum of squares ||y - X b||^2 + lam ||b||^2."""
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    beta = as_vector(beta, "beta")
    require_same_length(x, y, "x", "y")
    if x.shape[1] != beta.size:
        raise DimensionMismatch(
            f"x has {x.shape[1]} columns but beta has {beta.size} entries"
        )
    resid = y - x @ beta
    return float(resid @ resid + lam * (beta @ beta))


def ridge_fit(x, y, lam: float) -> RidgeModel:
    """Closed-form fit; lam must be >= 0.

    Raises SingularSystem when the normal equations are not positive
    definite (e.g. lam = 0 with linearly dependent columns).
    """
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    require_same_length(x, y, "x", "y")
    require_nonempty(y, "y")
    lam = float(lam)
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    gram = x.T @ x + lam * np.eye(x.shape[1])
    rhs = x.T @ y
    try:
        beta = cholesky_solve(gram, rhs)
    except NotPositiveDefinite as exc:
        raise SingularSystem(
            f"normal equations not positive definite at lam={lam}"
        ) from exc
    return RidgeModel(lam=lam, beta=beta)


def ridge_predict(model: RidgeModel, x) -> np.ndarray:
    """X @ beta for each row of x."""
    x = as_matrix(x, "x")
    if x.shape[1] != model.beta.size:
        raise DimensionMismatch(
            f"x has {x.shape[1]} columns but model has {model.beta.size} "
            "coefficients"
        )
    return x @ model.beta


class RidgeRegressor(BaseEstimator, RegressorMixin):
    """Estimator-style wrapper; ``lam`` is the L2 penalty weight."""

    def __init__(self, lam: float = 0.0):
        self.lam = lam

    def fit(self, X, y):
        self.model_ = ridge_fit(X, y, self.lam)
        self.coef_ = self.model_.beta
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise NotFittedError("RidgeRegressor is not fitted yet")
        return ridge_predict(self.model_, X)
