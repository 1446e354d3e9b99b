"""ARIMA(p,d,q) with drift, estimated by conditional sum of squares.

The model for the d-times differenced series w_t is

    w_t - drift = sum_i phi_i (w_{t-i} - drift) + e_t + sum_j theta_j e_{t-j}

with a conditional start: residuals for t <= p are fixed at zero, and the
objective is the sum of squared residuals over t > p. Estimation runs the
derivative-free simplex minimizer from a Hannan-Rissanen two-stage
least-squares start. Maximum-likelihood refinements and backcasting are
deliberately out of scope; CSS is fully specified and testable from first
principles, and the difference is noted in model reports.

Stationarity and invertibility are reported, never enforced: aggressive
orders such as (2,2,5) are part of the canonical grid, so the fit only
flags characteristic roots with modulus <= 1.001.

Forecasting iterates the recursion with future innovations at zero,
feeding each forecast back as a known value, then re-integrates to the
raw scale using stored anchors (the final d + p raw observations and the
final q residuals).
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .exceptions import (
    ConstantSeries,
    InsufficientAnchor,
    NumericalBreakdown,
    OptimizerFailed,
    SeriesTooShort,
    SingularSystem,
)
from .optimize import SimplexConfig, nelder_mead
from .validation import as_vector

# css sentinel: finite but enormous, steers the optimizer away from
# explosive coefficient regions without breaking float comparisons
LARGE_CSS = 1e300
_ROOT_FLAG_MODULUS = 1.001

CANONICAL_ORDERS = (
    (1, 1, 2),
    (2, 1, 1),
    (2, 1, 3),
    (1, 2, 2),
    (2, 2, 3),
    (2, 2, 5),
)


@dataclass(frozen=True, order=True)
class ArimaOrder:
    """(p, d, q): AR lags, differencing rounds, MA lags."""

    p: int
    d: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("p and q must be >= 0")
        if self.d not in (0, 1, 2):
            raise ValueError(f"d must be in {{0, 1, 2}}, got {self.d}")

    def as_tuple(self) -> tuple:
        return (self.p, self.d, self.q)


@dataclass(frozen=True, eq=False)
class ArimaModel:
    """Fitted coefficients plus everything needed to forecast.

    residuals covers t > p of the differenced series (length
    n - d - p for a training series of length n); last_values holds the
    final d + p raw observations and last_residuals the final q residuals.
    The near-unit-root flags report (but do not enforce) stationarity and
    invertibility of the fitted polynomials.
    """

    order: ArimaOrder
    phi: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    drift: float
    residuals: np.ndarray = field(repr=False)
    css: float
    last_values: np.ndarray = field(repr=False)
    last_residuals: np.ndarray = field(repr=False)
    ar_near_unit_root: bool = False
    ma_near_unit_root: bool = False


@dataclass(frozen=True)
class CorrelogramPoint:
    lag: int
    value: float
    conf_limit: float


def difference(series, d: int) -> np.ndarray:
    """Apply first differencing d times; output shrinks by d."""
    s = as_vector(series, "series")
    d = int(d)
    if d < 0:
        raise ValueError("d must be >= 0")
    if s.size <= d:
        raise SeriesTooShort(f"length {s.size} series cannot be differenced {d} times")
    out = s.copy()
    for _ in range(d):
        out = out[1:] - out[:-1]
    return out


def undifference(forecast_diffs, last_values, d: int) -> np.ndarray:
    """Re-integrate d-times-differenced continuation values to raw scale.

    last_values are the final observed raw values (chronological order,
    at least d of them); the anchors for every intermediate differencing
    level are derived from them, which makes this the exact inverse of
    difference() on a continuation.
    """
    w = as_vector(forecast_diffs, "forecast_diffs")
    anchors_raw = as_vector(last_values, "last_values")
    d = int(d)
    if d < 0:
        raise ValueError("d must be >= 0")
    if d == 0:
        return w.copy()
    if anchors_raw.size < d:
        raise InsufficientAnchor(
            f"need at least {d} anchor values, got {anchors_raw.size}"
        )

    # last value at each differencing level 0..d-1, from the anchor tail
    level_last = []
    level = anchors_raw.copy()
    for _ in range(d):
        level_last.append(level[-1])
        level = level[1:] - level[:-1]

    out = np.empty(w.size)
    for i, value in enumerate(w):
        # cascade one new observation up from level d to level 0
        for lvl in range(d - 1, -1, -1):
            value = level_last[lvl] + value
            level_last[lvl] = value
        out[i] = value
    return out


def _checked_series(series, max_lag: int) -> np.ndarray:
    s = as_vector(series, "series")
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    if s.size <= max_lag:
        raise SeriesTooShort(
            f"series length {s.size} must exceed max_lag {max_lag}"
        )
    if np.all(s == s[0]):
        raise ConstantSeries("series is constant")
    return s


def acf(series, max_lag: int) -> list:
    """Sample autocorrelations for lags 0..max_lag.

    r_k = sum_t (x_t - xbar)(x_{t+k} - xbar) / sum_t (x_t - xbar)^2, the
    divisor-n estimator, so |r_k| <= 1. conf_limit is 1.96/sqrt(n).
    """
    s = _checked_series(series, max_lag)
    n = s.size
    centered = s - s.mean()
    denom = float(centered @ centered)
    conf = 1.96 / math.sqrt(n)
    points = []
    for lag in range(max_lag + 1):
        num = float(centered[lag:] @ centered[: n - lag])
        points.append(
            CorrelogramPoint(lag=lag, value=num / denom, conf_limit=conf)
        )
    return points


def _durbin_levinson(r: np.ndarray) -> np.ndarray:
    """PACF values phi_kk for k = 1..len(r)-1 from acf values r_0..r_m.

    Raises NumericalBreakdown when the innovation variance recursion
    loses positivity.
    """
    m = r.size - 1
    pacf_values = np.empty(m)
    phi_prev = np.empty(0)
    v = 1.0
    for k in range(1, m + 1):
        if v <= 0.0:
            raise NumericalBreakdown(
                f"innovation variance {v} not positive at lag {k}"
            )
        num = r[k] - float(phi_prev @ r[1:k][::-1]) if k > 1 else r[1]
        phi_kk = num / v
        if k > 1:
            phi_new = phi_prev - phi_kk * phi_prev[::-1]
        else:
            phi_new = np.empty(0)
        phi_prev = np.append(phi_new, phi_kk)
        pacf_values[k - 1] = phi_kk
        v *= 1.0 - phi_kk * phi_kk
    return pacf_values


def pacf(series, max_lag: int) -> list:
    """Partial autocorrelations for lags 0..max_lag (lag 0 fixed at 1).

    Computed by the Durbin-Levinson recursion on the sample acf.
    """
    s = _checked_series(series, max_lag)
    n = s.size
    conf = 1.96 / math.sqrt(n)
    acf_values = np.asarray([pt.value for pt in acf(s, max_lag)])
    points = [CorrelogramPoint(lag=0, value=1.0, conf_limit=conf)]
    if max_lag >= 1:
        for lag, value in enumerate(_durbin_levinson(acf_values), start=1):
            points.append(
                CorrelogramPoint(lag=lag, value=float(value), conf_limit=conf)
            )
    return points


def write_correlogram_csv(points, path) -> None:
    """Write lag, value, conf_limit rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lag", "value", "conf_limit"])
        for pt in points:
            writer.writerow([pt.lag, repr(pt.value), repr(pt.conf_limit)])


def _ols(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least squares through the normal equations."""
    gram = x.T @ x
    rhs = x.T @ y
    try:
        return np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("regression design is singular") from exc


def hannan_rissanen_init(series, order: ArimaOrder):
    """Two-stage least-squares starting point (phi0, theta0, drift0).

    Stage 1 fits a long autoregression (order min(20, n // 4)) to the
    mean-centered series to estimate innovations. Stage 2 regresses the
    centered series on its own lags and the lagged innovation estimates.
    drift0 is the mean of what those terms leave unexplained, which for
    (p, q) = (0, 0) is exactly the series mean.
    """
    s = as_vector(series, "series")
    p, q = order.p, order.q
    n = s.size
    if n <= 3 * (p + q) + 20:
        raise SeriesTooShort(
            f"need more than {3 * (p + q) + 20} observations for order "
            f"({p},{order.d},{q}), got {n}"
        )

    mean = float(s.mean())
    z = s - mean
    if p == 0 and q == 0:
        return np.empty(0), np.empty(0), mean

    if q > 0:
        m = min(20, n // 4)
        design = np.column_stack([z[m - i : n - i] for i in range(1, m + 1)])
        coeffs = _ols(design, z[m:])
        innov = np.zeros(n)
        innov[m:] = z[m:] - design @ coeffs
        # stage-2 rows need q innovation lags that stage 1 actually produced
        lag0 = max(p, m + q)
    else:
        innov = np.zeros(n)
        lag0 = p

    regressors = []
    for i in range(1, p + 1):
        regressors.append(z[lag0 - i : n - i])
    for j in range(1, q + 1):
        regressors.append(innov[lag0 - j : n - j])
    design2 = np.column_stack(regressors)
    target = z[lag0:]
    coef = _ols(design2, target)
    phi0 = coef[:p].copy()
    theta0 = coef[p:].copy()
    resid = target - design2 @ coef
    drift0 = mean + float(resid.mean())
    return phi0, theta0, drift0


def css(series, phi, theta, drift: float) -> float:
    """Conditional sum of squares of the residual recursion.

    e_t = (x_t - drift) - sum_i phi_i (x_{t-i} - drift) - sum_j theta_j e_{t-j}
    with e_t = 0 for the first p positions; returns sum over t > p of
    e_t^2. Never raises: explosive parameter values return LARGE_CSS so
    an optimizer simply steps away.
    """
    z = as_vector(series, "series")
    phi = as_vector(phi, "phi")
    theta = as_vector(theta, "theta")
    p, q = phi.size, theta.size
    n = z.size
    if n <= p:
        raise SeriesTooShort(f"series length {n} must exceed p={p}")
    if not np.isfinite(drift) or not (
        np.all(np.isfinite(phi)) and np.all(np.isfinite(theta))
    ):
        return LARGE_CSS

    zc = z - drift
    # the AR side only references observed values, so it vectorizes;
    # what remains sequential is the dependence on past residuals
    base = zc[p:].copy()
    for i in range(1, p + 1):
        base -= phi[i - 1] * zc[p - i : n - i]
    if q == 0:
        total = float(base @ base)
        return total if np.isfinite(total) else LARGE_CSS

    e = [0.0] * n
    base_list = base.tolist()
    theta_list = theta.tolist()
    for t in range(p, n):
        v = base_list[t - p]
        for j in range(q):
            idx = t - 1 - j
            if idx >= 0:
                v -= theta_list[j] * e[idx]
        if abs(v) > 1e150:
            return LARGE_CSS
        e[t] = v
    tail = np.asarray(e[p:])
    total = float(tail @ tail)
    return total if np.isfinite(total) else LARGE_CSS


def _residuals(z: np.ndarray, phi: np.ndarray, theta: np.ndarray,
               drift: float) -> np.ndarray:
    """Residuals of the recursion for t = 0..n-1 (zeros for t < p)."""
    p, q = phi.size, theta.size
    n = z.size
    zc = z - drift
    base = zc[p:].copy()
    for i in range(1, p + 1):
        base -= phi[i - 1] * zc[p - i : n - i]
    if q == 0:
        e = np.zeros(n)
        e[p:] = base
        return e
    e = [0.0] * n
    base_list = base.tolist()
    theta_list = theta.tolist()
    for t in range(p, n):
        v = base_list[t - p]
        for j in range(q):
            idx = t - 1 - j
            if idx >= 0:
                v -= theta_list[j] * e[idx]
        e[t] = v
    return np.asarray(e)


def _near_unit_root(coeffs: np.ndarray, sign: float) -> bool:
    """Flag characteristic roots with modulus <= the warning threshold.

    AR polynomial: 1 - phi_1 z - ... - phi_p z^p (sign=-1).
    MA polynomial: 1 + theta_1 z + ... + theta_q z^q (sign=+1).
    """
    if coeffs.size == 0:
        return False
    poly = np.concatenate(([1.0], sign * coeffs))
    # np.roots wants highest degree first
    roots = np.roots(poly[::-1])
    if roots.size == 0:
        return False
    return bool(np.min(np.abs(roots)) <= _ROOT_FLAG_MODULUS)


def arima_fit(raw_series, order, simplex_config: SimplexConfig | None = None) -> ArimaModel:
    """Difference, initialize, and minimize the conditional sum of squares.

    Deterministic: the same series and order always give the same model.
    """
    s = as_vector(raw_series, "raw_series")
    if not isinstance(order, ArimaOrder):
        order = ArimaOrder(*order)
    p, d, q = order.p, order.d, order.q
    if s.size <= d + 3 * (p + q) + 20:
        raise SeriesTooShort(
            f"need more than {d + 3 * (p + q) + 20} observations for order "
            f"({p},{d},{q}), got {s.size}"
        )

    z = difference(s, d)
    phi0, theta0, drift0 = hannan_rissanen_init(z, order)
    x0 = np.concatenate([phi0, theta0, [drift0]])

    def objective(params):
        return css(z, params[:p], params[p : p + q], params[p + q])

    f0 = objective(x0)
    if simplex_config is None:
        n_params = x0.size
        simplex_config = SimplexConfig(
            max_evals=800 * n_params,
            convergence_tol=1e-9 * max(1.0, abs(f0)),
            initial_step=0.05,
        )
    best, best_css = nelder_mead(objective, x0, simplex_config)
    if not np.isfinite(best_css) or best_css >= LARGE_CSS:
        raise OptimizerFailed("no finite conditional sum of squares found")

    phi = best[:p].copy()
    theta = best[p : p + q].copy()
    drift = float(best[p + q])
    resid_full = _residuals(z, phi, theta, drift)
    residuals = resid_full[p:].copy()
    return ArimaModel(
        order=order,
        phi=phi,
        theta=theta,
        drift=drift,
        residuals=residuals,
        css=float(residuals @ residuals),
        last_values=s[s.size - (d + p) :].copy() if d + p > 0 else np.empty(0),
        last_residuals=resid_full[resid_full.size - q :].copy()
        if q > 0
        else np.empty(0),
        ar_near_unit_root=_near_unit_root(phi, -1.0),
        ma_near_unit_root=_near_unit_root(theta, +1.0),
    )


def arima_forecast(model: ArimaModel, horizon: int) -> np.ndarray:
    """Iterate the recursion forward and re-integrate to raw scale.

    Future innovations are zero; each step's differenced forecast is fed
    back as a known value for later steps.
    """
    horizon = int(horizon)
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    p, d, q = model.order.p, model.order.d, model.order.q
    phi = model.phi
    theta = model.theta
    drift = model.drift

    if p > 0:
        if model.last_values.size < d + p:
            raise InsufficientAnchor(
                f"model stores {model.last_values.size} anchor values, "
                f"needs {d + p}"
            )
        w_hist = list(difference(model.last_values, d))[-p:]
    else:
        w_hist = []
    e_hist = list(model.last_residuals[-q:]) if q > 0 else []

    w_fore = np.empty(horizon)
    for k in range(horizon):
        v = drift
        for i in range(p):
            v += phi[i] * (w_hist[-1 - i] - drift)
        for j in range(q):
            if j < len(e_hist):
                v += theta[j] * e_hist[-1 - j]
        w_fore[k] = v
        if p > 0:
            w_hist.append(v)
            w_hist = w_hist[-p:]
        if q > 0:
            e_hist.append(0.0)
            e_hist = e_hist[-q:]

    if d == 0:
        return w_fore
    return undifference(w_fore, model.last_values, d)


def arima_fitted(model: ArimaModel, raw_series) -> np.ndarray:
    """One-step-ahead in-sample fitted values on the raw scale.

    Returns fitted values aligned to raw_series[d+p:]: actual minus the
    conditional residual at each step.
    """
    s = as_vector(raw_series, "raw_series")
    p, d = model.order.p, model.order.d
    z = difference(s, d)
    resid = _residuals(z, model.phi, model.theta, model.drift)
    return s[d + p :] - resid[p:]


class ArimaForecaster(BaseEstimator):
    """Estimator-style wrapper: fit(y) on a raw series, then forecast(h)."""

    def __init__(self, order=(1, 1, 2)):
        self.order = order

    def fit(self, y, X=None):
        self.model_ = arima_fit(y, ArimaOrder(*self.order))
        return self

    def forecast(self, horizon: int) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise NotFittedError("ArimaForecaster is not fitted yet")
        return arima_forecast(self.model_, horizon)

    def fitted_values(self, y) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise NotFittedError("ArimaForecaster is not fitted yet")
        return arima_fitted(self.model_, y)
