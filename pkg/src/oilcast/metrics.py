"""Forecast accuracy metrics and the forecast-comparison test.

Implements the protocol used throughout the benchmark harness: RMSE and
MAD for error magnitude, R-squared (centered on the evaluated sample, so
out-of-sample values can go negative), adjusted R-squared for in-sample
reporting, a generalization ratio (out-of-sample over in-sample R-squared),
and the squared-error loss-differential test with the small-sample
correction factor and Student-t reference distribution.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .exceptions import (
    ConstantActuals,
    DegenerateDof,
    DegenerateLossDifferential,
    EmptyInput,
    TooShort,
    ZeroInSampleR2,
)
from .validation import as_vector, require_nonempty, require_same_length


def rmse(actual, predicted) -> float:
    """Root mean squared error."""
    a = require_nonempty(as_vector(actual, "actual"), "actual")
    p = as_vector(predicted, "predicted")
    require_same_length(a, p, "actual", "predicted")
    return float(np.sqrt(np.mean((a - p) ** 2)))


def mad(actual, predicted) -> float:
    """Mean absolute deviation of the errors."""
    a = require_nonempty(as_vector(actual, "actual"), "actual")
    p = as_vector(predicted, "predicted")
    require_same_length(a, p, "actual", "predicted")
    return float(np.mean(np.abs(a - p)))


def r_squared(actual, predicted) -> float:
    """1 - SS_res / SS_tot with SS_tot centered on the evaluated sample.

    Predicting the sample mean everywhere scores 0; worse predictions go
    negative. Requires at least two observations and non-constant actuals.
    """
    a = as_vector(actual, "actual")
    p = as_vector(predicted, "predicted")
    require_same_length(a, p, "actual", "predicted")
    if a.size < 2:
        raise EmptyInput("r_squared needs at least two observations")
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise ConstantActuals("actuals are constant; r_squared undefined")
    ss_res = float(np.sum((a - p) ** 2))
    return 1.0 - ss_res / ss_tot


def adjusted_r_squared(r2: float, n: int, k: int) -> float:
    """Penalize R-squared for model size: 1 - (1-R2)(n-1)/(n-k-1)."""
    n = int(n)
    k = int(k)
    if k < 0:
        raise ValueError("k must be >= 0")
    if n <= k + 1:
        raise DegenerateDof(f"need n > k + 1, got n={n}, k={k}")
    return 1.0 - (1.0 - r2) * (n - 1) / (n - k - 1)


@dataclass(frozen=True)
class GeneralizationScore:
    """Out-of-sample R-squared over in-sample R-squared."""

    r2_in: float
    r2_out: float

    @property
    def ratio(self) -> float:
        return self.r2_out / self.r2_in


def generalization(r2_in: float, r2_out: float) -> GeneralizationScore:
    """Ratio score; a value near 1 means performance carried over."""
    if r2_in == 0.0:
        raise ZeroInSampleR2("in-sample r_squared is zero; ratio undefined")
    return GeneralizationScore(r2_in=float(r2_in), r2_out=float(r2_out))


def t_distribution_sf(t: float, dof: float) -> float:
    """P(T > t) for Student's t with dof degrees of freedom.

    Computed through the regularized incomplete beta function:
    for t >= 0, sf = I_x(dof/2, 1/2) / 2 with x = dof / (dof + t^2).
    """
    t = float(t)
    dof = float(dof)
    if not dof > 0:
        raise ValueError(f"dof must be > 0, got {dof}")
    if math.isnan(t):
        raise ValueError("t is NaN")
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    x = dof / (dof + t * t)
    tail = 0.5 * float(betainc(dof / 2.0, 0.5, x))
    return tail if t >= 0 else 1.0 - tail


@dataclass(frozen=True)
class DmResult:
    """Corrected loss-differential statistic and its two-sided p-value."""

    statistic: float
    p_value: float
    n: int
    horizon: int


def dm_test(errors_a, errors_b, h: int = 1) -> DmResult:
    """Compare two forecast error vectors under squared-error loss.

    The loss differential d_t = e_a,t^2 - e_b,t^2 is tested for zero mean.
    Long-run variance uses divisor-n autocovariances up to lag h-1; the
    statistic is rescaled by the small-sample factor
    sqrt((n + 1 - 2h + h(h-1)/n) / n) and referred to a t distribution
    with n - 1 degrees of freedom. Negative statistics favour the first
    forecast.
    """
    e_a = as_vector(errors_a, "errors_a")
    e_b = as_vector(errors_b, "errors_b")
    require_same_length(e_a, e_b, "errors_a", "errors_b")
    n = e_a.size
    if n < 4:
        raise TooShort(f"need at least 4 observations, got {n}")
    h = int(h)
    if h < 1:
        raise ValueError(f"horizon must be >= 1, got {h}")

    d = e_a**2 - e_b**2
    if np.all(d == 0.0):
        raise DegenerateLossDifferential(
            "loss differential is identically zero"
        )
    d_bar = float(d.mean())
    centered = d - d_bar

    def autocov(lag: int) -> float:
        # divisor-n (biased) autocovariance
        return float(np.dot(centered[lag:], centered[: n - lag]) / n)

    variance = autocov(0) + 2.0 * sum(autocov(j) for j in range(1, h))
    variance /= n
    if variance <= 0.0:
        raise DegenerateLossDifferential(
            f"long-run variance {variance} is not positive"
        )

    statistic = d_bar / math.sqrt(variance)
    correction_arg = (n + 1 - 2 * h + h * (h - 1) / n) / n
    if correction_arg <= 0.0:
        raise TooShort(
            f"horizon {h} too large for {n} observations "
            "(correction factor undefined)"
        )
    statistic *= math.sqrt(correction_arg)
    p_value = 2.0 * t_distribution_sf(abs(statistic), n - 1)
    return DmResult(statistic=statistic, p_value=p_value, n=n, horizon=h)


@dataclass(frozen=True)
class EvalReport:
    """Metric bundle for one model on one sample.

    sample_kind is "in_sample" or "out_of_sample"; adjusted_r2 is only
    populated in-sample (k = independent-variable count), runtime_seconds
    only when the caller timed the fit.
    """

    sample_kind: str
    n: int
    k: int
    rmse: float
    mad: float
    r2: float
    adjusted_r2: float | None = None
    runtime_seconds: float | None = None

    def __post_init__(self):
        if self.sample_kind not in ("in_sample", "out_of_sample"):
            raise ValueError(
                f"sample_kind must be in_sample or out_of_sample, "
                f"got {self.sample_kind!r}"
            )

    def to_dict(self) -> dict:
        out = {
            "sample_kind": self.sample_kind,
            "n": self.n,
            "k": self.k,
            "rmse": self.rmse,
            "mad": self.mad,
            "r2": self.r2,
        }
        if self.adjusted_r2 is not None:
            out["adjusted_r2"] = self.adjusted_r2
        if self.runtime_seconds is not None:
            out["runtime_seconds"] = self.runtime_seconds
        return out


def evaluate(
    actual,
    predicted,
    sample_kind: str,
    k: int,
    runtime_seconds: float | None = None,
) -> EvalReport:
    """Build an EvalReport; adjusted R-squared only for in-sample kind."""
    a = as_vector(actual, "actual")
    p = as_vector(predicted, "predicted")
    require_same_length(a, p, "actual", "predicted")
    r2 = r_squared(a, p)
    adj = (
        adjusted_r_squared(r2, a.size, k)
        if sample_kind == "in_sample"
        else None
    )
    return EvalReport(
        sample_kind=sample_kind,
        n=int(a.size),
        k=int(k),
        rmse=rmse(a, p),
        mad=mad(a, p),
        r2=r2,
        adjusted_r2=adj,
        runtime_seconds=runtime_seconds,
    )


def report_payload(report) -> dict:
    """JSON-ready dict for an EvalReport or DmResult."""
    if isinstance(report, EvalReport):
        return report.to_dict()
    if isinstance(report, DmResult):
        return {
            "statistic": report.statistic,
            "p_value": report.p_value,
            "n": report.n,
            "horizon": report.horizon,
        }
    return dict(report)


def write_report_json(report, path) -> None:
    """Serialize an EvalReport or DmResult losslessly to JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_payload(report), fh, indent=2)
        fh.write("\n")
