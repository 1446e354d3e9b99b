"""Derivative-free minimization and numerical differentiation.

The simplex optimizer here is the single minimizer used for ARIMA
conditional-sum-of-squares fitting. It is written out rather than borrowed
so the termination rule is exactly: stop when the spread of objective
values across the simplex falls below ``convergence_tol``, or when
``max_evals`` objective evaluations have been spent. Given the same
starting point and config it is fully deterministic.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import NonFiniteObjective
from .validation import as_vector

# standard Nelder-Mead coefficients
_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5


@dataclass(frozen=True)
class SimplexConfig:
    """Termination knobs for :func:`nelder_mead`.

    max_evals: hard cap on objective evaluations.
    convergence_tol: stop once max(f) - min(f) over the simplex is below this.
    initial_step: absolute per-coordinate offset used to build the first
        simplex around x0.
    """

    max_evals: int = 2000
    convergence_tol: float = 1e-10
    initial_step: float = 0.1

    def __post_init__(self):
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")
        if not self.convergence_tol >= 0:
            raise ValueError("convergence_tol must be >= 0")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be > 0")


class _BudgetExhausted(Exception):
    """Internal signal: max_evals spent; unwind with the best point so far."""


def nelder_mead(objective, x0, config: SimplexConfig | None = None):
    """Minimize a scalar objective from x0; returns (x_best, f_best).

    The objective must be finite at x0 (NonFiniteObjective otherwise);
    non-finite values met later in the search are treated as +inf, so the
    simplex simply retreats from them. f_best never exceeds objective(x0),
    and the objective is called at most max_evals times.
    """
    cfg = config or SimplexConfig()
    x0 = as_vector(x0, "x0").copy()
    n = x0.size

    evals = 0

    def call(x):
        nonlocal evals
        if evals >= cfg.max_evals:
            raise _BudgetExhausted
        evals += 1
        f = float(objective(x))
        return f if np.isfinite(f) else np.inf

    f0 = call(x0)
    if not np.isfinite(f0):
        raise NonFiniteObjective("objective(x0) is not finite")

    if n == 0:
        return x0, f0

    points = [x0]
    values = [f0]
    try:
        for i in range(n):
            point = x0.copy()
            point[i] += cfg.initial_step
            values.append(call(point))
            points.append(point)
    except _BudgetExhausted:
        best = int(np.argmin(values))
        return points[best].copy(), float(values[best])

    sim = np.asarray(points)
    fs = np.asarray(values)

    try:
        while True:
            order = np.argsort(fs, kind="stable")
            sim = sim[order]
            fs = fs[order]

            # fs is sorted, so this is the objective spread across the
            # simplex; an inf vertex keeps it inf and the search alive.
            if fs[-1] - fs[0] < cfg.convergence_tol:
                break

            centroid = sim[:-1].mean(axis=0)
            direction = centroid - sim[-1]
            reflected = centroid + _REFLECT * direction
            f_reflected = call(reflected)

            if f_reflected < fs[0]:
                # keep the reflection immediately so running out of budget
                # during the expansion probe cannot discard it
                sim[-1], fs[-1] = reflected, f_reflected
                expanded = centroid + _EXPAND * direction
                f_expanded = call(expanded)
                if f_expanded < f_reflected:
                    sim[-1], fs[-1] = expanded, f_expanded
            elif f_reflected < fs[-2]:
                sim[-1], fs[-1] = reflected, f_reflected
            else:
                if f_reflected < fs[-1]:
                    # outside contraction
                    contracted = centroid + _CONTRACT * direction
                else:
                    # inside contraction
                    contracted = centroid - _CONTRACT * direction
                f_contracted = call(contracted)
                if f_contracted < min(f_reflected, fs[-1]):
                    sim[-1], fs[-1] = contracted, f_contracted
                else:
                    for i in range(1, n + 1):
                        shrunk = sim[0] + _SHRINK * (sim[i] - sim[0])
                        f_shrunk = call(shrunk)
                        sim[i] = shrunk
                        fs[i] = f_shrunk
    except _BudgetExhausted:
        pass

    best = int(np.argmin(fs))
    return sim[best].copy(), float(fs[best])


def finite_diff_gradient(objective, x, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar objective at x.

    The independent check used against analytic gradients. Probe points
    must yield finite objective values.
    """
    x = as_vector(x, "x").copy()
    grad = np.empty_like(x)
    for i in range(x.size):
        orig = x[i]
        x[i] = orig + step
        f_plus = float(objective(x))
        x[i] = orig - step
        f_minus = float(objective(x))
        x[i] = orig
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise NonFiniteObjective(f"objective not finite near coordinate {i}")
        grad[i] = (f_plus - f_minus) / (2.0 * step)
    return grad
