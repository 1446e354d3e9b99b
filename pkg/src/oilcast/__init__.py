"""Monthly multivariate forecasting toolkit and benchmark harness.

Three models built on numpy: a two-hidden-layer ELU network trained by
backprop, closed-form ridge regression, and ARIMA with drift estimated
by conditional sum of squares over a hand-rolled Nelder-Mead simplex.
Shared infrastructure covers seeded splitmix64 randomness, a contiguous
monthly data frame with min-max normalization, forecast-accuracy metrics
with a small-sample-corrected loss-differential test, model file I/O,
a hyperparameter-grid harness, and a CLI.
"""

from . import exceptions
from .arima import (
    CANONICAL_ORDERS,
    ArimaForecaster,
    ArimaModel,
    ArimaOrder,
    CorrelogramPoint,
    acf,
    arima_fit,
    arima_fitted,
    arima_forecast,
    css,
    difference,
    hannan_rissanen_init,
    pacf,
    undifference,
    write_correlogram_csv,
)
from .dataset import (
    CATEGORIES,
    Month,
    NormalizationParams,
    SplitSpec,
    TimeSeriesFrame,
    VariableSpec,
    apply_normalization,
    correlation_matrix,
    default_schema,
    extract_xy,
    fit_normalization,
    load_csv,
    load_schema,
    save_schema,
    split,
    write_correlation_csv,
)
from .exceptions import OilcastError
from .ffnet import (
    FFNetConfig,
    FFNetModel,
    FFNetRegressor,
    Gradients,
    elu,
    elu_prime,
    gradients,
    init_model,
    loss_mse,
    predict,
    train,
)
from .grid import (
    ExperimentGrid,
    GridCell,
    GridResult,
    NnGridEntry,
    emit_reports,
    run_grid,
    select_best,
    write_grid_csv,
)
from .linalg import cholesky_solve, matmul
from .metrics import (
    DmResult,
    EvalReport,
    GeneralizationScore,
    adjusted_r_squared,
    dm_test,
    evaluate,
    generalization,
    mad,
    r_squared,
    rmse,
    t_distribution_sf,
    write_report_json,
)
from .modelio import load_model, save_model
from .optimize import SimplexConfig, finite_diff_gradient, nelder_mead
from .ridge import (
    CANONICAL_LAMBDAS,
    RidgeModel,
    RidgeRegressor,
    ridge_fit,
    ridge_objective,
    ridge_predict,
)
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "ArimaForecaster",
    "ArimaModel",
    "ArimaOrder",
    "CANONICAL_LAMBDAS",
    "CANONICAL_ORDERS",
    "CATEGORIES",
    "CorrelogramPoint",
    "DmResult",
    "EvalReport",
    "ExperimentGrid",
    "FFNetConfig",
    "FFNetModel",
    "FFNetRegressor",
    "GeneralizationScore",
    "Gradients",
    "GridCell",
    "GridResult",
    "Month",
    "NnGridEntry",
    "NormalizationParams",
    "OilcastError",
    "RidgeModel",
    "RidgeRegressor",
    "SimplexConfig",
    "SplitMix64",
    "SplitSpec",
    "TimeSeriesFrame",
    "VariableSpec",
    "acf",
    "adjusted_r_squared",
    "apply_normalization",
    "arima_fit",
    "arima_fitted",
    "arima_forecast",
    "cholesky_solve",
    "correlation_matrix",
    "css",
    "default_schema",
    "difference",
    "dm_test",
    "elu",
    "elu_prime",
    "emit_reports",
    "evaluate",
    "exceptions",
    "extract_xy",
    "finite_diff_gradient",
    "fit_normalization",
    "generalization",
    "gradients",
    "hannan_rissanen_init",
    "init_model",
    "load_csv",
    "load_model",
    "load_schema",
    "loss_mse",
    "mad",
    "matmul",
    "nelder_mead",
    "pacf",
    "predict",
    "r_squared",
    "ridge_fit",
    "ridge_objective",
    "ridge_predict",
    "rmse",
    "run_grid",
    "save_model",
    "save_schema",
    "select_best",
    "split",
    "t_distribution_sf",
    "train",
    "undifference",
    "write_correlation_csv",
    "write_correlogram_csv",
    "write_grid_csv",
    "write_report_json",
]
