"""Benchmark harness: run a hyperparameter grid over the three methods.

The canonical experiment is 18 cells on one frame: six network
configurations (learning rate 0.001 or 0.0001 crossed with 100, 150, or
200 epochs), six ridge penalties, and six ARIMA orders. Every cell fits
on the training segment, predicts in-sample and over the test horizon,
and reports RMSE, MAD, R-squared (plus adjusted R-squared in-sample), a
generalization ratio, and the mean wall-clock seconds over
timing_repetitions fit+forecast runs.

Determinism: network cells draw their seeds from a splitmix64 stream
keyed by the grid seed and indexed by cell ordinal, and results are
aggregated in ordinal order, so the metric columns of grid.csv are
bit-identical across runs regardless of the worker count. The
OILCAST_THREADS environment variable caps the thread pool (0 or unset
means one worker per CPU). Failed cells are recorded with their error
and never abort the run.
"""

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import arima as arima_mod
from . import ffnet as ffnet_mod
from . import ridge as ridge_mod
from .arima import CANONICAL_ORDERS, ArimaOrder
from .dataset import (
    Month,
    SplitSpec,
    TimeSeriesFrame,
    apply_normalization,
    correlation_matrix,
    extract_xy,
    fit_normalization,
    split,
    write_correlation_csv,
)
from .exceptions import AllCellsFailed, OilcastError
from .ffnet import FFNetConfig
from .metrics import EvalReport, evaluate, generalization
from .ridge import CANONICAL_LAMBDAS
from .rng import SplitMix64

THREADS_ENV_VAR = "OILCAST_THREADS"

CANONICAL_LEARNING_RATES = (0.001, 0.0001)
CANONICAL_EPOCHS = (100, 150, 200)
CANONICAL_TEST_START = Month(2017, 1)

SERIES_CRITERIA = ("in_sample_error", "out_sample_error", "out_sample_r2")
CRITERIA = SERIES_CRITERIA + ("generalization",)


@dataclass(frozen=True)
class NnGridEntry:
    """One network cell; seed None means derive from the grid seed."""

    learning_rate: float
    epochs: int
    seed: int | None = None
    hidden_dim: int = 12
    alpha: float = 1.0
    batch_mode: str = "per_sample"


@dataclass(frozen=True)
class ExperimentGrid:
    """Cell definitions plus timing and seeding policy."""

    nn: tuple = ()
    lambdas: tuple = ()
    arima: tuple = ()
    timing_repetitions: int = 25
    seed: int = 0
    test_start: Month | None = None

    def __post_init__(self):
        object.__setattr__(self, "nn", tuple(self.nn))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        object.__setattr__(
            self,
            "arima",
            tuple(
                o if isinstance(o, ArimaOrder) else ArimaOrder(*o)
                for o in self.arima
            ),
        )
        if self.timing_repetitions < 1:
            raise ValueError("timing_repetitions must be >= 1")
        if not (self.nn or self.lambdas or self.arima):
            raise ValueError("grid has no cells")
        for lam in self.lambdas:
            if lam < 0:
                raise ValueError(f"lambda must be >= 0, got {lam}")

    @property
    def n_cells(self) -> int:
        return len(self.nn) + len(self.lambdas) + len(self.arima)

    @classmethod
    def canonical(cls, seed: int = 0, timing_repetitions: int = 25,
                  test_start: Month | None = None) -> "ExperimentGrid":
        entries = tuple(
            NnGridEntry(learning_rate=lr, epochs=ep)
            for lr in CANONICAL_LEARNING_RATES
            for ep in CANONICAL_EPOCHS
        )
        return cls(
            nn=entries,
            lambdas=CANONICAL_LAMBDAS,
            arima=tuple(ArimaOrder(*o) for o in CANONICAL_ORDERS),
            timing_repetitions=timing_repetitions,
            seed=seed,
            test_start=test_start,
        )

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentGrid":
        entries = tuple(
            NnGridEntry(
                learning_rate=float(e["learning_rate"]),
                epochs=int(e["epochs"]),
                seed=int(e["seed"]) if "seed" in e and e["seed"] is not None else None,
                hidden_dim=int(e.get("hidden_dim", 12)),
                alpha=float(e.get("alpha", 1.0)),
                batch_mode=e.get("batch_mode", "per_sample"),
            )
            for e in payload.get("nn", [])
        )
        test_start = payload.get("test_start")
        return cls(
            nn=entries,
            lambdas=tuple(payload.get("lambdas", [])),
            arima=tuple(ArimaOrder(*o) for o in payload.get("arima", [])),
            timing_repetitions=int(payload.get("timing_repetitions", 25)),
            seed=int(payload.get("seed", 0)),
            test_start=Month.from_string(test_start) if test_start else None,
        )

    @classmethod
    def from_json(cls, path) -> "ExperimentGrid":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(eq=False)
class GridCell:
    """Outcome of one grid cell (metrics empty when status is error)."""

    ordinal: int
    method: str
    params: dict
    status: str = "ok"
    error: str | None = None
    report_in: EvalReport | None = None
    report_out: EvalReport | None = None
    generalization: float | None = None
    mean_runtime_s: float | None = None
    fitted: np.ndarray | None = field(default=None, repr=False)
    fitted_dates: tuple = ()
    fitted_actual: np.ndarray | None = field(default=None, repr=False)
    forecast: np.ndarray | None = field(default=None, repr=False)
    loss_history: tuple = ()

    def params_label(self) -> str:
        if self.method == "nn":
            return (
                f"lr={self.params['learning_rate']};"
                f"epochs={self.params['epochs']};"
                f"seed={self.params['seed']}"
            )
        if self.method == "ridge":
            return f"lambda={self.params['lambda']}"
        p, d, q = self.params["order"]
        return f"order=({p},{d},{q})"


@dataclass(eq=False)
class GridResult:
    """All cells plus the frame context needed to write reports."""

    cells: list
    warnings: list
    grid: ExperimentGrid
    train_dates: tuple
    test_dates: tuple
    y_train: np.ndarray
    y_test: np.ndarray
    corr_names: tuple
    corr: np.ndarray


def _worker_count(n_cells: int) -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "0")
    try:
        requested = int(raw)
    except ValueError:
        raise ValueError(
            f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
        ) from None
    if requested < 0:
        raise ValueError(f"{THREADS_ENV_VAR} must be >= 0, got {requested}")
    if requested == 0:
        requested = os.cpu_count() or 1
    return max(1, min(requested, n_cells))


def _run_cell(ordinal, method, spec, x_tr, y_tr, x_te, y_te,
              train_dates, test_dates, repetitions) -> GridCell:
    """Fit one cell, timing fit+forecast over the requested repetitions."""
    k_vars = x_tr.shape[1]
    if method == "nn":
        params = {
            "learning_rate": spec.learning_rate,
            "epochs": spec.epochs,
            "seed": spec.seed,
            "hidden_dim": spec.hidden_dim,
            "alpha": spec.alpha,
            "batch_mode": spec.batch_mode,
        }
    elif method == "ridge":
        params = {"lambda": spec}
    else:
        params = {"order": spec.as_tuple()}

    cell = GridCell(ordinal=ordinal, method=method, params=params)
    try:
        times = []
        fitted = fitted_actual = forecast = None
        fitted_dates = train_dates
        k_in = k_vars
        for _ in range(repetitions):
            t0 = time.perf_counter()
            if method == "nn":
                config = FFNetConfig(
                    input_dim=k_vars,
                    hidden_dim=spec.hidden_dim,
                    learning_rate=spec.learning_rate,
                    epochs=spec.epochs,
                    alpha=spec.alpha,
                    seed=spec.seed,
                    batch_mode=spec.batch_mode,
                )
                model = ffnet_mod.train(ffnet_mod.init_model(config), x_tr, y_tr)
                fitted = ffnet_mod.predict(model, x_tr)
                forecast = ffnet_mod.predict(model, x_te)
                fitted_actual = y_tr
                cell.loss_history = model.train_loss_history
            elif method == "ridge":
                model = ridge_mod.ridge_fit(x_tr, y_tr, spec)
                fitted = ridge_mod.ridge_predict(model, x_tr)
                forecast = ridge_mod.ridge_predict(model, x_te)
                fitted_actual = y_tr
            else:
                model = arima_mod.arima_fit(y_tr, spec)
                fitted = arima_mod.arima_fitted(model, y_tr)
                forecast = arima_mod.arima_forecast(model, y_te.size)
                offset = spec.d + spec.p
                fitted_actual = y_tr[offset:]
                fitted_dates = train_dates[offset:]
                k_in = spec.p + spec.q
            times.append(time.perf_counter() - t0)

        report_in = evaluate(fitted_actual, fitted, "in_sample", k_in)
        report_out = evaluate(y_te, forecast, "out_of_sample", k_in)
        cell.report_in = report_in
        cell.report_out = report_out
        cell.generalization = generalization(report_in.r2, report_out.r2).ratio
        cell.mean_runtime_s = float(np.mean(times))
        cell.fitted = fitted
        cell.fitted_dates = tuple(fitted_dates)
        cell.fitted_actual = fitted_actual
        cell.forecast = forecast
    except OilcastError as exc:
        cell.status = "error"
        cell.error = f"{type(exc).__name__}: {exc}"
        cell.report_in = cell.report_out = None
        cell.generalization = None
        cell.mean_runtime_s = None
    return cell


def run_grid(frame: TimeSeriesFrame, split_spec: SplitSpec,
             grid: ExperimentGrid) -> GridResult:
    """Run every cell of the grid on one frame.

    Normalization is fitted on the training segment and applied to both
    segments' independent columns; the target stays in raw units for all
    three methods. ARIMA sees only the raw target series.
    """
    train, test = split(frame, split_spec)
    norm = fit_normalization(train)
    train_n = apply_normalization(train, norm)
    test_n = apply_normalization(test, norm)
    x_tr, y_tr = extract_xy(train_n)
    x_te, y_te = extract_xy(test_n)

    specs = (
        [("nn", entry) for entry in grid.nn]
        + [("ridge", lam) for lam in grid.lambdas]
        + [("arima", order) for order in grid.arima]
    )
    stream = SplitMix64(grid.seed)
    derived_seeds = [stream.next_uint64() for _ in specs]
    resolved = []
    for ordinal, (method, spec) in enumerate(specs):
        if method == "nn" and spec.seed is None:
            spec = replace(spec, seed=derived_seeds[ordinal])
        resolved.append((method, spec))

    def task(ordinal: int) -> GridCell:
        method, spec = resolved[ordinal]
        return _run_cell(
            ordinal, method, spec, x_tr, y_tr, x_te, y_te,
            train.dates, test.dates, grid.timing_repetitions,
        )

    workers = _worker_count(len(resolved))
    if workers == 1:
        cells = [task(i) for i in range(len(resolved))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(task, range(len(resolved))))

    warnings = _rank_agreement_warnings(cells)
    corr = correlation_matrix(train)
    return GridResult(
        cells=cells,
        warnings=warnings,
        grid=grid,
        train_dates=train.dates,
        test_dates=test.dates,
        y_train=y_tr,
        y_test=y_te,
        corr_names=tuple(c.name for c in train.columns),
        corr=corr,
    )


def _rank_agreement_warnings(cells) -> list:
    """Check that RMSE and MAD pick the same best cell per method.

    Error-based selection uses RMSE; when MAD would rank a different
    cell best the disagreement is recorded as a warning string.
    """
    warnings = []
    methods = sorted({c.method for c in cells})
    for method in methods:
        ok = [c for c in cells if c.method == method and c.status == "ok"]
        if len(ok) < 2:
            continue
        for label, rms_of, mad_of in (
            (
                "in-sample",
                lambda c: c.report_in.rmse,
                lambda c: c.report_in.mad,
            ),
            (
                "out-of-sample",
                lambda c: c.report_out.rmse,
                lambda c: c.report_out.mad,
            ),
        ):
            by_rmse = min(ok, key=lambda c: (rms_of(c), c.ordinal))
            by_mad = min(ok, key=lambda c: (mad_of(c), c.ordinal))
            if by_rmse.ordinal != by_mad.ordinal:
                warnings.append(
                    f"{method}: {label} RMSE prefers cell {by_rmse.ordinal} "
                    f"({by_rmse.params_label()}) but MAD prefers cell "
                    f"{by_mad.ordinal} ({by_mad.params_label()})"
                )
    return warnings


def select_best(result: GridResult, criterion: str) -> dict:
    """Best ok cell per method under a criterion; ties go to the first.

    Criteria: in_sample_error and out_sample_error minimize RMSE,
    out_sample_r2 and generalization maximize their namesakes.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")

    def key(cell: GridCell):
        if criterion == "in_sample_error":
            return cell.report_in.rmse
        if criterion == "out_sample_error":
            return cell.report_out.rmse
        if criterion == "out_sample_r2":
            return -cell.report_out.r2
        return -cell.generalization

    best = {}
    any_ok = False
    for method in ("nn", "ridge", "arima"):
        ok = [c for c in result.cells if c.method == method and c.status == "ok"]
        if not ok:
            continue
        any_ok = True
        best[method] = min(ok, key=lambda c: (key(c), c.ordinal))
    if not any_ok:
        raise AllCellsFailed("every grid cell failed; nothing to select")
    return best


def _fmt(value) -> str:
    return "" if value is None else repr(value)


def write_grid_csv(result: GridResult, path) -> None:
    """One row per cell with the full metric set."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "method",
                "params",
                "rmse_in",
                "mad_in",
                "r2_in",
                "adj_r2_in",
                "rmse_out",
                "mad_out",
                "r2_out",
                "generalization",
                "mean_runtime_s",
                "status",
            ]
        )
        for cell in result.cells:
            if cell.status == "ok":
                row = [
                    cell.method,
                    cell.params_label(),
                    _fmt(cell.report_in.rmse),
                    _fmt(cell.report_in.mad),
                    _fmt(cell.report_in.r2),
                    _fmt(cell.report_in.adjusted_r2),
                    _fmt(cell.report_out.rmse),
                    _fmt(cell.report_out.mad),
                    _fmt(cell.report_out.r2),
                    _fmt(cell.generalization),
                    _fmt(cell.mean_runtime_s),
                    "ok",
                ]
            else:
                row = [cell.method, cell.params_label()] + [""] * 9 + [
                    f"error: {cell.error}"
                ]
            writer.writerow(row)


def _write_series_csv(path, dates, actual, predicted) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "actual", "predicted"])
        for date, a, p in zip(dates, actual, predicted):
            writer.writerow([str(date), repr(float(a)), repr(float(p))])


def emit_reports(result: GridResult, out_dir) -> list:
    """Write grid.csv, correlation.csv, best-cell series, and manifest.json.

    Returns the list of files written (relative names, manifest included).
    """
    os.makedirs(out_dir, exist_ok=True)
    files = []

    grid_path = os.path.join(out_dir, "grid.csv")
    write_grid_csv(result, grid_path)
    files.append("grid.csv")

    corr_path = os.path.join(out_dir, "correlation.csv")
    write_correlation_csv(result.corr_names, result.corr, corr_path)
    files.append("correlation.csv")

    for criterion in SERIES_CRITERIA:
        try:
            best = select_best(result, criterion)
        except AllCellsFailed:
            continue
        for method, cell in best.items():
            stem = f"best_{criterion}_{method}"
            in_name = f"{stem}_in_sample.csv"
            _write_series_csv(
                os.path.join(out_dir, in_name),
                cell.fitted_dates,
                cell.fitted_actual,
                cell.fitted,
            )
            files.append(in_name)
            out_name = f"{stem}_out_sample.csv"
            _write_series_csv(
                os.path.join(out_dir, out_name),
                result.test_dates,
                result.y_test,
                cell.forecast,
            )
            files.append(out_name)

    manifest = {
        "files": files + ["manifest.json"],
        "n_cells": len(result.cells),
        "n_failed": sum(1 for c in result.cells if c.status != "ok"),
        "warnings": result.warnings,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    files.append("manifest.json")
    return files
