"""Command-line front end.

Subcommands: ingest, corr, acf, train, forecast, evaluate, dm, grid.
Exit codes: 0 on success, 1 on a domain or I/O error (message on
stderr), 2 on a usage error (argparse prints the contract).

Randomness is controlled entirely by --seed flags; two invocations with
the same arguments produce identical outputs apart from wall-clock
timings.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import arima as arima_mod
from . import ffnet as ffnet_mod
from . import ridge as ridge_mod
from .arima import ArimaModel, ArimaOrder
from .dataset import (
    Month,
    NormalizationParams,
    SplitSpec,
    apply_normalization,
    correlation_matrix,
    extract_xy,
    fit_normalization,
    load_csv,
    load_schema,
    write_correlation_csv,
)
from .exceptions import EmptyInput, OilcastError, UnknownColumn, UnparseableCell
from .ffnet import FFNetConfig, FFNetModel
from .grid import CANONICAL_TEST_START, ExperimentGrid, emit_reports, run_grid
from .metrics import dm_test, evaluate, report_payload, write_report_json
from .modelio import load_model, save_model
from .ridge import RidgeModel

DEFAULT_SEED = 0


def _month_arg(text: str) -> Month:
    try:
        return Month.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _order_arg(text: str) -> ArimaOrder:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"order must be three comma-separated integers p,d,q, got {text!r}"
        )
    try:
        p, d, q = (int(part) for part in parts)
        return ArimaOrder(p, d, q)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_frame(args):
    schema = load_schema(args.schema) if args.schema else None
    return load_csv(args.data, schema=schema)


def _load_error_file(path) -> np.ndarray:
    """Read a one-float-per-line file."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise UnparseableCell(lineno, 0, text) from None
    if not values:
        raise EmptyInput(f"no numbers in {path}")
    return np.asarray(values)


def _cmd_ingest(args) -> int:
    frame = _load_frame(args)
    counts = frame.category_counts()
    print(f"rows: {frame.n_rows}")
    print(f"columns: {frame.n_cols}")
    print(f"dates: {frame.dates[0]} .. {frame.dates[-1]}")
    print(f"target: {frame.target_name}")
    for category in sorted(counts):
        print(f"independent[{category}]: {counts[category]}")
    return 0


def _cmd_corr(args) -> int:
    frame = _load_frame(args)
    corr = correlation_matrix(frame)
    names = [c.name for c in frame.columns]
    write_correlation_csv(names, corr, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_acf(args) -> int:
    frame = _load_frame(args)
    column = args.column or frame.target_name
    series = frame.column_values(column)
    series = arima_mod.difference(series, args.diff)
    arima_mod.write_correlogram_csv(
        arima_mod.acf(series, args.max_lag), args.out_acf
    )
    arima_mod.write_correlogram_csv(
        arima_mod.pacf(series, args.max_lag), args.out_pacf
    )
    print(f"wrote {args.out_acf}")
    print(f"wrote {args.out_pacf}")
    return 0


def _cmd_train(args) -> int:
    frame = _load_frame(args)
    if args.model == "arima":
        model = arima_mod.arima_fit(frame.target_values(), args.order)
        save_model(model, args.out)
        print(f"wrote {args.out}")
        return 0

    norm = fit_normalization(frame)
    normalized = apply_normalization(frame, norm)
    x, y = extract_xy(normalized)
    if args.model == "nn":
        config = FFNetConfig(
            input_dim=x.shape[1],
            hidden_dim=args.hidden_dim,
            learning_rate=args.lr,
            epochs=args.epochs,
            alpha=args.alpha,
            seed=args.seed,
            batch_mode=args.batch_mode,
        )
        model = ffnet_mod.train(ffnet_mod.init_model(config), x, y)
    else:
        model = ridge_mod.ridge_fit(x, y, args.lam)
    norm_payload = {
        name: (lo, hi)
        for name, lo, hi in zip(norm.column_names, norm.mins, norm.maxs)
    }
    save_model(model, args.out, normalization=norm_payload)
    print(f"wrote {args.out}")
    return 0


def _norm_params_for(frame, norm_payload) -> NormalizationParams:
    """Rebuild normalization params against a frame's column layout."""
    names, indices, mins, maxs = [], [], [], []
    for idx in frame.independent_indices:
        name = frame.columns[idx].name
        if name not in norm_payload:
            raise UnknownColumn(
                f"model file has no normalization range for column {name!r}"
            )
        lo, hi = norm_payload[name]
        names.append(name)
        indices.append(idx)
        mins.append(lo)
        maxs.append(hi)
    return NormalizationParams(
        column_names=tuple(names),
        column_indices=tuple(indices),
        mins=np.asarray(mins),
        maxs=np.asarray(maxs),
    )


def _cmd_forecast(args) -> int:
    model, norm_payload = load_model(args.model_file)
    rows = []
    if isinstance(model, ArimaModel):
        if args.horizon is None:
            raise OilcastError("--horizon is required for an arima model file")
        values = arima_mod.arima_forecast(model, args.horizon)
        rows = [(str(step), value) for step, value in enumerate(values, start=1)]
        header = "step"
    else:
        if args.data is None:
            raise OilcastError(
                "--data is required for nn and ridge model files"
            )
        frame = _load_frame(args)
        if norm_payload is not None:
            frame = apply_normalization(
                frame, _norm_params_for(frame, norm_payload)
            )
        x, _ = extract_xy(frame)
        if isinstance(model, FFNetModel):
            values = ffnet_mod.predict(model, x)
        elif isinstance(model, RidgeModel):
            values = ridge_mod.ridge_predict(model, x)
        else:
            raise OilcastError(f"cannot forecast with {type(model).__name__}")
        rows = [(str(date), value) for date, value in zip(frame.dates, values)]
        header = "date"

    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"{header},predicted\n")
        for label, value in rows:
            fh.write(f"{label},{float(value)!r}\n")
    print(f"wrote {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    actual = _load_error_file(args.actual)
    predicted = _load_error_file(args.predicted)
    report = evaluate(actual, predicted, args.kind, args.k)
    payload = report_payload(report)
    print(json.dumps(payload, indent=2))
    if args.out:
        write_report_json(report, args.out)
    return 0


def _cmd_dm(args) -> int:
    errors_a = _load_error_file(args.errors_a)
    errors_b = _load_error_file(args.errors_b)
    result = dm_test(errors_a, errors_b, h=args.h)
    print(json.dumps(report_payload(result), indent=2))
    if args.out:
        write_report_json(result, args.out)
    return 0


def _cmd_grid(args) -> int:
    frame = _load_frame(args)
    grid = (
        ExperimentGrid.from_json(args.spec)
        if args.spec
        else ExperimentGrid.canonical()
    )
    if args.seed is not None:
        grid = replace(grid, seed=args.seed)
    test_start = args.test_start or grid.test_start or CANONICAL_TEST_START
    result = run_grid(frame, SplitSpec(test_start=test_start), grid)
    files = emit_reports(result, args.out)
    failed = sum(1 for c in result.cells if c.status != "ok")
    print(f"cells: {len(result.cells)} ({failed} failed)")
    for warning in result.warnings:
        print(f"warning: {warning}")
    for name in files:
        print(f"wrote {name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oilcast",
        description="Forecasting toolkit: three models, one benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data(p):
        p.add_argument("--data", required=True, help="time-series CSV")
        p.add_argument("--schema", help="schema JSON (default: built-in)")

    p = sub.add_parser("ingest", help="validate a CSV and print frame stats")
    add_data(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("corr", help="write the Pearson correlation matrix")
    add_data(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_corr)

    p = sub.add_parser("acf", help="write acf/pacf correlograms of one column")
    add_data(p)
    p.add_argument("--column", help="column name (default: the target)")
    p.add_argument("--diff", type=int, choices=(0, 1, 2), default=0,
                   help="differencing order applied first")
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--out-acf", required=True, help="acf output CSV")
    p.add_argument("--out-pacf", required=True, help="pacf output CSV")
    p.set_defaults(func=_cmd_acf)

    p = sub.add_parser("train", help="fit one model and save a model file")
    add_data(p)
    p.add_argument("--model", required=True, choices=("nn", "ridge", "arima"))
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="nn weight-initialization seed")
    p.add_argument("--lr", type=float, default=1e-4, help="nn learning rate")
    p.add_argument("--epochs", type=int, default=100, help="nn epochs")
    p.add_argument("--hidden-dim", type=int, default=12, help="nn layer width")
    p.add_argument("--alpha", type=float, default=1.0, help="nn elu alpha")
    p.add_argument("--batch-mode", choices=("per_sample", "full_batch"),
                   default="per_sample", help="nn update granularity")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="ridge penalty")
    p.add_argument("--order", type=_order_arg, default=ArimaOrder(1, 1, 2),
                   help="arima order as p,d,q")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("forecast", help="predict from a saved model file")
    p.add_argument("--model-file", required=True)
    p.add_argument("--data", help="CSV of rows to predict (nn/ridge)")
    p.add_argument("--schema", help="schema JSON (default: built-in)")
    p.add_argument("--horizon", type=int, help="steps ahead (arima)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("evaluate", help="score predictions against actuals")
    p.add_argument("--actual", required=True, help="one float per line")
    p.add_argument("--predicted", required=True, help="one float per line")
    p.add_argument("--kind", choices=("in_sample", "out_of_sample"),
                   default="out_of_sample")
    p.add_argument("--k", type=int, default=0,
                   help="regressor count for adjusted r2 (in_sample)")
    p.add_argument("--out", help="also write the report JSON here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("dm", help="compare two forecast error series")
    p.add_argument("--errors-a", required=True, help="one float per line")
    p.add_argument("--errors-b", required=True, help="one float per line")
    p.add_argument("--h", type=int, default=1, help="forecast horizon")
    p.add_argument("--out", help="also write the result JSON here")
    p.set_defaults(func=_cmd_dm)

    p = sub.add_parser("grid", help="run a hyperparameter grid and emit reports")
    add_data(p)
    p.add_argument("--spec", help="grid JSON (default: the canonical 18 cells)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--test-start", type=_month_arg,
                   help="first out-of-sample month (default 2017-01)")
    p.add_argument("--seed", type=int, help="override the grid seed")
    p.set_defaults(func=_cmd_grid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OilcastError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
