"""Shared synthetic-frame builders for the test suite."""

import numpy as np
import pytest

from oilcast import Month, TimeSeriesFrame, VariableSpec

START = Month(2010, 1)


def small_schema(k_independent=3):
    """k independent columns across rotating categories plus a target."""
    cats = ("supply", "demand", "balances", "financial_markets")
    cols = [
        VariableSpec(name=f"x{i}", category=cats[i % len(cats)])
        for i in range(k_independent)
    ]
    cols.append(VariableSpec(name="y", category="target"))
    return cols


def make_frame(n_rows, k_independent=3, seed=0, start=START):
    """Random positive frame; columns guaranteed non-constant."""
    rng = np.random.default_rng(seed)
    cols = small_schema(k_independent)
    values = rng.uniform(1.0, 100.0, size=(n_rows, k_independent + 1))
    values += np.linspace(0.0, 1.0, n_rows)[:, None]  # forbid constants
    return TimeSeriesFrame(
        dates=tuple(start.add_months(i) for i in range(n_rows)),
        columns=tuple(cols),
        values=values,
        target_index=k_independent,
    )


def linear_frame(n_train, n_test, k_independent=12, seed=0, start=START):
    """Noiseless frame: target is linear in the train-normalized inputs.

    Returns (frame, test_start_month, beta). Because the target is built
    from inputs already mapped through the train min-max ranges, a
    no-intercept linear fit on the normalized train inputs is exact on
    both partitions.
    """
    rng = np.random.default_rng(seed)
    n = n_train + n_test
    x_raw = rng.uniform(10.0, 110.0, size=(n, k_independent))
    mins = x_raw[:n_train].min(axis=0)
    maxs = x_raw[:n_train].max(axis=0)
    beta = rng.uniform(-1.0, 1.0, size=k_independent)
    y = ((x_raw - mins) / (maxs - mins)) @ beta

    cols = small_schema(k_independent)
    values = np.column_stack([x_raw, y])
    frame = TimeSeriesFrame(
        dates=tuple(start.add_months(i) for i in range(n)),
        columns=tuple(cols),
        values=values,
        target_index=k_independent,
    )
    return frame, start.add_months(n_train), beta


def write_frame_csv(frame, path):
    """Serialize a frame back to the input CSV format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("date," + ",".join(c.name for c in frame.columns) + "\n")
        for i, date in enumerate(frame.dates):
            cells = ",".join(repr(float(v)) for v in frame.values[i])
            fh.write(f"{date},{cells}\n")


@pytest.fixture
def tiny_frame():
    return make_frame(24, k_independent=3, seed=11)
