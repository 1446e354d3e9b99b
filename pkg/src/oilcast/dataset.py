"""Monthly multivariate series: ingestion, validation, and transforms.

A :class:`TimeSeriesFrame` is an immutable table of monthly observations:
one strictly contiguous date column plus K named variable columns, exactly
one of which is the forecast target. The canonical layout is 12 independent
variables (three each across the supply, demand, balances, and
financial_markets categories) plus the target, but any cardinality with at
least one independent column is accepted.

CSV layout: header ``date,<name1>,...,<nameK>``, dates formatted YYYY-MM,
every cell a finite number. A JSON schema file (list of variable specs)
names the columns; a default 13-variable schema ships with the package.
"""

import csv
import importlib.resources
import json
import re
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    ConstantColumn,
    DimensionMismatch,
    EmptyInput,
    GapInDates,
    MissingColumn,
    MissingValue,
    NonMonotonicDates,
    SchemaError,
    SplitOutOfRange,
    UnknownColumn,
    UnparseableCell,
)

CATEGORIES = ("supply", "demand", "balances", "financial_markets", "target")

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True, order=True)
class Month:
    """A calendar month, ordered chronologically."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @staticmethod
    def from_string(text: str) -> "Month":
        m = _MONTH_RE.match(text.strip())
        if m is None:
            raise ValueError(f"date {text!r} is not in YYYY-MM form")
        return Month(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def add_months(self, k: int) -> "Month":
        idx = self.year * 12 + (self.month - 1) + k
        return Month(idx // 12, idx % 12 + 1)

    def next_month(self) -> "Month":
        return self.add_months(1)

    @staticmethod
    def months_between(a: "Month", b: "Month") -> int:
        """Signed count of months from a to b (0 when equal)."""
        return (b.year - a.year) * 12 + (b.month - a.month)


@dataclass(frozen=True)
class VariableSpec:
    """Name, category, and provenance of one column."""

    name: str
    category: str
    description: str = ""
    source_tag: str = "OTHER"

    def __post_init__(self):
        if not self.name:
            raise SchemaError("variable name must be non-empty")
        if self.category not in CATEGORIES:
            raise SchemaError(
                f"category {self.category!r} not one of {CATEGORIES}"
            )


def load_schema(path) -> list[VariableSpec]:
    """Read a schema JSON file (list of variable-spec objects)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise SchemaError("schema JSON must be a list of variable specs")
    specs = [
        VariableSpec(
            name=entry["name"],
            category=entry["category"],
            description=entry.get("description", ""),
            source_tag=entry.get("source_tag", "OTHER"),
        )
        for entry in raw
    ]
    _check_schema(specs)
    return specs


def save_schema(specs, path) -> None:
    payload = [
        {
            "name": s.name,
            "category": s.category,
            "description": s.description,
            "source_tag": s.source_tag,
        }
        for s in specs
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def default_schema() -> list[VariableSpec]:
    """The packaged 13-variable schema (12 drivers + one target)."""
    ref = importlib.resources.files("oilcast").joinpath(
        "data/default_schema.json"
    )
    raw = json.loads(ref.read_text(encoding="utf-8"))
    specs = [
        VariableSpec(
            name=entry["name"],
            category=entry["category"],
            description=entry.get("description", ""),
            source_tag=entry.get("source_tag", "OTHER"),
        )
        for entry in raw
    ]
    _check_schema(specs)
    return specs


def _check_schema(specs) -> None:
    if not specs:
        raise SchemaError("schema is empty")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise SchemaError("schema has duplicate variable names")
    targets = [s for s in specs if s.category == "target"]
    if len(targets) != 1:
        raise SchemaError(
            f"schema must have exactly one target column, found {len(targets)}"
        )
    if len(specs) < 2:
        raise SchemaError("schema needs at least one independent column")


@dataclass(frozen=True, eq=False)
class TimeSeriesFrame:
    """Immutable monthly table: contiguous dates, finite float values."""

    dates: tuple
    columns: tuple
    values: np.ndarray = field(repr=False)
    target_index: int

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "columns", tuple(self.columns))
        _check_schema(self.columns)
        if values.ndim != 2:
            raise DimensionMismatch("values must be 2-D")
        if values.shape != (len(self.dates), len(self.columns)):
            raise DimensionMismatch(
                f"values shape {values.shape} does not match "
                f"{len(self.dates)} dates x {len(self.columns)} columns"
            )
        if len(self.dates) == 0:
            raise EmptyInput("frame has no rows")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise NonMonotonicDates(f"{cur} does not follow {prev}")
            if Month.months_between(prev, cur) != 1:
                raise GapInDates(f"gap between {prev} and {cur}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise MissingValue(int(bad[0]), int(bad[1]) + 1)
        expected_target = [
            i for i, c in enumerate(self.columns) if c.category == "target"
        ][0]
        if self.target_index != expected_target:
            raise SchemaError(
                f"target_index {self.target_index} does not match schema "
                f"(target column is {expected_target})"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_rows(self) -> int:
        return len(self.dates)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def target_name(self) -> str:
        return self.columns[self.target_index].name

    @property
    def independent_indices(self) -> tuple:
        return tuple(
            i for i in range(self.n_cols) if i != self.target_index
        )

    def column_index(self, name: str) -> int:
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise UnknownColumn(f"no column named {name!r}")

    def column_values(self, name: str) -> np.ndarray:
        return self.values[:, self.column_index(name)]

    def target_values(self) -> np.ndarray:
        return self.values[:, self.target_index]

    def category_counts(self) -> dict:
        """Counts of independent columns per category (target excluded)."""
        counts = {c: 0 for c in CATEGORIES if c != "target"}
        for i, col in enumerate(self.columns):
            if i != self.target_index:
                counts[col.category] = counts.get(col.category, 0) + 1
        return counts

    def slice_rows(self, start: int, stop: int) -> "TimeSeriesFrame":
        return TimeSeriesFrame(
            dates=self.dates[start:stop],
            columns=self.columns,
            values=self.values[start:stop].copy(),
            target_index=self.target_index,
        )


def _parse_cell(text: str, row: int, col: int) -> float:
    stripped = text.strip()
    if stripped == "":
        raise MissingValue(row, col)
    try:
        value = float(stripped)
    except ValueError as exc:
        raise UnparseableCell(row, col, stripped) from exc
    if np.isnan(value):
        raise MissingValue(row, col)
    if not np.isfinite(value):
        raise UnparseableCell(row, col, stripped)
    return value


def load_csv(path, schema=None) -> TimeSeriesFrame:
    """Read a monthly CSV against a schema (default: packaged schema).

    Raises MissingColumn on a header mismatch, NonMonotonicDates /
    GapInDates on broken date sequences, and UnparseableCell /
    MissingValue (with 0-based data row and CSV column indices, date
    column = 0) on bad cells.
    """
    specs = list(schema) if schema is not None else default_schema()
    _check_schema(specs)
    expected_header = ["date"] + [s.name for s in specs]

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInput(f"{path} is empty") from None
        if [h.strip() for h in header] != expected_header:
            raise MissingColumn(
                f"header {header!r} does not match schema columns "
                f"{expected_header!r}"
            )

        dates: list[Month] = []
        rows: list[list[float]] = []
        for row_idx, record in enumerate(reader):
            if len(record) != len(expected_header):
                raise MissingColumn(
                    f"data row {row_idx} has {len(record)} cells, "
                    f"expected {len(expected_header)}"
                )
            try:
                month = Month.from_string(record[0])
            except ValueError as exc:
                raise UnparseableCell(row_idx, 0, record[0]) from exc
            if dates:
                if month <= dates[-1]:
                    raise NonMonotonicDates(
                        f"{month} at data row {row_idx} does not follow "
                        f"{dates[-1]}"
                    )
                if Month.months_between(dates[-1], month) != 1:
                    raise GapInDates(
                        f"gap between {dates[-1]} and {month} at data row "
                        f"{row_idx}"
                    )
            dates.append(month)
            rows.append(
                [
                    _parse_cell(cell, row_idx, col_idx + 1)
                    for col_idx, cell in enumerate(record[1:])
                ]
            )

    if not rows:
        raise EmptyInput(f"{path} has a header but no data rows")
    target_index = [
        i for i, s in enumerate(specs) if s.category == "target"
    ][0]
    return TimeSeriesFrame(
        dates=tuple(dates),
        columns=tuple(specs),
        values=np.array(rows, dtype=float),
        target_index=target_index,
    )


@dataclass(frozen=True)
class SplitSpec:
    """First month of the held-out test segment."""

    test_start: Month


def split(frame: TimeSeriesFrame, spec: SplitSpec):
    """Partition rows into (train, test) at spec.test_start.

    Train takes rows strictly before test_start, test the rest. The split
    must leave at least two rows on each side.
    """
    first = frame.dates[0]
    cut = Month.months_between(first, spec.test_start)
    if cut < 2 or frame.n_rows - cut < 2:
        raise SplitOutOfRange(
            f"test_start {spec.test_start} leaves {cut} train rows and "
            f"{frame.n_rows - cut} test rows; need >= 2 on each side"
        )
    return frame.slice_rows(0, cut), frame.slice_rows(cut, frame.n_rows)


@dataclass(frozen=True, eq=False)
class NormalizationParams:
    """Per-column affine ranges fitted on a training frame.

    Applies only to independent columns; the target is never rescaled.
    """

    column_names: tuple
    column_indices: tuple
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        mins = np.asarray(self.mins, dtype=float)
        maxs = np.asarray(self.maxs, dtype=float)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "column_indices", tuple(self.column_indices))
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)
        k = len(self.column_names)
        if not (len(self.column_indices) == mins.size == maxs.size == k):
            raise DimensionMismatch("normalization fields disagree on length")
        if np.any(maxs <= mins):
            raise ConstantColumn(
                self.column_names[int(np.argmax(maxs <= mins))]
            )


def fit_normalization(frame: TimeSeriesFrame) -> NormalizationParams:
    """Min-max ranges of each independent column of a (training) frame."""
    idx = frame.independent_indices
    mins = frame.values[:, idx].min(axis=0)
    maxs = frame.values[:, idx].max(axis=0)
    for j, i in enumerate(idx):
        if maxs[j] == mins[j]:
            raise ConstantColumn(frame.columns[i].name)
    return NormalizationParams(
        column_names=tuple(frame.columns[i].name for i in idx),
        column_indices=idx,
        mins=mins,
        maxs=maxs,
    )


def apply_normalization(
    frame: TimeSeriesFrame, params: NormalizationParams
) -> TimeSeriesFrame:
    """Rescale independent columns to (x - min) / (max - min).

    Values fitted on a training frame may map test rows outside [0, 1];
    that is expected. The target column passes through untouched.
    """
    for name, idx in zip(params.column_names, params.column_indices):
        if idx >= frame.n_cols or frame.columns[idx].name != name:
            raise UnknownColumn(
                f"normalization column {name!r} (index {idx}) not in frame"
            )
        if idx == frame.target_index:
            raise UnknownColumn(
                f"normalization must not touch the target column {name!r}"
            )
    values = frame.values.copy()
    cols = list(params.column_indices)
    values[:, cols] = (values[:, cols] - params.mins) / (
        params.maxs - params.mins
    )
    return TimeSeriesFrame(
        dates=frame.dates,
        columns=frame.columns,
        values=values,
        target_index=frame.target_index,
    )


def extract_xy(frame: TimeSeriesFrame):
    """Split a frame into (X, y): independent columns and target vector."""
    idx = list(frame.independent_indices)
    return frame.values[:, idx].copy(), frame.target_values().copy()


def correlation_matrix(frame: TimeSeriesFrame) -> np.ndarray:
    """Pearson correlations of all columns (target included).

    Exactly symmetric with unit diagonal; entries clipped to [-1, 1].
    """
    values = frame.values
    if values.shape[0] < 2:
        raise EmptyInput("need at least two rows for correlations")
    centered = values - values.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    for i, n in enumerate(norms):
        if n == 0.0:
            raise ConstantColumn(frame.columns[i].name)
    corr = (centered.T @ centered) / np.outer(norms, norms)
    corr = (corr + corr.T) / 2.0
    corr = np.clip(corr, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def write_correlation_csv(names, matrix, path) -> None:
    """Write a labeled correlation matrix with 6-significant-digit cells."""
    matrix = np.asarray(matrix, dtype=float)
    names = list(names)
    if matrix.shape != (len(names), len(names)):
        raise DimensionMismatch(
            f"matrix shape {matrix.shape} does not match {len(names)} names"
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + names)
        for name, row in zip(names, matrix):
            writer.writerow([name] + [f"{v:.6g}" for v in row])
