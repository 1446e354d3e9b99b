"""Exception types raised by the public API.

Every domain failure raises a subclass of :class:`OilcastError`, so callers
(and the CLI, which maps them to exit code 1) can catch one base class.
Programming errors such as passing a string where a number is required are
left to the usual built-in exceptions.
"""


class OilcastError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(OilcastError):
    """Array shapes are incompatible with the requested operation."""


class LengthMismatch(DimensionMismatch):
    """Paired vectors do not have equal length."""


class EmptyInput(OilcastError):
    """An operation that needs at least one element received none."""


class InvalidRange(OilcastError):
    """A (lo, hi) interval with lo >= hi, or a similarly empty range."""


class NotPositiveDefinite(OilcastError):
    """A matrix required to be SPD produced a non-positive Cholesky pivot."""


class SingularSystem(OilcastError):
    """A linear system's normal equations are rank deficient."""


class NonFiniteObjective(OilcastError):
    """An objective function returned NaN or infinity where a finite
    value was required."""


# --- dataset errors ---------------------------------------------------------


class SchemaError(OilcastError):
    """Base for schema and CSV-shape violations."""


class MissingColumn(SchemaError):
    """CSV header does not match the schema's column names."""


class NonMonotonicDates(SchemaError):
    """Dates in the file are not strictly increasing."""


class GapInDates(SchemaError):
    """Consecutive dates are not consecutive calendar months."""


class UnparseableCell(SchemaError):
    """A data cell could not be parsed as a finite number."""

    def __init__(self, row: int, col: int, text: str = ""):
        self.row = row
        self.col = col
        super().__init__(
            f"cell at data row {row}, column {col} is not a finite number"
            + (f": {text!r}" if text else "")
        )


class MissingValue(SchemaError):
    """A data cell is empty or NaN; every cell must hold a finite value."""

    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"missing value at data row {row}, column {col}")


class ConstantColumn(OilcastError):
    """A column with zero variance where variation is required."""

    def __init__(self, col):
        self.col = col
        super().__init__(f"column {col!r} is constant")


class UnknownColumn(OilcastError):
    """A referenced column does not exist in the frame."""


class SplitOutOfRange(OilcastError):
    """A train/test split date falls outside the usable range."""


# --- model errors -----------------------------------------------------------


class DivergedToNonFinite(OilcastError):
    """Training drove a weight or the loss to NaN or infinity."""


class SeriesTooShort(OilcastError):
    """The series has too few observations for the requested model."""


class InsufficientAnchor(OilcastError):
    """Not enough trailing raw values to undo a differencing transform."""


class ConstantSeries(OilcastError):
    """The series is constant, so correlation-based quantities are undefined."""


class NumericalBreakdown(OilcastError):
    """An internal recursion lost positive definiteness and cannot proceed."""


class OptimizerFailed(OilcastError):
    """The simplex optimizer could not produce a usable minimizer."""


# --- evaluation errors ------------------------------------------------------


class ConstantActuals(OilcastError):
    """R-squared is undefined when the evaluated actuals are constant."""


class DegenerateDof(OilcastError):
    """Adjusted R-squared needs n > k + 1 degrees of freedom."""


class ZeroInSampleR2(OilcastError):
    """Generalization ratio is undefined when in-sample R-squared is zero."""


class DegenerateLossDifferential(OilcastError):
    """The two forecasts have an identically zero (or zero-variance) loss
    differential, so the test statistic is undefined."""


class TooShort(OilcastError):
    """Too few observations for a meaningful test statistic."""


# --- harness errors ---------------------------------------------------------


class AllCellsFailed(OilcastError):
    """Every cell of the experiment grid errored; nothing to select from."""
