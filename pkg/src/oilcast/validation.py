"""Input validation helpers shared by the estimator and functional APIs.

These normalize user input to float64 numpy arrays and raise the package's
error types instead of numpy's, so contracts stay uniform across modules.
"""

import numpy as np

from .exceptions import DimensionMismatch, EmptyInput, LengthMismatch


def as_matrix(a, name: str = "a") -> np.ndarray:
    """Coerce to a 2-D float64 array (C order)."""
    out = np.asarray(a, dtype=float)
    if out.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={out.ndim}")
    return np.ascontiguousarray(out)


def as_vector(v, name: str = "v") -> np.ndarray:
    """Coerce to a 1-D float64 array."""
    out = np.asarray(v, dtype=float)
    if out.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got ndim={out.ndim}")
    return out


def require_nonempty(v: np.ndarray, name: str = "v") -> np.ndarray:
    if v.size == 0:
        raise EmptyInput(f"{name} is empty")
    return v


def require_same_length(a: np.ndarray, b: np.ndarray,
                        name_a: str = "a", name_b: str = "b") -> None:
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(
            f"{name_a} has length {a.shape[0]} but {name_b} has length {b.shape[0]}"
        )


def require_finite(arr: np.ndarray, name: str = "array") -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
