"""Dense linear algebra on float64 row-major arrays.

Thin shims over numpy/LAPACK that enforce this package's shape and
definiteness contracts. Matrices are plain 2-D numpy arrays.
"""

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatch, NotPositiveDefinite
from .validation import as_matrix

_SYMMETRY_RTOL = 1e-10


def matmul(a, b) -> np.ndarray:
    """Matrix product a @ b with explicit inner-dimension checking."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f"inner dimensions differ: {a.shape} @ {b.shape}"
        )
    return a @ b


def cholesky_solve(a, b) -> np.ndarray:
    """Solve a x = b for symmetric positive definite a.

    Factorizes a = L L^T and back-substitutes; raises NotPositiveDefinite
    when the factorization hits a non-positive pivot. b may be a vector or
    a matrix of right-hand sides; the solution matches b's shape.
    """
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"a must be square, got {a.shape}")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale > 0 and np.max(np.abs(a - a.T)) > _SYMMETRY_RTOL * scale:
        raise ValueError("a is not symmetric within tolerance")

    b_arr = np.asarray(b, dtype=float)
    vector_rhs = b_arr.ndim == 1
    if vector_rhs:
        b2 = b_arr[:, None]
    elif b_arr.ndim == 2:
        b2 = b_arr
    else:
        raise DimensionMismatch(f"b must be 1-D or 2-D, got ndim={b_arr.ndim}")
    if b2.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"a is {a.shape} but b has {b2.shape[0]} rows"
        )

    try:
        lower = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    y = scipy.linalg.solve_triangular(lower, b2, lower=True)
    x = scipy.linalg.solve_triangular(lower.T, y, lower=False)
    return x[:, 0] if vector_rhs else x
