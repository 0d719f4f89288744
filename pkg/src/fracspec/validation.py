"""Input validation helpers used at every public entry point."""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

__all__ = ["validate_order", "as_finite_array", "validate_positive"]


def validate_order(alpha: float, *, classical: bool = False) -> float:
    """Validate a fractional order.

    Orders live in the open interval (0, 1).  Operations that document a
    classical limit pass ``classical=True`` to additionally admit alpha = 1.
    """
    a = float(alpha)
    if not np.isfinite(a):
        raise ParameterError("order must be finite")
    hi_ok = a < 1.0 or (classical and a == 1.0)
    if not (a > 0.0 and hi_ok):
        rng = "(0, 1]" if classical else "(0, 1)"
        raise ParameterError(f"order must lie in {rng}, got {a!r}")
    return a


def as_finite_array(values, name: str = "array") -> np.ndarray:
    """Coerce to a 1-D float array and reject non-finite entries."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ParameterError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise ParameterError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite values")
    return arr


def validate_positive(value: float, name: str) -> float:
    v = float(value)
    if not np.isfinite(v) or v <= 0.0:
        raise ParameterError(f"{name} must be a positive finite real, got {value!r}")
    return v
