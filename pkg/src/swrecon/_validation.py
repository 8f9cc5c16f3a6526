"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array


def check_profile(values, name: str, n: int = None, nonnegative: bool = False) -> np.ndarray:
    """Return ``values`` as a finite 1D float array, optionally of length ``n``."""
    arr = check_array(np.atleast_1d(values), ensure_2d=False, dtype=np.float64,
                      input_name=name)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if n is not None and arr.size != n:
        raise ValueError(f"{name} must have length {n}, got {arr.size}")
    if nonnegative and np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")
    return arr


def check_state(Q, n_fields: int, n_cells: int, mass_fields=(0,)) -> np.ndarray:
    """Validate a ``(n_fields, n_cells)`` state with nonnegative mass-like rows."""
    arr = check_array(Q, dtype=np.float64, input_name="Q", ensure_min_samples=1)
    if arr.shape != (n_fields, n_cells):
        raise ValueError(f"state must have shape ({n_fields}, {n_cells}), got {arr.shape}")
    if np.any(arr[list(mass_fields)] < 0):
        raise ValueError("mass-like fields must be nonnegative")
    return arr


def check_interfaces(x) -> np.ndarray:
    x = check_profile(x, "interfaces")
    if x.size < 2 or np.any(np.diff(x) <= 0):
        raise ValueError("interfaces must be strictly increasing with at least two entries")
    return x
