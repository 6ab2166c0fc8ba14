"""Input validation helpers shared by the solvers and estimators."""

from __future__ import annotations

import numpy as np

MASS_TOL = 1e-12


def check_density(rho, size: int, interior: bool = False, name: str = "rho") -> np.ndarray:
    """Validate a probability vector and return it as a float64 copy.

    ``interior=True`` additionally requires strictly positive mass
    everywhere (needed whenever log-densities enter the dynamics).
    """
    arr = np.asarray(rho, dtype=float)
    if arr.ndim != 1 or arr.size != size:
        raise ValueError(f"{name} must be a vector of length {size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    if interior:
        if np.any(arr <= 0.0):
            raise ValueError(f"{name} must be strictly positive")
    elif np.any(arr < 0.0):
        raise ValueError(f"{name} must be nonnegative")
    total = float(arr.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise ValueError(f"{name} must sum to 1 (got {total!r})")
    return arr.copy()


def check_beta(beta, allow_zero: bool = True) -> float:
    b = float(beta)
    if not np.isfinite(b) or b < 0.0 or (b == 0.0 and not allow_zero):
        kind = "nonnegative" if allow_zero else "positive"
        raise ValueError(f"beta must be {kind} (got {beta!r})")
    return b


def check_positive(value, name: str) -> float:
    v = float(value)
    if not np.isfinite(v) or v <= 0.0:
        raise ValueError(f"{name} must be positive (got {value!r})")
    return v


def uniform_density(size: int) -> np.ndarray:
    return np.full(size, 1.0 / size)
