"""Error norms for FOM/ROM comparisons."""

import numpy as np

from ..errors import ShapeMismatch


def l1_error(a: np.ndarray, b: np.ndarray, dx: float) -> float:
    """dx-weighted absolute column sum: sum_i |a_i - b_i| * dx."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"length mismatch {a.shape} vs {b.shape}")
    return float(np.sum(np.abs(a - b)) * dx)


def linf_error(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"length mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0
