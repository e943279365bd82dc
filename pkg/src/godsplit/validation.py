"""Input validation helpers shared by the estimator-style front ends."""

from __future__ import annotations

import numpy as np

from .model import CodeModel


def check_code_model(x) -> CodeModel:
    if not isinstance(x, CodeModel):
        raise TypeError(f"expected a CodeModel, got {type(x).__name__}; load one with godsplit.load_model")
    return x


def check_similarity_matrix(x, atol: float = 1e-8) -> np.ndarray:
    """Validate a square symmetric pairwise-similarity matrix with n >= 2 rows."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square similarity matrix, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError("similarity matrix needs at least 2 rows (a 1-method class has one responsibility)")
    if not np.isfinite(arr).all():
        raise ValueError("similarity matrix contains non-finite values")
    if not np.allclose(arr, arr.T, atol=atol):
        raise ValueError("similarity matrix must be symmetric")
    return arr
