"""Product-moment and rank correlation."""
from typing import Sequence, Tuple

import numpy as np


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation is undefined (too few points or zero variance)."""
    pass


def _pair(xs: Sequence[float], ys: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise UndefinedCorrelationError("xs and ys must be 1-D and of equal length")
    if x.size < 2:
        raise UndefinedCorrelationError(f"Need at least 2 points, got {x.size}")
    return x, y


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson product-moment correlation, clipped to [-1, 1]."""
    x, y = _pair(xs, ys)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx <= 0 or syy <= 0:
        raise UndefinedCorrelationError("Correlation is undefined for zero variance")
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with tied values sharing the mean of their positions."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    sorted_v = v[order]
    ranks = np.empty(v.size, dtype=np.float64)
    # Boundaries of runs of equal values in sorted order.
    starts = np.flatnonzero(np.r_[True, sorted_v[1:] != sorted_v[:-1]])
    ends = np.r_[starts[1:], v.size]
    for start, end in zip(starts, ends):
        ranks[order[start:end]] = (start + end + 1) / 2.0
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation: Pearson on average ranks."""
    x, y = _pair(xs, ys)
    return pearson(average_ranks(x), average_ranks(y))
