"""Two-term power fit f(x) = a*x^-b + c*x^d (decay plus growth)."""
import logging
from dataclasses import dataclass, asdict
from typing import Optional, Sequence, Tuple

import numpy as np

from fitkit.power import (
    FitDomainError, _check_xy, adjusted_r2, exponent_grid, r_squared,
    scaled_power_fit,
)

logger = logging.getLogger(__name__)

DEFAULT_TWO_TERM_GRID = (0.1, 5.0, 0.01)
DEFAULT_STEP_TOL = 1e-6


class SingularFitError(ValueError):
    """Raised when the design cannot separate the two terms."""
    pass


@dataclass(frozen=True)
class TwoTermFit:
    a: float
    b: float
    c: float
    d: float
    sse: float
    r2: float
    adj_r2: float
    n_points: int

    def predict(self, xs) -> np.ndarray:
        x = np.asarray(xs, dtype=np.float64)
        return self.a * x ** (-self.b) + self.c * x ** self.d

    def to_dict(self) -> dict:
        return asdict(self)


def _solve_pair(u: np.ndarray, v: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Non-negative (a, c) for y ~ a*u + c*v; falls back to the better single term."""
    s11, s22, s12 = float(u @ u), float(v @ v), float(u @ v)
    t1, t2 = float(u @ y), float(v @ y)
    det = s11 * s22 - s12 * s12
    if det > 1e-12 * s11 * s22:
        a = (t1 * s22 - t2 * s12) / det
        c = (t2 * s11 - t1 * s12) / det
        if a >= 0 and c >= 0:
            return a, c
    a_only = t1 / s11 if s11 > 0 and t1 > 0 else 0.0
    c_only = t2 / s22 if s22 > 0 and t2 > 0 else 0.0
    sse_a = float(((y - a_only * u) ** 2).sum())
    sse_c = float(((y - c_only * v) ** 2).sum())
    return (a_only, 0.0) if sse_a <= sse_c else (0.0, c_only)


def _evaluate(log_x: np.ndarray, y: np.ndarray, b: float, d: float) -> Tuple[float, float, float]:
    u = np.exp(-b * log_x)
    v = np.exp(d * log_x)
    a, c = _solve_pair(u, v, y)
    resid = y - a * u - c * v
    return float(resid @ resid), a, c


def _grid_search(log_x: np.ndarray, y: np.ndarray, b_grid: np.ndarray,
                 d_grid: np.ndarray) -> Tuple[float, float]:
    """Best (b, d) on the grid with (a, c) projected out and clamped."""
    U = np.exp(-np.outer(b_grid, log_x))
    V = np.exp(np.outer(d_grid, log_x))
    s11 = (U * U).sum(axis=1)[:, None]
    s22 = (V * V).sum(axis=1)[None, :]
    s12 = U @ V.T
    t1 = (U @ y)[:, None]
    t2 = (V @ y)[None, :]
    yy = float(y @ y)

    det = s11 * s22 - s12 * s12
    with np.errstate(divide='ignore', invalid='ignore'):
        a = (t1 * s22 - t2 * s12) / det
        c = (t2 * s11 - t1 * s12) / det
        sse_pair = yy - 2 * (a * t1 + c * t2) + a * a * s11 + 2 * a * c * s12 + c * c * s22
        sse_a = np.where(t1 > 0, yy - t1 * t1 / s11, yy)
        sse_c = np.where(t2 > 0, yy - t2 * t2 / s22, yy)
    valid = (det > 1e-12 * s11 * s22) & (a >= 0) & (c >= 0)
    sse = np.where(valid, sse_pair, np.minimum(sse_a, sse_c))
    i, j = np.unravel_index(int(np.nanargmin(sse)), sse.shape)
    return float(b_grid[i]), float(d_grid[j])


def _coordinate_descent(log_x, y, b, d, step, tol, max_iter=20000):
    best, _, _ = _evaluate(log_x, y, b, d)
    iterations = 0
    while step > tol and iterations < max_iter:
        iterations += 1
        moved = False
        for db, dd in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            nb, nd = b + db, d + dd
            if nb <= 0 or nd <= 0:
                continue
            sse, _, _ = _evaluate(log_x, y, nb, nd)
            if sse < best:
                best, b, d, moved = sse, nb, nd, True
                break
        if not moved:
            step /= 2.0
    return b, d


def fit_two_term_power(xs: Sequence[float], ys: Sequence[float],
                       b_grid: Optional[np.ndarray] = None,
                       d_grid: Optional[np.ndarray] = None,
                       tol: float = DEFAULT_STEP_TOL) -> TwoTermFit:
    """
    Least-squares fit of y ~ a*x^-b + c*x^d with a, c >= 0 and b, d > 0.

    (b, d) is scanned on a grid with (a, c) solved in closed form per cell, then
    refined by coordinate descent until the step drops below ``tol``. The
    refined single-term fits are also candidates, so the result is never worse
    than either term alone.

    Raises:
        InsufficientDataError: Fewer than 5 points.
        FitDomainError: Non-positive xs or ys.
        SingularFitError: All xs equal.
    """
    x, y = _check_xy(xs, ys, 5)
    if np.any(x <= 0):
        raise FitDomainError("All xs must be positive")
    if np.ptp(x) == 0:
        raise SingularFitError("All xs are equal; the two terms cannot be separated")

    if b_grid is None:
        b_grid = exponent_grid(*DEFAULT_TWO_TERM_GRID)
    if d_grid is None:
        d_grid = exponent_grid(*DEFAULT_TWO_TERM_GRID)
    log_x = np.log(x)

    b, d = _grid_search(log_x, y, b_grid, d_grid)
    step = float(b_grid[1] - b_grid[0]) if b_grid.size > 1 else 0.01
    b, d = _coordinate_descent(log_x, y, b, d, step, tol)
    sse, a, c = _evaluate(log_x, y, b, d)

    # Single-term candidates: pure decay (c = 0) and pure growth (a = 0).
    a1, b1, sse1 = scaled_power_fit(log_x, y, b_grid)
    if sse1 < sse:
        logger.info(f"Two-term fit collapsed to decay term (b={b1:.4f})")
        a, b, c, sse = a1, b1, 0.0, sse1
    c2, neg_d, sse2 = scaled_power_fit(-log_x, y, d_grid)
    if sse2 < sse:
        logger.info(f"Two-term fit collapsed to growth term (d={neg_d:.4f})")
        a, c, d, sse = 0.0, c2, neg_d, sse2

    n = int(y.size)
    dy = y - y.mean()
    r2 = r_squared(sse, float(dy @ dy), float(y @ y))
    return TwoTermFit(
        a=a, b=b, c=c, d=d, sse=sse, r2=r2,
        adj_r2=adjusted_r2(r2, n, 3), n_points=n,
    )
