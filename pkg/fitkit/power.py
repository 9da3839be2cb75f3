"""Single-term power-law fits: log-log OLS and raw-space variable projection."""
import logging
import math
from dataclasses import dataclass, asdict
from typing import Sequence, Tuple

import numpy as np

from fitkit.ranking import RankedSeries

logger = logging.getLogger(__name__)

# Exponent search range for raw-space single-term fits.
DEFAULT_EXPONENT_GRID = (0.01, 10.0, 0.01)

FIT_SPACES = ('log', 'raw')


class InsufficientDataError(ValueError):
    """Raised when a fit has fewer points than parameters allow."""
    pass


class FitDomainError(ValueError):
    """Raised when fit inputs fall outside the model's domain."""
    pass


@dataclass(frozen=True)
class FitResult:
    """Power-law fit y = exp(log_intercept) * x^-alpha.

    ``alpha`` is reported positive for decaying series. ``n_zero`` carries the
    number of zero-frequency items dropped before fitting.
    """
    alpha: float
    log_intercept: float
    r2: float
    adj_r2: float
    n_points: int
    n_zero: int = 0
    space: str = 'log'

    @property
    def coefficient(self) -> float:
        return math.exp(self.log_intercept)

    def to_dict(self) -> dict:
        data = asdict(self)
        data['coefficient'] = self.coefficient
        return data


def exponent_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive grid lo, lo+step, ..., hi."""
    if step <= 0 or hi < lo:
        raise ValueError(f"Invalid grid {lo}:{hi}:{step}")
    return np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)


def r_squared(sse: float, sst: float, scale: float) -> float:
    """1 - SSE/SST; a flat response counts as a perfect fit only when SSE vanishes too."""
    tiny = 1e-24 * max(1.0, scale)
    if sst <= tiny:
        return 1.0 if sse <= tiny else 0.0
    return 1.0 - sse / sst


def adjusted_r2(r2: float, n: int, n_params: int) -> float:
    """Adjusted R^2 = 1 - (1 - r2)(n - 1)/(n - n_params - 1)."""
    dof = n - n_params - 1
    if dof <= 0:
        raise InsufficientDataError(f"Need more than {n_params + 1} points, got {n}")
    return 1.0 - (1.0 - r2) * (n - 1) / dof


def _check_xy(xs, ys, min_points: int) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D sequences of equal length")
    if x.size < min_points:
        raise InsufficientDataError(f"Need at least {min_points} points, got {x.size}")
    if np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise FitDomainError("All y values must be finite and positive")
    return x, y


def _ols_log(log_x: np.ndarray, log_y: np.ndarray) -> Tuple[float, float, float, float]:
    """Slope, intercept, SSE, SST of log_y on log_x."""
    mx, my = log_x.mean(), log_y.mean()
    dx, dy = log_x - mx, log_y - my
    sxx = float(dx @ dx)
    slope = float(dx @ dy) / sxx if sxx > 0 else 0.0
    intercept = float(my - slope * mx)
    resid = log_y - (intercept + slope * log_x)
    return slope, intercept, float(resid @ resid), float(dy @ dy)


def _projected_sse(log_base: np.ndarray, y: np.ndarray, b: float) -> Tuple[float, float]:
    """Best a and SSE for y ~ a * base^-b at fixed b."""
    u = np.exp(-b * log_base)
    uu = float(u @ u)
    a = float(u @ y) / uu if uu > 0 else 0.0
    resid = y - a * u
    return float(resid @ resid), a


def _golden_min(fn, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200) -> float:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - ratio * (hi - lo)
    d = lo + ratio * (hi - lo)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - ratio * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + ratio * (hi - lo)
            fd = fn(d)
    return (lo + hi) / 2.0


def scaled_power_fit(log_base: np.ndarray, y: np.ndarray,
                     grid: np.ndarray) -> Tuple[float, float, float]:
    """
    Raw-space least squares for y ~ a * base^-b with a >= 0.

    Scans b over ``grid`` with a projected out in closed form, then refines the
    best cell by golden-section search. Returns (a, b, sse).
    """
    best_b, best_sse = float(grid[0]), math.inf
    for b in grid:
        sse, a = _projected_sse(log_base, y, float(b))
        if a >= 0 and sse < best_sse:
            best_b, best_sse = float(b), sse

    step = float(grid[1] - grid[0]) if grid.size > 1 else 0.0
    if step > 0:
        lo = max(best_b - step, float(grid[0]) * 0.5)
        hi = best_b + step
        refined = _golden_min(lambda b: _projected_sse(log_base, y, b)[0], lo, hi)
        sse, _ = _projected_sse(log_base, y, refined)
        if sse <= best_sse:
            best_b, best_sse = refined, sse

    best_sse, a = _projected_sse(log_base, y, best_b)
    return max(a, 0.0), best_b, best_sse


def _fit(log_base: np.ndarray, y: np.ndarray, space: str, n_zero: int,
         grid: np.ndarray) -> FitResult:
    n = int(y.size)
    if space == 'log':
        log_y = np.log(y)
        slope, intercept, sse, sst = _ols_log(log_base, log_y)
        r2 = r_squared(sse, sst, float(log_y @ log_y))
        return FitResult(
            alpha=-slope, log_intercept=intercept, r2=r2,
            adj_r2=adjusted_r2(r2, n, 1), n_points=n, n_zero=n_zero, space='log',
        )
    if space == 'raw':
        a, b, sse = scaled_power_fit(log_base, y, grid)
        dy = y - y.mean()
        r2 = r_squared(sse, float(dy @ dy), float(y @ y))
        return FitResult(
            alpha=b, log_intercept=math.log(a) if a > 0 else -math.inf, r2=r2,
            adj_r2=adjusted_r2(r2, n, 1), n_points=n, n_zero=n_zero, space='raw',
        )
    raise ValueError(f"space must be one of {FIT_SPACES}, got {space!r}")


def fit_power_loglog(series: RankedSeries, space: str = 'log',
                     grid: np.ndarray = None) -> FitResult:
    """
    Fit frequency ~ C * rank^-alpha.

    ``space='log'`` is OLS of ln(frequency) on ln(rank) with R^2 in log space.
    ``space='raw'`` minimizes squared error on the frequencies themselves.

    Raises:
        InsufficientDataError: Fewer than 3 points.
        FitDomainError: Any frequency <= 0.
    """
    ranks, freqs = _check_xy(series.ranks, series.frequencies, 3)
    if np.any(ranks <= 0):
        raise FitDomainError("Ranks must be positive")
    if grid is None:
        grid = exponent_grid(*DEFAULT_EXPONENT_GRID)
    return _fit(np.log(ranks), freqs, space, series.n_zero, grid)


def fit_shifted_power(xs: Sequence[float], ys: Sequence[float], shift: float,
                      space: str = 'raw', grid: np.ndarray = None) -> FitResult:
    """
    Fit y ~ a * (shift - x)^-b.

    The default minimizes squared error in raw space;
    ``space='log'`` is OLS of ln(y) on ln(shift - x).

    Raises:
        FitDomainError: shift <= max(xs), or a non-positive y.
        InsufficientDataError: Fewer than 3 points.
    """
    x, y = _check_xy(xs, ys, 3)
    if shift <= x.max():
        raise FitDomainError(f"shift={shift} must exceed max(xs)={x.max()}")
    if grid is None:
        grid = exponent_grid(*DEFAULT_EXPONENT_GRID)
    return _fit(np.log(shift - x), y, space, 0, grid)
