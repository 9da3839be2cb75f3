"""Gaussian kernel density estimation with Silverman's bandwidth rule."""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Bounds the (grid x points) kernel matrix built per chunk.
KDE_CHUNK_CELLS = 4_000_000


class DegenerateDataError(ValueError):
    """Raised when data carry no spread to estimate from."""
    pass


@dataclass(frozen=True, eq=False)
class KdeCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        """Trapezoidal integral of the density over the grid."""
        g, d = self.grid, self.density
        return float(((d[1:] + d[:-1]) * np.diff(g)).sum() / 2.0)

    def rows(self):
        return list(zip(self.grid.tolist(), self.density.tolist()))


def silverman_bandwidth(points: Sequence[float]) -> float:
    """
    Silverman's rule 0.9 * min(sd, IQR/1.34) * n^-1/5.

    Falls back to 1.06 * (max - min) * n^-1/5 when the rule gives 0.

    Raises:
        DegenerateDataError: Fewer than 2 points, or all points identical.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.size < 2:
        raise DegenerateDataError(f"Need at least 2 points, got {x.size}")
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(float(np.std(x)), float(q75 - q25) / 1.34)
    bw = 0.9 * spread * x.size ** (-0.2)
    if bw > 0:
        return bw
    span = float(x.max() - x.min())
    if span <= 0:
        raise DegenerateDataError("All points are identical; give an explicit bandwidth")
    logger.debug(f"Silverman bandwidth is 0 (IQR = 0); using range rule on span {span}")
    return 1.06 * span * x.size ** (-0.2)


def default_grid(points: Sequence[float], bandwidth: float, size: int = 512) -> np.ndarray:
    """Evenly spaced grid covering the data plus three bandwidths on each side."""
    x = np.asarray(points, dtype=np.float64)
    return np.linspace(x.min() - 3 * bandwidth, x.max() + 3 * bandwidth, size)


def kde(points: Sequence[float], bandwidth: Optional[float] = None,
        grid: Optional[Sequence[float]] = None) -> KdeCurve:
    """
    Gaussian KDE of ``points`` evaluated on ``grid``.

    With no bandwidth the Silverman rule is used; with no grid, ``default_grid``.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.size < 2:
        raise DegenerateDataError(f"Need at least 2 points, got {x.size}")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(x)
    elif not bandwidth > 0:
        raise DegenerateDataError(f"Bandwidth must be positive, got {bandwidth}")
    g = default_grid(x, bandwidth) if grid is None else np.asarray(grid, dtype=np.float64)

    density = np.empty(g.size, dtype=np.float64)
    norm = 1.0 / (x.size * bandwidth * math.sqrt(2.0 * math.pi))
    rows = max(1, KDE_CHUNK_CELLS // x.size)
    for start in range(0, g.size, rows):
        z = (g[start:start + rows, None] - x[None, :]) / bandwidth
        density[start:start + rows] = np.exp(-0.5 * z * z).sum(axis=1) * norm
    return KdeCurve(grid=g, density=density, bandwidth=float(bandwidth))
