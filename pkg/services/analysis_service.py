"""Analysis service: contour grids, exponent trends, ANOVA and regression over sweep cells."""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from services.sweep_service import SweepCell, SweepConfigError
from statkit import AnovaResult, RegressionResult, linear_regression, one_way_anova, spearman

logger = logging.getLogger(__name__)

ANOVA_FACTORS = ('M', 'ratio_m', 'ratio_w', 'ratio_c')
ANOVA_RESPONSES = ('adj_r2', 'alpha')
REGRESSION_FACTORS = ('ratio_m', 'ratio_w', 'ratio_c')
MIN_TREND_LEVELS = 3


class RaggedGridError(ValueError):
    """Raised when sweep cells do not cover a full grid in two factors."""
    pass


class InsufficientLevelsError(ValueError):
    """Raised when a factor has too few levels for the requested analysis."""
    pass


def _level_key(value):
    # Numeric levels sort numerically and ahead of spec-string labels.
    if isinstance(value, str):
        return (1, 0.0, value)
    return (0, float(value), '')


def _ok(cells: Sequence[SweepCell]) -> List[SweepCell]:
    ok = [c for c in cells if c.ok]
    if not ok:
        raise InsufficientLevelsError("No successful sweep cells to analyse")
    return ok


@dataclass(frozen=True)
class ContourGrid:
    """Mean response per (x, y) level pair; ``values[i][j]`` is y level i, x level j."""
    x_factor: str
    y_factor: str
    x_levels: List
    y_levels: List
    values: List[List[float]]

    def to_dict(self) -> dict:
        return {
            'x_factor': self.x_factor,
            'y_factor': self.y_factor,
            'x_levels': self.x_levels,
            'y_levels': self.y_levels,
            'values': self.values,
        }


@dataclass(frozen=True)
class Trend:
    """Mean response per level of ``varied`` with ``fixed_factor`` held at ``fixed_value``."""
    varied: str
    fixed_factor: str
    fixed_value: object
    levels: List
    means: List[float]
    spearman: float

    def to_dict(self) -> dict:
        return {
            'varied': self.varied,
            'fixed_factor': self.fixed_factor,
            'fixed_value': self.fixed_value,
            'levels': self.levels,
            'means': self.means,
            'spearman': self.spearman,
        }


@dataclass(frozen=True)
class LevelMean:
    factor: str
    level: object
    mean: float
    n: int


class AnalysisService:
    """Service for the statistical views of a finished sweep."""

    @staticmethod
    def level_means(cells: Sequence[SweepCell], factor: str = 'ratio_m',
                    response: str = 'adj_r2') -> List[LevelMean]:
        """Mean ``response`` per level of one factor, pooled over everything else."""
        groups = defaultdict(list)
        for cell in _ok(cells):
            groups[cell.factor(factor)].append(cell.response(response))
        return [
            LevelMean(factor, level, math.fsum(groups[level]) / len(groups[level]), len(groups[level]))
            for level in sorted(groups, key=_level_key)
        ]

    @staticmethod
    def contour_grid(cells: Sequence[SweepCell], x_factor: str = 'ratio_m',
                     y_factor: str = 'ratio_c', response: str = 'adj_r2') -> ContourGrid:
        """
        Average ``response`` over replicates and all other factors per (x, y).

        Raises:
            RaggedGridError: Some (x, y) pair has no successful cell. Levels are taken from
                every cell, so a level whose cells all failed counts as missing.
        """
        ok = _ok(cells)
        buckets = defaultdict(list)
        for cell in ok:
            buckets[(cell.factor(x_factor), cell.factor(y_factor))].append(cell.response(response))

        x_levels = sorted({c.factor(x_factor) for c in cells}, key=_level_key)
        y_levels = sorted({c.factor(y_factor) for c in cells}, key=_level_key)
        missing = [(x, y) for y in y_levels for x in x_levels if (x, y) not in buckets]
        if missing:
            raise RaggedGridError(
                f"Sweep does not cover the {x_factor} x {y_factor} grid; missing {missing}"
            )
        values = [
            [math.fsum(buckets[(x, y)]) / len(buckets[(x, y)]) for x in x_levels]
            for y in y_levels
        ]
        return ContourGrid(x_factor, y_factor, x_levels, y_levels, values)

    @staticmethod
    def _trend_family(ok: Sequence[SweepCell], varied: str, fixed: str,
                      response: str) -> List[Trend]:
        groups = defaultdict(lambda: defaultdict(list))
        for cell in ok:
            groups[cell.factor(fixed)][cell.factor(varied)].append(cell.response(response))

        trends = []
        for fixed_value in sorted(groups, key=_level_key):
            per_level = groups[fixed_value]
            levels = sorted(per_level, key=_level_key)
            if len(levels) < MIN_TREND_LEVELS:
                continue
            means = [math.fsum(per_level[lv]) / len(per_level[lv]) for lv in levels]
            if np.ptp(means) == 0:
                rho = 0.0
            else:
                rho = spearman([float(lv) for lv in levels], means)
            trends.append(Trend(varied, fixed, fixed_value, levels, means, rho))
        return trends

    @staticmethod
    def exponent_trends(cells: Sequence[SweepCell], response: str = 'alpha') -> Dict[str, List[Trend]]:
        """
        Alpha against N for each fixed M, and against M for each fixed N.

        A curve needs at least 3 levels of its varied factor; a flat curve has
        Spearman 0.

        Returns:
            {'N': [...], 'M': [...]} keyed by the varied factor

        Raises:
            InsufficientLevelsError: Neither N nor M has 3 levels.
        """
        ok = _ok(cells)
        result = {
            'N': AnalysisService._trend_family(ok, 'N', 'M', response),
            'M': AnalysisService._trend_family(ok, 'M', 'N', response),
        }
        if not result['N'] and not result['M']:
            raise InsufficientLevelsError(
                f"Exponent trends need >= {MIN_TREND_LEVELS} levels of N or M"
            )
        return result

    @staticmethod
    def anova_over_sweep(cells: Sequence[SweepCell],
                         factors: Sequence[str] = ANOVA_FACTORS,
                         responses: Sequence[str] = ANOVA_RESPONSES) -> List[AnovaResult]:
        """
        One-way ANOVA of each response on each factor, other factors acting as replication.

        Raises:
            InsufficientLevelsError: A factor with fewer than 2 levels.
        """
        ok = _ok(cells)
        results = []
        for response in responses:
            for factor in factors:
                groups = defaultdict(list)
                for cell in ok:
                    groups[cell.factor(factor)].append(cell.response(response))
                if len(groups) < 2:
                    raise InsufficientLevelsError(
                        f"Factor {factor!r} has {len(groups)} level; ANOVA needs at least 2"
                    )
                ordered = [groups[k] for k in sorted(groups, key=_level_key)]
                result = one_way_anova(ordered, factor_name=factor, response=response)
                logger.info(
                    f"ANOVA {response} ~ {factor}: F={result.f_stat:.4g}, p={result.p_value:.3g}"
                )
                results.append(result)
        return results

    @staticmethod
    def exponent_regression(cells: Sequence[SweepCell],
                            factors: Sequence[str] = REGRESSION_FACTORS,
                            response: str = 'alpha') -> RegressionResult:
        """Regress ``response`` on the numeric ratio factors (intercept included)."""
        ok = _ok(cells)
        rows = []
        for cell in ok:
            row = []
            for factor in factors:
                value = cell.factor(factor)
                if isinstance(value, str):
                    raise SweepConfigError(
                        f"Factor {factor!r} level {value!r} is not a numeric ratio"
                    )
                row.append(float(value))
            rows.append(row)
        for j, factor in enumerate(factors):
            if len({r[j] for r in rows}) < 2:
                raise InsufficientLevelsError(f"Factor {factor!r} needs at least 2 levels")
        y = [cell.response(response) for cell in ok]
        return linear_regression(rows, y, names=list(factors))

    @staticmethod
    def goodness_summary(cells: Sequence[SweepCell]) -> Dict[str, Optional[float]]:
        """Mean and sample standard deviation of adj_r2 across successful cells."""
        values = np.array([c.adj_r2 for c in _ok(cells)], dtype=float)
        return {
            'n': int(values.size),
            'mean': float(values.mean()),
            'sd': float(values.std(ddof=1)) if values.size > 1 else None,
        }
