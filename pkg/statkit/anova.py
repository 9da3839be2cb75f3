"""One-way analysis of variance with F-distribution p-values."""
import logging
import math
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from statkit.special import StatDomainError, f_sf

logger = logging.getLogger(__name__)

ANOVA_COLUMNS = ('factor', 'f_stat', 'df_between', 'df_within', 'p_value')


@dataclass(frozen=True)
class AnovaResult:
    factor_name: str
    f_stat: float
    df_between: int
    df_within: int
    p_value: float
    ss_between: float = 0.0
    ss_within: float = 0.0
    response: str = ''

    @property
    def infinite_f(self) -> bool:
        return math.isinf(self.f_stat)

    def row(self) -> tuple:
        return (self.factor_name, self.f_stat, self.df_between, self.df_within, self.p_value)

    def to_dict(self) -> dict:
        data = asdict(self)
        data['p_display'] = format_p_value(self.p_value)
        return data


def format_p_value(p: float) -> str:
    """Three decimals; anything below 1e-12 prints as 0.000."""
    if p < 1e-12:
        return "0.000"
    return f"{p:.3f}"


def one_way_anova(groups: Sequence[Sequence[float]], factor_name: str = "factor",
                  response: str = "") -> AnovaResult:
    """
    F = MS_between / MS_within across ``groups``.

    Zero within-group variance yields F = inf and p = 0 when group means differ,
    and F = 0 with p = 1 when every value is identical.

    Raises:
        StatDomainError: Fewer than 2 groups, or a group with fewer than 2 values.
    """
    arrays = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(arrays) < 2:
        raise StatDomainError(f"ANOVA needs at least 2 groups, got {len(arrays)}")
    if any(a.size < 2 for a in arrays):
        raise StatDomainError("Every ANOVA group needs at least 2 observations")

    k = len(arrays)
    n = sum(a.size for a in arrays)
    grand = np.concatenate(arrays).mean()
    ss_between = float(sum(a.size * (a.mean() - grand) ** 2 for a in arrays))
    ss_within = float(sum(((a - a.mean()) ** 2).sum() for a in arrays))
    df_between, df_within = k - 1, n - k

    # Rounding noise around identical means is not a between-group effect.
    scale = max(1.0, float(grand * grand) * n)
    if ss_between <= 1e-24 * scale:
        ss_between = 0.0

    if ss_within <= 1e-24 * scale:
        if ss_between == 0.0:
            f_stat, p_value = 0.0, 1.0
        else:
            logger.warning(f"{factor_name}: zero within-group variance, F is infinite")
            f_stat, p_value = math.inf, 0.0
    else:
        f_stat = (ss_between / df_between) / (ss_within / df_within)
        p_value = f_sf(f_stat, df_between, df_within)

    return AnovaResult(
        factor_name=factor_name,
        f_stat=f_stat,
        df_between=df_between,
        df_within=df_within,
        p_value=min(1.0, max(0.0, p_value)),
        ss_between=ss_between,
        ss_within=ss_within,
        response=response,
    )
