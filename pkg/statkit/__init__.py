"""Correlation, kernel density, ANOVA and regression for the analysis pipeline."""
from .special import StatDomainError, incomplete_beta, f_sf, t_two_sided
from .correlation import UndefinedCorrelationError, pearson, spearman, average_ranks
from .kde import DegenerateDataError, KdeCurve, silverman_bandwidth, default_grid, kde
from .anova import AnovaResult, ANOVA_COLUMNS, format_p_value, one_way_anova
from .regression import SingularDesignError, RegressionResult, linear_regression

__all__ = [
    'StatDomainError', 'incomplete_beta', 'f_sf', 't_two_sided',
    'UndefinedCorrelationError', 'pearson', 'spearman', 'average_ranks',
    'DegenerateDataError', 'KdeCurve', 'silverman_bandwidth', 'default_grid', 'kde',
    'AnovaResult', 'ANOVA_COLUMNS', 'format_p_value', 'one_way_anova',
    'SingularDesignError', 'RegressionResult', 'linear_regression'
]
