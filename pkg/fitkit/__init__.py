"""Rank series and least-squares power-law fits."""
from .ranking import RankedSeries, EmptySeriesError, rank_series, series_from_frequencies
from .power import (
    FitResult, InsufficientDataError, FitDomainError, FIT_SPACES,
    exponent_grid, adjusted_r2, fit_power_loglog, fit_shifted_power
)
from .two_term import TwoTermFit, SingularFitError, fit_two_term_power

__all__ = [
    'RankedSeries', 'EmptySeriesError', 'rank_series', 'series_from_frequencies',
    'FitResult', 'InsufficientDataError', 'FitDomainError', 'FIT_SPACES',
    'exponent_grid', 'adjusted_r2', 'fit_power_loglog', 'fit_shifted_power',
    'TwoTermFit', 'SingularFitError', 'fit_two_term_power'
]
