"""Tests for rank series and least-squares fits."""
import math

import numpy as np
import pytest

from fitkit import (
    EmptySeriesError, FitDomainError, InsufficientDataError, RankedSeries, SingularFitError,
    adjusted_r2, exponent_grid, fit_power_loglog, fit_shifted_power, fit_two_term_power,
    rank_series, series_from_frequencies
)
from fitkit.power import scaled_power_fit
from hsmodel import FrequencyTable

NT_WORDS = [81864, 16156, 9603, 6687, 5546, 4672, 4984, 8731]
NT_FREQ_PCT = [2.22, 1.27, 1.44, 1.50, 1.89, 2.63, 5.18, 83.87]
NT = list(range(1, 9))


def table(counts, hierarchy=None):
    n = len(counts)
    return FrequencyTable(
        object_id=np.arange(1, n + 1),
        hierarchy=np.asarray(hierarchy if hierarchy is not None else [1] * n),
        within_rank=np.arange(1, n + 1),
        count=np.asarray(counts, dtype=float),
        total=float(sum(counts)),
    )


def power_series(coefficient, alpha, n):
    ranks = np.arange(1, n + 1)
    return RankedSeries(ranks=ranks, frequencies=coefficient * ranks.astype(float) ** -alpha)


class TestRankSeries:
    """Tests for rank_series()."""

    def test_ordinal_ranks_with_tie(self):
        assert rank_series(table([5, 2, 2])).pairs() == [(1, 5.0), (2, 2.0), (3, 2.0)]

    def test_zero_dropped_and_counted(self):
        series = rank_series(table([0, 7]))
        assert series.pairs() == [(1, 7.0)]
        assert series.n_zero == 1

    def test_permuted_rows_give_same_series(self):
        base = table([3, 9, 1, 9, 4], hierarchy=[1, 2, 2, 1, 3])
        order = np.array([4, 2, 0, 3, 1])
        permuted = FrequencyTable(
            object_id=base.object_id[order], hierarchy=base.hierarchy[order],
            within_rank=base.within_rank[order], count=base.count[order], total=base.total,
        )
        assert rank_series(permuted).pairs() == rank_series(base).pairs()

    def test_non_increasing_and_total_preserved(self):
        series = rank_series(table([4, 0, 8, 1, 0, 3]))
        assert np.all(np.diff(series.frequencies) <= 0)
        assert series.total == 16.0
        assert series.n_zero == 2

    def test_all_zero_raises_error(self):
        with pytest.raises(EmptySeriesError):
            rank_series(table([0, 0]))

    def test_truncate(self):
        series = series_from_frequencies([1, 5, 3, 2])
        assert series.truncate(2).pairs() == [(1, 5.0), (2, 3.0)]
        assert series.truncate(None) is series
        with pytest.raises(ValueError):
            series.truncate(0)

    def test_series_from_frequencies_drops_zeros(self):
        series = series_from_frequencies([0, 2, 7, 0])
        assert series.pairs() == [(1, 7.0), (2, 2.0)]
        assert series.n_zero == 2


class TestFitPowerLogLog:
    """Tests for fit_power_loglog()."""

    def test_exact_power_law(self):
        fit = fit_power_loglog(power_series(1000.0, 1.5, 100))
        assert fit.alpha == pytest.approx(1.5, abs=1e-9)
        assert fit.adj_r2 == pytest.approx(1.0, abs=1e-12)
        assert fit.coefficient == pytest.approx(1000.0, rel=1e-9)
        assert fit.n_points == 100

    def test_flat_series(self):
        fit = fit_power_loglog(RankedSeries(np.arange(1, 11), np.full(10, 7.0)))
        assert fit.alpha == pytest.approx(0.0, abs=1e-12)
        assert fit.r2 == 1.0

    def test_four_points(self):
        """ln(8, 4, 2, 1) on ln(1..4): hand normal equations give slope -1.4590."""
        fit = fit_power_loglog(series_from_frequencies([8, 4, 2, 1]))
        assert fit.alpha == pytest.approx(1.4590, abs=1e-3)

    def test_scaling_only_moves_intercept(self):
        rng = np.random.default_rng(0)
        freqs = np.sort(rng.uniform(1, 100, size=50))[::-1]
        base = fit_power_loglog(series_from_frequencies(freqs))
        scaled = fit_power_loglog(series_from_frequencies(freqs * 3.0))
        assert scaled.alpha == pytest.approx(base.alpha, abs=1e-9)
        assert scaled.r2 == pytest.approx(base.r2, abs=1e-9)
        assert scaled.log_intercept - base.log_intercept == pytest.approx(math.log(3.0), abs=1e-9)

    def test_adjusted_not_above_r2(self):
        freqs = [100, 40, 35, 12, 11, 3, 2, 2]
        fit = fit_power_loglog(series_from_frequencies(freqs))
        assert fit.adj_r2 <= fit.r2 <= 1.0

    def test_n_zero_carried_through(self):
        fit = fit_power_loglog(rank_series(table([9, 0, 4, 2, 0])))
        assert fit.n_zero == 2
        assert fit.n_points == 3

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            fit_power_loglog(series_from_frequencies([5, 2]))

    def test_nonpositive_frequency(self):
        series = RankedSeries(np.arange(1, 4), np.array([3.0, 1.0, 0.0]))
        with pytest.raises(FitDomainError):
            fit_power_loglog(series)

    def test_raw_space(self):
        fit = fit_power_loglog(power_series(1000.0, 1.5, 100), space='raw')
        assert fit.space == 'raw'
        assert fit.alpha == pytest.approx(1.5, abs=1e-6)
        assert fit.coefficient == pytest.approx(1000.0, rel=1e-6)

    def test_unknown_space(self):
        with pytest.raises(ValueError, match="space"):
            fit_power_loglog(power_series(10.0, 1.0, 10), space='loglog')

    def test_adjusted_r2_formula(self):
        assert adjusted_r2(0.9, 3, 1) == pytest.approx(1 - 0.1 * 2 / 1)
        with pytest.raises(InsufficientDataError):
            adjusted_r2(0.9, 2, 1)

    def test_exponent_grid(self):
        grid = exponent_grid(0.1, 5.0, 0.01)
        assert grid.size == 491
        assert grid[0] == pytest.approx(0.1)
        assert grid[-1] == pytest.approx(5.0)


class TestFitTwoTermPower:
    """Tests for fit_two_term_power()."""

    def test_noiseless_recovery(self):
        xs = np.arange(1, 9, dtype=float)
        ys = 2 * xs ** -1.0 + 0.5 * xs ** 1.5
        fit = fit_two_term_power(xs, ys)
        assert fit.a == pytest.approx(2.0, abs=1e-3)
        assert fit.b == pytest.approx(1.0, abs=1e-3)
        assert fit.c == pytest.approx(0.5, abs=1e-3)
        assert fit.d == pytest.approx(1.5, abs=1e-3)

    def test_pure_decay_reduces_to_single_term(self):
        xs = np.arange(1, 9, dtype=float)
        fit = fit_two_term_power(xs, 10.0 / xs)
        assert fit.b == pytest.approx(1.0, abs=1e-3)
        assert fit.a == pytest.approx(10.0, rel=1e-3)
        assert fit.c <= 1e-6

    def test_u_shaped_word_counts(self):
        """Both terms stay positive and the fit beats the reference curve."""
        fit = fit_two_term_power(NT, NT_WORDS)
        x = np.array(NT, dtype=float)
        reference = 81530 * x ** -2.094 + 69.9 * x ** 2.26
        reference_sse = float(((reference - np.array(NT_WORDS)) ** 2).sum())
        assert fit.a > 0 and fit.c > 0
        assert fit.sse <= reference_sse
        assert fit.adj_r2 > 0.99

    def test_not_worse_than_single_term(self):
        log_x = np.log(np.array(NT, dtype=float))
        ys = np.array(NT_WORDS, dtype=float)
        _, _, decay_sse = scaled_power_fit(log_x, ys, exponent_grid(0.1, 5.0, 0.01))
        _, _, growth_sse = scaled_power_fit(-log_x, ys, exponent_grid(0.1, 5.0, 0.01))
        fit = fit_two_term_power(NT, NT_WORDS)
        assert fit.sse <= decay_sse
        assert fit.sse <= growth_sse

    def test_predict(self):
        xs = np.arange(1, 9, dtype=float)
        ys = 2 * xs ** -1.0 + 0.5 * xs ** 1.5
        fit = fit_two_term_power(xs, ys)
        assert fit.predict([4.0])[0] == pytest.approx(0.5 + 0.5 * 8.0, rel=1e-3)

    def test_equal_xs_raise_error(self):
        with pytest.raises(SingularFitError):
            fit_two_term_power([2] * 5, [1, 2, 3, 4, 5])

    def test_nonpositive_x(self):
        with pytest.raises(FitDomainError):
            fit_two_term_power([0, 1, 2, 3, 4], [1, 2, 3, 4, 5])

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            fit_two_term_power([1, 2, 3, 4], [4, 3, 2, 1])


class TestFitShiftedPower:
    """Tests for fit_shifted_power()."""

    def test_exact_recovery_raw(self):
        xs = np.arange(1, 9, dtype=float)
        fit = fit_shifted_power(xs, 5 * (9 - xs) ** -2.0, 9.0)
        assert fit.coefficient == pytest.approx(5.0, rel=1e-6)
        assert fit.alpha == pytest.approx(2.0, abs=1e-6)
        assert fit.adj_r2 == pytest.approx(1.0, abs=1e-9)

    def test_exact_recovery_log(self):
        xs = np.arange(1, 9, dtype=float)
        fit = fit_shifted_power(xs, 5 * (9 - xs) ** -2.0, 9.0, space='log')
        assert fit.coefficient == pytest.approx(5.0, rel=1e-9)
        assert fit.alpha == pytest.approx(2.0, abs=1e-9)

    def test_frequency_share_by_nt(self):
        fit = fit_shifted_power(NT, NT_FREQ_PCT, 9.0)
        assert fit.coefficient == pytest.approx(83.84, rel=0.02)
        assert 3.74 <= fit.alpha <= 3.84
        assert fit.adj_r2 == pytest.approx(0.9971, abs=0.005)

    def test_log_space_scaling(self):
        base = fit_shifted_power(NT, NT_FREQ_PCT, 9.0, space='log')
        scaled = fit_shifted_power(NT, [10 * y for y in NT_FREQ_PCT], 9.0, space='log')
        assert scaled.alpha == pytest.approx(base.alpha, abs=1e-9)
        assert scaled.coefficient == pytest.approx(10 * base.coefficient, rel=1e-9)
        assert scaled.adj_r2 == pytest.approx(base.adj_r2, abs=1e-9)

    def test_shift_must_exceed_xs(self):
        with pytest.raises(FitDomainError, match="shift"):
            fit_shifted_power(NT, NT_FREQ_PCT, 8.0)
