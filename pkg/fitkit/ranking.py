"""Rank-frequency series construction."""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from hsmodel import FrequencyTable


class EmptySeriesError(ValueError):
    """Raised when no positive frequency is left to rank."""
    pass


@dataclass(frozen=True, eq=False)
class RankedSeries:
    """Frequencies sorted descending with ordinal ranks 1..n.

    ``n_zero`` counts zero-frequency items that were dropped.
    """
    ranks: np.ndarray
    frequencies: np.ndarray
    n_zero: int = 0

    def __len__(self) -> int:
        return int(self.ranks.size)

    @property
    def total(self) -> float:
        return float(self.frequencies.sum())

    def truncate(self, max_rank: Optional[int]) -> "RankedSeries":
        """Keep ranks 1..max_rank (None keeps everything)."""
        if max_rank is None or max_rank >= len(self):
            return self
        if max_rank < 1:
            raise ValueError(f"max_rank must be >= 1, got {max_rank}")
        return RankedSeries(self.ranks[:max_rank], self.frequencies[:max_rank], self.n_zero)

    def pairs(self):
        return list(zip(self.ranks.tolist(), self.frequencies.tolist()))


def rank_series(table: FrequencyTable, include_zeros: bool = False) -> RankedSeries:
    """
    Sort objects by count descending and assign ordinal ranks.

    Ties are broken by (hierarchy, within_rank, object_id) ascending. Zero counts
    never enter the series since their logs are undefined. With ``include_zeros``
    they are still dropped; ``n_zero`` reports them either way.

    Raises:
        EmptySeriesError: If the table is empty or every count is zero.
    """
    if len(table) == 0:
        raise EmptySeriesError("Frequency table is empty")
    count = np.asarray(table.count, dtype=np.float64)
    order = np.lexsort((table.object_id, table.within_rank, table.hierarchy, -count))
    sorted_counts = count[order]
    positive = sorted_counts > 0
    n_zero = int((~positive).sum())
    freqs = sorted_counts[positive]
    if freqs.size == 0:
        raise EmptySeriesError("All counts are zero")
    return RankedSeries(
        ranks=np.arange(1, freqs.size + 1, dtype=np.int64),
        frequencies=freqs,
        n_zero=n_zero,
    )


def series_from_frequencies(frequencies: Sequence[float]) -> RankedSeries:
    """Rank a bare list of frequencies (ties keep input order)."""
    freqs = np.asarray(frequencies, dtype=np.float64)
    if freqs.size == 0:
        raise EmptySeriesError("No frequencies given")
    order = np.argsort(-freqs, kind="stable")
    freqs = freqs[order]
    positive = freqs > 0
    if not positive.any():
        raise EmptySeriesError("All frequencies are zero")
    kept = freqs[positive]
    return RankedSeries(
        ranks=np.arange(1, kept.size + 1, dtype=np.int64),
        frequencies=kept,
        n_zero=int((~positive).sum()),
    )
