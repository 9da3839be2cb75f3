"""Number-of-topics (NT) analysis: NT table, group statistics, density curves,
rank/NT correlation and per-topic power-law fits."""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from distributions import make_rng
from fitkit import FitResult, fit_power_loglog, series_from_frequencies
from statkit import KdeCurve, kde, pearson
from corpus.loader import CorpusError, TopicCorpus

logger = logging.getLogger(__name__)

DENSITY_GRID_SIZE = 512
MIN_FIT_WORDS = 3


@dataclass(frozen=True)
class NTRecord:
    token: str
    total_freq: int
    global_rank: int
    nt: int


@dataclass(frozen=True)
class NTGroupStats:
    """One row of the NT group table; ``fit`` is None for groups under 3 words."""
    nt: int
    word_count: int
    avg_rank: float
    word_pct: float
    freq_pct: float
    avg_freq: float
    fit: Optional[FitResult]

    def to_dict(self) -> dict:
        return {
            'nt': self.nt,
            'word_count': self.word_count,
            'avg_rank': self.avg_rank,
            'word_pct': self.word_pct,
            'freq_pct': self.freq_pct,
            'avg_freq': self.avg_freq,
            'alpha': self.fit.alpha if self.fit else None,
            'adj_r2': self.fit.adj_r2 if self.fit else None,
        }


def nt_table(corpus: TopicCorpus, threshold: int = 1) -> List[NTRecord]:
    """
    One record per token: total frequency, global rank and NT.

    NT counts the topics where the token occurs at least ``threshold`` times.
    Ranks follow total frequency descending, ties by token bytes ascending.
    Tokens that reach the threshold in no topic are left out and ranks are
    assigned over the remaining tokens.
    """
    if threshold < 1:
        raise CorpusError(f"NT threshold must be >= 1, got {threshold}")
    totals = corpus.matrix.sum(axis=1)
    nts = (corpus.matrix >= threshold).sum(axis=1)
    kept = [i for i in range(corpus.vocabulary_size) if nts[i] > 0]
    if len(kept) < corpus.vocabulary_size:
        logger.info(
            f"{corpus.vocabulary_size - len(kept)} tokens never reach threshold {threshold}; "
            "excluded from the NT table"
        )
    if not kept:
        raise CorpusError(f"No token occurs {threshold} times in any topic")

    kept.sort(key=lambda i: (-int(totals[i]), corpus.tokens[i].encode('utf-8')))
    return [
        NTRecord(
            token=corpus.tokens[i],
            total_freq=int(totals[i]),
            global_rank=rank,
            nt=int(nts[i]),
        )
        for rank, i in enumerate(kept, start=1)
    ]


def _groups(records: List[NTRecord]) -> Dict[int, List[NTRecord]]:
    groups = defaultdict(list)
    for rec in records:
        groups[rec.nt].append(rec)
    return dict(sorted(groups.items()))


def group_stats(records: List[NTRecord]) -> List[NTGroupStats]:
    """
    Aggregate the NT table by NT value (ascending).

    Each group is also fitted with fit_power_loglog over its own frequency
    ranking; groups with fewer than 3 words get no fit and a warning.
    """
    if not records:
        raise CorpusError("No NT records to aggregate")
    n_words = len(records)
    grand_total = sum(r.total_freq for r in records)

    stats = []
    for nt, members in _groups(records).items():
        freqs = [r.total_freq for r in members]
        group_total = sum(freqs)
        fit = None
        if len(members) >= MIN_FIT_WORDS:
            fit = fit_power_loglog(series_from_frequencies(freqs))
        else:
            logger.warning(f"NT group {nt} has {len(members)} words; power-law fit skipped")
        stats.append(NTGroupStats(
            nt=nt,
            word_count=len(members),
            avg_rank=sum(r.global_rank for r in members) / len(members),
            word_pct=100.0 * len(members) / n_words,
            freq_pct=100.0 * group_total / grand_total,
            avg_freq=group_total / len(members),
            fit=fit,
        ))
    return stats


def nt_density_curves(records: List[NTRecord],
                      grid_size: int = DENSITY_GRID_SIZE) -> Dict[int, KdeCurve]:
    """Gaussian KDE of the global ranks in each NT group over [1, V]."""
    grid = np.linspace(1.0, float(len(records)), grid_size)
    curves = {}
    for nt, members in _groups(records).items():
        if len(members) < 2:
            logger.warning(f"NT group {nt} has {len(members)} word; density curve skipped")
            continue
        curves[nt] = kde([r.global_rank for r in members], grid=grid)
    return curves


def rank_nt_correlation(records: List[NTRecord], proportion: float = 1.0,
                        seed: int = 0) -> float:
    """
    Pearson correlation between global rank and NT over a proportional sample.

    ceil(proportion * |group|) words are drawn without replacement from each NT
    group; proportion = 1 uses every word and ignores the seed.
    """
    if not (0.0 < proportion <= 1.0):
        raise CorpusError(f"proportion must be in (0, 1], got {proportion}")
    groups = _groups(records)
    if not groups:
        raise CorpusError("No NT records to correlate")

    rng = make_rng(seed)
    ranks, nts = [], []
    for nt, members in groups.items():
        size = len(members)
        if proportion == 1.0:
            chosen = range(size)
        else:
            k = max(1, math.ceil(round(proportion * size, 9)))
            chosen = sorted(rng.choice(size, size=k, replace=False).tolist())
        for i in chosen:
            ranks.append(members[i].global_rank)
            nts.append(nt)
    return pearson(ranks, nts)


@dataclass(frozen=True)
class TopicFitRow:
    """One row of the per-topic summary; the exponent is printed signed (-alpha)."""
    topic: str
    word_types: int
    tokens: int
    fit: Optional[FitResult]

    @property
    def exponent(self) -> Optional[float]:
        return -self.fit.alpha if self.fit else None

    def to_dict(self) -> dict:
        return {
            'topic': self.topic,
            'word_types': self.word_types,
            'tokens': self.tokens,
            'exponent': self.exponent,
            'adj_r2': self.fit.adj_r2 if self.fit else None,
        }


COLLECTION_LABEL = 'Collection'


def _topic_row(topic: str, counts: np.ndarray, max_rank: Optional[int]) -> TopicFitRow:
    nonzero = counts[counts > 0]
    fit = None
    if nonzero.size >= MIN_FIT_WORDS:
        fit = fit_power_loglog(series_from_frequencies(nonzero).truncate(max_rank))
    else:
        logger.warning(f"Topic {topic!r} has {nonzero.size} distinct tokens; fit skipped")
    return TopicFitRow(topic=topic, word_types=int(nonzero.size),
                       tokens=int(nonzero.sum()), fit=fit)


def per_topic_fits(corpus: TopicCorpus, max_rank: Optional[int] = None) -> List[TopicFitRow]:
    """
    fit_power_loglog per topic, then on the pooled collection (last row).

    Raises:
        CorpusError: max_rank is below the minimum number of points a fit needs.
    """
    if max_rank is not None and max_rank < MIN_FIT_WORDS:
        raise CorpusError(f"max_rank must be at least {MIN_FIT_WORDS} for per-topic fits, got {max_rank}")
    rows = [
        _topic_row(topic, corpus.matrix[:, j], max_rank)
        for j, topic in enumerate(corpus.topics)
    ]
    rows.append(_topic_row(COLLECTION_LABEL, corpus.matrix.sum(axis=1), max_rank))
    return rows
