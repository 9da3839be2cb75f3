"""Corpus service: synthetic topic corpora from the model and the full NT analysis."""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from corpus import (
    CorpusError, NTGroupStats, NTRecord, TopicCorpus, TopicFitRow,
    group_stats, nt_density_curves, nt_table, per_topic_fits, rank_nt_correlation,
)
from distributions import Pmf, make_rng
from hsmodel import ModelInstance
from services.sweep_service import mix_seed
from statkit import KdeCurve, UndefinedCorrelationError

logger = logging.getLogger(__name__)

TOKENS_PER_LINE = 100


def eligible_topic_count(n_topics: int, n_hierarchies: int, hierarchy: int) -> int:
    """ceil(n_topics * (M + 1 - h) / M); the top hierarchy (h = 1) is eligible everywhere."""
    return math.ceil(n_topics * (n_hierarchies + 1 - hierarchy) / n_hierarchies)


def topic_name(index: int, n_topics: int) -> str:
    width = max(2, len(str(n_topics)))
    return f"topic{index + 1:0{width}d}"


def token_name(object_id: int) -> str:
    return f"w{object_id}"


@dataclass(frozen=True)
class CorpusAnalysis:
    records: List[NTRecord]
    groups: List[NTGroupStats]
    curves: Dict[int, KdeCurve]
    correlation: Optional[float]
    topic_fits: List[TopicFitRow]

    def to_dict(self) -> dict:
        return {
            'vocabulary': len(self.records),
            'groups': [g.to_dict() for g in self.groups],
            'correlation': self.correlation,
            'topic_fits': [row.to_dict() for row in self.topic_fits],
        }


class CorpusService:
    """Service for generating and analysing topic corpora."""

    @staticmethod
    def generate_corpus(inst: ModelInstance, n_topics: int, tokens_per_topic: int,
                        seed: int) -> Dict[str, List[str]]:
        """
        Draw a topic-labeled corpus from a model instance.

        Objects of hierarchy h may appear only in the first
        ``eligible_topic_count(n_topics, M, h)`` topics. Each topic first emits
        every eligible object once, then draws the rest of its tokens from the
        two-step model restricted to its eligible hierarchies.

        Args:
            inst: Model instance
            n_topics: Number of topics (>= 1)
            tokens_per_topic: Tokens written per topic
            seed: Master seed; topic k uses mix_seed(seed, k)

        Returns:
            Ordered mapping of topic name to token list

        Raises:
            CorpusError: n_topics < 1, or a topic too small for its eligible vocabulary
        """
        if n_topics < 1:
            raise CorpusError(f"n_topics must be >= 1, got {n_topics}")
        m = inst.n_hierarchies
        eligible = [eligible_topic_count(n_topics, m, h) for h in range(1, m + 1)]
        offsets = inst.offsets
        object_ids = np.arange(1, inst.n_objects + 1)

        topics = {}
        for t in range(n_topics):
            levels = [h for h in range(m) if t < eligible[h]]
            vocab = sum(inst.counts[h] for h in levels)
            remaining = tokens_per_topic - vocab
            if remaining < 0:
                raise CorpusError(
                    f"tokens_per_topic={tokens_per_topic} is below the {vocab} objects "
                    f"eligible in topic {t + 1}"
                )

            rng = make_rng(mix_seed(seed, t))
            fc = Pmf.from_weights(inst.fc_pmf.probs[levels])
            picked = np.searchsorted(fc.cdf, rng.random(remaining), side='right')
            u = rng.random(remaining)
            drawn = np.empty(remaining, dtype=np.int64)
            for local, h in enumerate(levels):
                mask = picked == local
                if mask.any():
                    drawn[mask] = offsets[h] + np.searchsorted(
                        inst.fw_pmfs[h].cdf, u[mask], side='right'
                    )

            coverage = np.concatenate([
                np.arange(offsets[h], offsets[h] + inst.counts[h]) for h in levels
            ])
            ids = object_ids[np.concatenate([coverage, drawn])]
            topics[topic_name(t, n_topics)] = [token_name(int(i)) for i in ids]
            logger.info(f"Generated {topic_name(t, n_topics)}: {len(ids)} tokens over {len(levels)} hierarchies")
        return topics

    @staticmethod
    def write_corpus(topics: Dict[str, List[str]], out_dir) -> List[Path]:
        """Write one ``<topic>.txt`` per topic in the corpus loader's format."""
        root = Path(out_dir)
        root.mkdir(parents=True, exist_ok=True)
        paths = []
        for topic, tokens in topics.items():
            path = root / f"{topic}.txt"
            lines = [
                ' '.join(tokens[i:i + TOKENS_PER_LINE])
                for i in range(0, len(tokens), TOKENS_PER_LINE)
            ]
            path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
            paths.append(path)
        return paths

    @staticmethod
    def analyze(corpus: TopicCorpus, threshold: int = 1, proportion: float = 1.0,
                seed: int = 0, max_rank: Optional[int] = None) -> CorpusAnalysis:
        """NT table, group table, density curves, rank/NT correlation and per-topic fits."""
        records = nt_table(corpus, threshold)
        try:
            correlation = rank_nt_correlation(records, proportion, seed)
        except UndefinedCorrelationError as e:
            logger.warning(f"Rank/NT correlation undefined: {e}")
            correlation = None
        return CorpusAnalysis(
            records=records,
            groups=group_stats(records),
            curves=nt_density_curves(records),
            correlation=correlation,
            topic_fits=per_topic_fits(corpus, max_rank),
        )
