"""Topic corpus ingestion and the NT analysis pipeline."""
from .loader import CorpusError, TopicCorpus, tokenize, load_corpus, load_corpus_dir
from .nt import (
    NTRecord, NTGroupStats, TopicFitRow, COLLECTION_LABEL,
    nt_table, group_stats, nt_density_curves, rank_nt_correlation, per_topic_fits
)

__all__ = [
    'CorpusError', 'TopicCorpus', 'tokenize', 'load_corpus', 'load_corpus_dir',
    'NTRecord', 'NTGroupStats', 'TopicFitRow', 'COLLECTION_LABEL',
    'nt_table', 'group_stats', 'nt_density_curves', 'rank_nt_correlation', 'per_topic_fits'
]
