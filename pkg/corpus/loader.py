"""Topic-labeled corpus ingestion.

Each topic is one UTF-8 file of whitespace-separated, pre-segmented tokens; the
file stem is the topic name.
"""
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class CorpusError(ValueError):
    """Raised for unreadable, empty or inconsistent corpora."""
    pass


@dataclass(frozen=True, eq=False)
class TopicCorpus:
    """Token-by-topic count matrix. Tokens are sorted by their UTF-8 bytes."""
    topics: Tuple[str, ...]
    tokens: Tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (len(self.tokens), len(self.topics)):
            raise CorpusError("Count matrix shape does not match tokens x topics")
        if len(set(self.topics)) != len(self.topics):
            raise CorpusError("Duplicate topic names")

    @property
    def vocabulary_size(self) -> int:
        return len(self.tokens)

    @property
    def token_count(self) -> int:
        return int(self.matrix.sum())

    @property
    def counts(self) -> Dict[str, List[int]]:
        return {tok: row.tolist() for tok, row in zip(self.tokens, self.matrix)}

    def topic_counts(self, topic: str) -> Dict[str, int]:
        """Nonzero token counts of one topic."""
        col = self.matrix[:, self.topics.index(topic)]
        return {self.tokens[i]: int(col[i]) for i in np.flatnonzero(col)}

    @classmethod
    def from_counters(cls, per_topic: Mapping[str, Counter]) -> "TopicCorpus":
        topics = tuple(per_topic)
        vocab = set()
        for counter in per_topic.values():
            vocab.update(tok for tok, n in counter.items() if n > 0)
        tokens = tuple(sorted(vocab, key=lambda t: t.encode('utf-8')))
        if not tokens:
            raise CorpusError("Corpus contains no tokens")
        index = {tok: i for i, tok in enumerate(tokens)}
        matrix = np.zeros((len(tokens), len(topics)), dtype=np.int64)
        for j, topic in enumerate(topics):
            for tok, n in per_topic[topic].items():
                if n > 0:
                    matrix[index[tok], j] = n
        return cls(topics=topics, tokens=tokens, matrix=matrix)


def tokenize(text: str, casefold: bool = False) -> Iterable[str]:
    text = unicodedata.normalize('NFC', text)
    if casefold:
        text = text.casefold()
    return text.split()


def load_corpus(topic_files: Sequence, casefold: bool = False) -> TopicCorpus:
    """
    Read one topic per file into a TopicCorpus.

    An empty file keeps its topic with zero counts and logs a warning.

    Raises:
        CorpusError: No files, duplicate topic names, an unreadable file, or no
            tokens in any file.
    """
    paths = [Path(p) for p in topic_files]
    if not paths:
        raise CorpusError("No topic files given")

    per_topic: Dict[str, Counter] = {}
    for path in paths:
        topic = path.stem
        if topic in per_topic:
            raise CorpusError(f"Duplicate topic name {topic!r} ({path})")
        try:
            text = path.read_text(encoding='utf-8')
        except (OSError, UnicodeDecodeError) as e:
            raise CorpusError(f"Cannot read topic file {path}: {e}")
        counter = Counter(tokenize(text, casefold))
        if not counter:
            logger.warning(f"Topic file {path} is empty; keeping topic {topic!r} with zero counts")
        per_topic[topic] = counter
        logger.info(f"Loaded topic {topic!r}: {sum(counter.values())} tokens, {len(counter)} types")

    return TopicCorpus.from_counters(per_topic)


def load_corpus_dir(directory, pattern: str = '*.txt', casefold: bool = False) -> TopicCorpus:
    """Load every ``pattern`` file in ``directory`` (sorted by name)."""
    root = Path(directory)
    if not root.is_dir():
        raise CorpusError(f"Corpus directory {root} does not exist")
    files = sorted(root.glob(pattern))
    if not files:
        raise CorpusError(f"No {pattern} files in {root}")
    return load_corpus(files, casefold=casefold)
