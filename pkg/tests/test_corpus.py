"""Tests for corpus loading and the NT analysis."""
import logging
from collections import Counter

import numpy as np
import pytest

from corpus import (
    COLLECTION_LABEL, CorpusError, NTRecord, TopicCorpus, group_stats, load_corpus,
    load_corpus_dir, nt_density_curves, nt_table, per_topic_fits, rank_nt_correlation
)
from fitkit import fit_power_loglog, series_from_frequencies


@pytest.fixture
def toy_corpus():
    """Three topics; a is in all of them, c in two, b/d/e in one each."""
    return TopicCorpus.from_counters({
        't1': Counter('a a b c'.split()),
        't2': Counter('a c c d'.split()),
        't3': Counter('a e'.split()),
    })


def write_topics(directory, **topics):
    for name, text in topics.items():
        (directory / f'{name}.txt').write_text(text, encoding='utf-8')
    return directory


class TestLoadCorpus:
    """Tests for load_corpus() and load_corpus_dir()."""

    def test_single_file(self, tmp_path):
        write_topics(tmp_path, t1='a a b')
        corpus = load_corpus([tmp_path / 't1.txt'])
        assert corpus.topics == ('t1',)
        assert corpus.counts == {'a': [2], 'b': [1]}

    def test_token_in_two_files(self, tmp_path):
        write_topics(tmp_path, t1='x y', t2='y z')
        corpus = load_corpus_dir(tmp_path)
        assert corpus.counts['y'] == [1, 1]
        assert corpus.topic_counts('t2') == {'y': 1, 'z': 1}

    def test_empty_file_keeps_topic(self, tmp_path, caplog):
        write_topics(tmp_path, full='a b', empty='')
        with caplog.at_level(logging.WARNING, logger='corpus.loader'):
            corpus = load_corpus_dir(tmp_path)
        assert corpus.topics == ('empty', 'full')
        assert corpus.matrix[:, 0].sum() == 0
        assert 'empty' in caplog.text

    def test_tokens_sorted_by_bytes(self, tmp_path):
        write_topics(tmp_path, t1='b a B')
        assert load_corpus_dir(tmp_path).tokens == ('B', 'a', 'b')

    def test_casefold_and_nfc(self, tmp_path):
        # precomposed and decomposed spellings of the same word
        write_topics(tmp_path, t1='caf\u00e9 cafe\u0301 CAF\u00c9')
        assert load_corpus_dir(tmp_path).counts == {'CAF\u00c9': [1], 'caf\u00e9': [2]}
        assert load_corpus_dir(tmp_path, casefold=True).counts == {'caf\u00e9': [3]}

    def test_duplicate_topic_names(self, tmp_path):
        (tmp_path / 'one').mkdir()
        (tmp_path / 'two').mkdir()
        write_topics(tmp_path / 'one', t='a')
        write_topics(tmp_path / 'two', t='b')
        with pytest.raises(CorpusError, match="Duplicate topic"):
            load_corpus([tmp_path / 'one' / 't.txt', tmp_path / 'two' / 't.txt'])

    def test_missing_directory(self, tmp_path):
        with pytest.raises(CorpusError, match="does not exist"):
            load_corpus_dir(tmp_path / 'missing')

    def test_directory_without_topics(self, tmp_path):
        with pytest.raises(CorpusError, match="No"):
            load_corpus_dir(tmp_path)

    def test_all_files_empty(self, tmp_path):
        write_topics(tmp_path, t1='', t2='  \n')
        with pytest.raises(CorpusError, match="no tokens"):
            load_corpus_dir(tmp_path)


class TestNtTable:
    """Tests for nt_table()."""

    def test_hand_enumeration(self, toy_corpus):
        records = nt_table(toy_corpus)
        assert [(r.token, r.total_freq, r.global_rank, r.nt) for r in records] == [
            ('a', 4, 1, 3),
            ('c', 3, 2, 2),
            ('b', 1, 3, 1),
            ('d', 1, 4, 1),
            ('e', 1, 5, 1),
        ]

    def test_token_in_every_topic(self, toy_corpus):
        assert nt_table(toy_corpus)[0].nt == len(toy_corpus.topics)

    def test_threshold_excludes_rare_tokens(self, toy_corpus):
        records = nt_table(toy_corpus, threshold=2)
        assert [(r.token, r.global_rank, r.nt) for r in records] == [('a', 1, 1), ('c', 2, 1)]

    def test_invalid_threshold(self, toy_corpus):
        with pytest.raises(CorpusError):
            nt_table(toy_corpus, threshold=0)

    def test_threshold_nothing_survives(self, toy_corpus):
        with pytest.raises(CorpusError):
            nt_table(toy_corpus, threshold=5)


class TestGroupStats:
    """Tests for group_stats()."""

    def test_toy_aggregates(self, toy_corpus):
        stats = {g.nt: g for g in group_stats(nt_table(toy_corpus))}
        assert sorted(stats) == [1, 2, 3]
        single = stats[1]
        assert single.word_count == 3
        assert single.avg_rank == pytest.approx(4.0)
        assert single.word_pct == pytest.approx(60.0)
        assert single.freq_pct == pytest.approx(30.0)
        assert single.avg_freq == pytest.approx(1.0)
        assert single.fit is not None and single.fit.alpha == pytest.approx(0.0, abs=1e-12)

    def test_small_group_has_no_fit(self, toy_corpus, caplog):
        with caplog.at_level(logging.WARNING, logger='corpus.nt'):
            stats = {g.nt: g for g in group_stats(nt_table(toy_corpus))}
        assert stats[2].fit is None
        assert stats[2].to_dict()['alpha'] is None
        assert 'fit skipped' in caplog.text

    def test_single_topic(self):
        corpus = TopicCorpus.from_counters({'only': Counter('x x y z'.split())})
        stats = group_stats(nt_table(corpus))
        assert len(stats) == 1
        assert stats[0].word_pct == pytest.approx(100.0)
        assert stats[0].freq_pct == pytest.approx(100.0)

    def test_percentages_add_up(self, toy_corpus):
        stats = group_stats(nt_table(toy_corpus))
        assert sum(g.word_pct for g in stats) == pytest.approx(100.0)
        assert sum(g.freq_pct for g in stats) == pytest.approx(100.0)

    def test_empty_records(self):
        with pytest.raises(CorpusError):
            group_stats([])


def banded_records(groups=4, size=10):
    """Ranks 1..groups*size with NT falling by one every ``size`` ranks."""
    return [
        NTRecord(token=f'w{r}', total_freq=1000 - r, global_rank=r, nt=groups - (r - 1) // size)
        for r in range(1, groups * size + 1)
    ]


class TestDensityAndCorrelation:
    """Tests for nt_density_curves() and rank_nt_correlation()."""

    def test_curves_skip_singletons(self, toy_corpus):
        curves = nt_density_curves(nt_table(toy_corpus))
        assert list(curves) == [1]
        assert curves[1].grid[0] == 1.0 and curves[1].grid[-1] == 5.0

    def test_modes_follow_group_order(self):
        curves = nt_density_curves(banded_records())
        modes = {nt: c.grid[c.density.argmax()] for nt, c in curves.items()}
        assert modes[4] < modes[3] < modes[2] < modes[1]

    def test_rank_falls_with_nt(self):
        assert rank_nt_correlation(banded_records()) <= -0.9

    def test_full_proportion_matches_direct_pearson(self, toy_corpus):
        records = nt_table(toy_corpus)
        oracle = np.corrcoef([r.global_rank for r in records], [r.nt for r in records])[0, 1]
        assert rank_nt_correlation(records) == pytest.approx(oracle, abs=1e-12)

    def test_sample_is_deterministic(self):
        records = banded_records(size=25)
        first = rank_nt_correlation(records, proportion=0.3, seed=11)
        assert rank_nt_correlation(records, proportion=0.3, seed=11) == first
        assert first < 0

    def test_invalid_proportion(self):
        with pytest.raises(CorpusError):
            rank_nt_correlation(banded_records(), proportion=0.0)


class TestPerTopicFits:
    """Tests for per_topic_fits()."""

    def test_planted_power_law(self):
        counts = Counter({f'w{r}': 14400 // (r * r) for r in range(1, 7)})
        rows = per_topic_fits(TopicCorpus.from_counters({'planted': counts}))
        assert rows[0].fit.alpha == pytest.approx(2.0, abs=1e-9)
        assert rows[0].exponent == pytest.approx(-2.0, abs=1e-9)

    def test_collection_row_last(self, toy_corpus):
        rows = per_topic_fits(toy_corpus)
        assert [r.topic for r in rows] == ['t1', 't2', 't3', COLLECTION_LABEL]
        assert rows[-1].tokens == toy_corpus.token_count
        assert rows[-1].word_types == toy_corpus.vocabulary_size

    def test_undersized_topic_flagged(self, toy_corpus):
        rows = {r.topic: r for r in per_topic_fits(toy_corpus)}
        assert rows['t3'].fit is None
        assert rows['t3'].to_dict()['exponent'] is None
        assert rows['t1'].fit is not None

    def test_collection_matches_manual_fit(self, toy_corpus):
        rows = per_topic_fits(toy_corpus)
        manual = fit_power_loglog(series_from_frequencies(toy_corpus.matrix.sum(axis=1)))
        assert rows[-1].fit.alpha == pytest.approx(manual.alpha)

    @pytest.mark.parametrize("max_rank", [0, 1, 2])
    def test_max_rank_too_small(self, toy_corpus, max_rank):
        with pytest.raises(CorpusError, match="max_rank must be at least 3"):
            per_topic_fits(toy_corpus, max_rank)

    def test_max_rank_three_fits(self, toy_corpus):
        rows = per_topic_fits(toy_corpus, 3)
        assert rows[-1].fit.n_points == 3
