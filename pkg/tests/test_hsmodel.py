"""Tests for model instances, exact probabilities and simulation."""
import logging

import numpy as np
import pytest

import hsmodel.model as model
from distributions import DistributionSpec, InvalidSpecError, Orientation, Pmf, make_pmf
from hsmodel import (
    HierarchySpec, ModelInstance, apportion, build_instance, exact_pmf,
    expected_frequencies, simulate
)

UNIFORM = DistributionSpec.uniform()


def spec(n, m, fm=UNIFORM, fw=UNIFORM, fc=UNIFORM):
    return HierarchySpec(n_objects=n, n_hierarchies=m, fm=fm, fw=fw, fc=fc)


class TestBuildInstance:
    """Tests for build_instance() and apportionment."""

    def test_uniform_split(self):
        assert build_instance(spec(100, 4)).counts == (25, 25, 25, 25)

    def test_triangular_ascending_apportionment(self):
        inst = build_instance(spec(60, 3, fm=DistributionSpec.triangular(3, Orientation.ASCENDING)))
        assert inst.counts == (10, 20, 30)

    def test_clamp_floor(self):
        inst = build_instance(spec(5, 5, fm=DistributionSpec.triangular(3, Orientation.ASCENDING)))
        assert inst.counts == (1, 1, 1, 1, 1)

    def test_too_few_objects_raises_error(self):
        with pytest.raises(InvalidSpecError, match="cannot give every hierarchy"):
            build_instance(spec(3, 4))

    def test_no_hierarchy_raises_error(self):
        with pytest.raises(InvalidSpecError):
            build_instance(spec(10, 0))

    def test_warns_when_m_not_much_smaller_than_n(self, caplog):
        with caplog.at_level(logging.WARNING, logger='hsmodel.model'):
            build_instance(spec(20, 5))
        assert 'M > N/10' in caplog.text

    @pytest.mark.parametrize('fm', [
        DistributionSpec.triangular(9, Orientation.ASCENDING),
        DistributionSpec.power(2.094, Orientation.ASCENDING),
        DistributionSpec.exponential(1.5),
    ])
    def test_counts_sum_to_n(self, fm):
        for n in (7, 100, 1234):
            for m in range(1, 7):
                counts = build_instance(spec(n, m, fm=fm)).counts
                assert sum(counts) == n
                assert min(counts) >= 1

    def test_remainder_ties_go_to_lower_index(self):
        assert apportion(5, Pmf(np.array([0.5, 0.5]))) == [3, 2]

    def test_fw_instantiated_per_hierarchy(self, small_instance):
        assert [p.support_size for p in small_instance.fw_pmfs] == [10, 20, 30]
        assert small_instance.fw_pmfs[0].probs == pytest.approx(
            make_pmf(DistributionSpec.power(1.0), 10).probs)

    def test_object_layout(self, small_instance):
        object_id, hierarchy, within = small_instance.object_layout()
        assert object_id[0] == 1 and object_id[-1] == 60
        assert hierarchy[9] == 1 and hierarchy[10] == 2
        assert within[10] == 1 and within[-1] == 30
        assert small_instance.offsets.tolist() == [0, 10, 30]

    def test_instance_rejects_mismatched_pmfs(self):
        with pytest.raises(InvalidSpecError):
            ModelInstance(counts=(2, 2), fc_pmf=Pmf(np.array([1.0])),
                          fw_pmfs=(make_pmf(UNIFORM, 2), make_pmf(UNIFORM, 2)))


class TestExactPmf:
    """Tests for exact_pmf()."""

    def test_single_hierarchy_is_fw(self):
        fw = DistributionSpec.triangular(3)
        inst = build_instance(spec(4, 1, fw=fw))
        assert exact_pmf(inst).tolist() == make_pmf(fw, 4).probs.tolist()

    def test_hand_product(self):
        inst = build_instance(spec(2, 2, fc=DistributionSpec.explicit([3, 1])))
        assert exact_pmf(inst) == pytest.approx([0.75, 0.25])

    def test_full_uniformity(self):
        assert exact_pmf(build_instance(spec(4, 2))) == pytest.approx([0.25] * 4)

    def test_uniform_everything_is_uniform_over_objects(self):
        assert exact_pmf(build_instance(spec(12, 3))) == pytest.approx([1 / 12] * 12)

    def test_sums_to_one(self, small_instance):
        assert abs(exact_pmf(small_instance).sum() - 1.0) < 1e-10


class TestSimulate:
    """Tests for simulate()."""

    def test_forced_outcome(self):
        table = simulate(build_instance(spec(1, 1)), 10, seed=3)
        assert table.count.tolist() == [10.0]

    def test_counts_sum_to_draws(self, small_instance):
        table = simulate(small_instance, 12_345, seed=1)
        assert table.count.sum() == 12_345
        assert table.total == 12_345

    def test_blocked_draws_keep_the_total(self, small_instance, monkeypatch):
        monkeypatch.setattr(model, 'DRAW_BLOCK', 7)
        assert simulate(small_instance, 100, seed=1).count.sum() == 100

    def test_deterministic(self, small_instance):
        first = simulate(small_instance, 50_000, seed=99)
        second = simulate(small_instance, 50_000, seed=99)
        assert first.rows() == second.rows()

    def test_seed_changes_counts(self, small_instance):
        first = simulate(small_instance, 50_000, seed=1)
        second = simulate(small_instance, 50_000, seed=2)
        assert not np.array_equal(first.count, second.count)

    def test_matches_exact_pmf(self, small_instance):
        draws = 1_000_000
        table = simulate(small_instance, draws, seed=20130526)
        p = exact_pmf(small_instance)
        bound = 5 * np.sqrt(draws * p * (1 - p))
        assert np.all(np.abs(table.count - draws * p) <= bound)

    def test_invalid_draws(self, small_instance):
        with pytest.raises(ValueError, match="draws"):
            simulate(small_instance, 0, seed=1)

    def test_rows_sorted_by_object_id(self, small_instance):
        rows = simulate(small_instance, 1000, seed=4).rows()
        assert [r[0] for r in rows] == list(range(1, 61))
        assert rows[0][1:3] == (1, 1)


class TestExpectedFrequencies:
    """Tests for expected_frequencies()."""

    def test_uniform_counts(self):
        table = expected_frequencies(build_instance(spec(4, 1)), 100)
        assert table.count == pytest.approx([25.0] * 4)

    def test_hand_product(self):
        inst = build_instance(spec(2, 2, fc=DistributionSpec.explicit([3, 1])))
        assert expected_frequencies(inst, 100).count == pytest.approx([75.0, 25.0])

    def test_total_is_draws(self, small_instance):
        table = expected_frequencies(small_instance, 2_000_000)
        assert table.total == 2_000_000
        assert table.count.sum() == pytest.approx(2_000_000, rel=1e-6)

    def test_invalid_draws(self, small_instance):
        with pytest.raises(ValueError):
            expected_frequencies(small_instance, 0)
