"""Tests for the ``flask hsm`` command group."""
import pytest

from db import SweepRun
from distributions import DistributionSpec, Orientation
from hsmodel import HierarchySpec, build_instance
from services import CorpusService


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


def invoke(runner, *args):
    return runner.invoke(args=['hsm', *[str(a) for a in args]])


class TestSimulateAndFit:
    """Tests for the simulate and fit commands."""

    def test_simulate_writes_outputs(self, runner, tmp_path):
        result = invoke(runner, 'simulate', '--m', 3, '--n', 60, '--fm', 3, '--fw', 'pow:1',
                        '--fc', 4, '--draws', 20000, '--seed', 1, '--out', tmp_path)
        assert result.exit_code == 0, result.output
        assert 'Hierarchy sizes: [10, 20, 30]' in result.output
        for name in ('frequencies.csv', 'series.csv', 'fit.csv', 'series.gp'):
            assert (tmp_path / name).exists()

    def test_expected_mode_is_seed_free(self, runner, tmp_path):
        outputs = []
        for seed in (1, 2):
            result = invoke(runner, 'simulate', '--m', 2, '--n', 40, '--mode', 'expected',
                            '--seed', seed, '--out', tmp_path / str(seed))
            outputs.append(result.output)
        assert outputs[0] == outputs[1]

    def test_invalid_spec_is_one_line_error(self, runner, tmp_path):
        result = invoke(runner, 'simulate', '--m', 5, '--n', 3, '--out', tmp_path)
        assert result.exit_code == 1
        assert 'cannot give every hierarchy' in result.output

    def test_fit_csv(self, runner, tmp_path):
        path = tmp_path / 'series.csv'
        path.write_text('rank,frequency\n1,8\n2,4\n3,2\n4,1\n', encoding='utf-8')
        result = invoke(runner, 'fit', path, '--out', tmp_path / 'fit')
        assert result.exit_code == 0, result.output
        assert 'alpha=1.459' in result.output
        assert (tmp_path / 'fit' / 'fit.csv').exists()


class TestSweepCommands:
    """Tests for the sweep and anova commands."""

    @pytest.fixture
    def sweep_file(self, tmp_path):
        path = tmp_path / 'grid.env'
        path.write_text(
            "name=grid\nm_levels=2,4\nn_levels=200,400,800\ndraws=5000\n"
            "fm=2,4\nfw=uniform\nfc=2\nreplicates=2\nmode=expected\n",
            encoding='utf-8',
        )
        return path

    def test_sweep_from_config(self, runner, sweep_file, tmp_path):
        out = tmp_path / 'out'
        result = invoke(runner, 'sweep', '--config', sweep_file, '--out', out)
        assert result.exit_code == 0, result.output
        for name in ('sweep.csv', 'goodness.csv', 'trends.csv', 'anova.csv'):
            assert (out / name).exists()
        assert len((out / 'sweep.csv').read_text().splitlines()) == 1 + 24
        assert 'alpha vs N' in result.output

    def test_sweep_needs_one_source(self, runner, sweep_file):
        result = invoke(runner, 'sweep', '--config', sweep_file, '--preset', 'ratio-goodness')
        assert result.exit_code == 2

    def test_preset_alias_accepted(self, runner, sweep_file):
        result = invoke(runner, 'sweep', '--config', sweep_file, '--preset', 'fig4')
        assert result.exit_code == 2
        assert 'Invalid value' not in result.output
        assert 'exactly one of --config or --preset' in result.output

    def test_unknown_preset_rejected(self, runner):
        result = invoke(runner, 'sweep', '--preset', 'fig9')
        assert result.exit_code == 2
        assert 'Invalid value' in result.output

    def test_sweep_store(self, runner, sweep_file, tmp_path, db_session):
        result = invoke(runner, 'sweep', '--config', sweep_file, '--out', tmp_path, '--store')
        assert result.exit_code == 0, result.output
        run = db_session.query(SweepRun).one()
        assert run.n_cells == 24
        assert f'Stored as run {run.id}' in result.output

    def test_anova_from_csv(self, runner, sweep_file, tmp_path):
        invoke(runner, 'sweep', '--config', sweep_file, '--out', tmp_path)
        result = invoke(runner, 'anova', tmp_path / 'sweep.csv', '--factors', 'M,ratio_m',
                        '--out', tmp_path / 'anova')
        assert result.exit_code == 0, result.output
        assert 'ANOVA' in result.output
        lines = (tmp_path / 'anova' / 'anova.csv').read_text().splitlines()
        assert lines[0] == 'factor,f_stat,df_between,df_within,p_value'
        assert len(lines) == 1 + 4

    def test_anova_needs_one_source(self, runner):
        assert invoke(runner, 'anova').exit_code == 2

    def test_anova_unknown_run(self, runner):
        result = invoke(runner, 'anova', '--run-id', 42)
        assert result.exit_code == 1
        assert 'not found' in result.output


class TestCorpusCommands:
    """Tests for generate-corpus, corpus and fit-nt-curves."""

    def test_generate_then_analyse(self, runner, tmp_path):
        corpus_dir = tmp_path / 'corpus'
        result = invoke(runner, 'generate-corpus', '--m', 4, '--n', 80, '--fm', 3, '--fc', 4,
                        '--topics', 8, '--tokens', 500, '--seed', 3, '--out', corpus_dir)
        assert result.exit_code == 0, result.output
        assert len(list(corpus_dir.glob('*.txt'))) == 8

        out = tmp_path / 'analysis'
        result = invoke(runner, 'corpus', '--dir', corpus_dir, '--out', out)
        assert result.exit_code == 0, result.output
        assert '8 topics, 80 word types' in result.output
        assert 'rank/NT correlation' in result.output
        for name in ('nt_table.csv', 'group_stats.csv', 'topic_fits.csv', 'fig2_nt.gp'):
            assert (out / name).exists()
        assert list(out.glob('fig2_nt*.csv'))

    def test_corpus_matches_service(self, runner, tmp_path):
        inst = build_instance(HierarchySpec(40, 2, DistributionSpec.triangular(2, Orientation.ASCENDING),
                                            DistributionSpec.uniform(), DistributionSpec.triangular(2)))
        CorpusService.write_corpus(CorpusService.generate_corpus(inst, 4, 200, seed=1), tmp_path / 'c')
        result = invoke(runner, 'corpus', '--dir', tmp_path / 'c', '--out', tmp_path / 'out')
        lines = (tmp_path / 'out' / 'group_stats.csv').read_text().splitlines()
        assert result.exit_code == 0, result.output
        assert [line.split(',')[0] for line in lines[1:]] == ['2', '4']

    def test_fit_nt_curves(self, runner):
        result = invoke(runner, 'fit-nt-curves')
        assert result.exit_code == 0, result.output
        assert 'words(NT)' in result.output
        assert 'freq%(NT) = 83.' in result.output


class TestResetDb:
    """Tests for reset-db."""

    def test_reset_drops_runs(self, runner, db_session):
        db_session.add(SweepRun(name='old', mode='expected', master_seed='1', config_json={}))
        db_session.commit()
        result = invoke(runner, 'reset-db', '--yes')
        assert result.exit_code == 0, result.output
        assert db_session.query(SweepRun).count() == 0

    def test_reset_needs_confirmation(self, runner):
        result = runner.invoke(args=['hsm', 'reset-db'], input='n\n')
        assert result.exit_code == 1
