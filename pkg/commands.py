"""Command-line interface: ``flask --app app hsm <command>``."""
import functools
import logging
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import click
from flask import current_app
from flask.cli import AppGroup

from config import get_output_dir, get_two_term_grid
from corpus import load_corpus_dir
from db.reset import reset_database
from fitkit import FIT_SPACES, fit_power_loglog, fit_shifted_power, fit_two_term_power, rank_series
from hsmodel import HierarchySpec, build_instance, expected_frequencies, simulate
from services.analysis_service import (
    ANOVA_FACTORS, AnalysisService, InsufficientLevelsError, RaggedGridError
)
from services.corpus_service import CorpusService
from services.export_service import ExportService
from services.presets import (
    VARY_CHOICES, SWEEP_PRESETS, SWEEP_PRESET_ALIASES, NT_FREQ_PERCENT, NT_LEVELS, NT_SHIFT,
    NT_WORD_COUNTS, get_sweep_preset, resolve_sweep_preset
)
from services.run_store import RunStore
from services.sweep_service import Role, SweepCell, SweepConfig, SweepMode, SweepService, parse_level

logger = logging.getLogger(__name__)

hsm_cli = AppGroup('hsm', help='Hierarchical Selection Model experiments.')

MODE_CHOICES = [m.value for m in SweepMode]


def translate_errors(fn):
    """Turn domain and I/O errors into a one-line diagnostic with exit code 1."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, OSError) as e:
            raise click.ClickException(str(e))
    return wrapper


def _out_dir(out: Optional[str], default_sub: str) -> Path:
    if out:
        return Path(out)
    return Path(get_output_dir(current_app)) / default_sub


def _seed(seed: Optional[int]) -> int:
    return seed if seed is not None else current_app.config['HSM_MASTER_SEED']


def _hierarchy_spec(m: int, n: int, fm: str, fw: str, fc: str) -> HierarchySpec:
    return HierarchySpec(
        n_objects=n,
        n_hierarchies=m,
        fm=parse_level(fm, Role.FM),
        fw=parse_level(fw, Role.FW),
        fc=parse_level(fc, Role.FC),
    )


def _echo_fit(label: str, fit) -> None:
    click.echo(f"{label}: alpha={fit.alpha:.4f} intercept={fit.log_intercept:.4f} "
               f"R2={fit.r2:.4f} adjR2={fit.adj_r2:.4f} points={fit.n_points} zeros={fit.n_zero}")


def model_options(fn):
    for option in reversed((
        click.option('--m', 'm', type=int, required=True, help='Number of hierarchies M'),
        click.option('--n', 'n', type=int, required=True, help='Number of objects N'),
        click.option('--fm', default='uniform', show_default=True, help='Objects per hierarchy'),
        click.option('--fw', default='uniform', show_default=True, help='Selection within a hierarchy'),
        click.option('--fc', default='uniform', show_default=True, help='Hierarchy selection'),
        click.option('--seed', type=int, default=None, help='Seed (default HSM_MASTER_SEED)'),
    )):
        fn = option(fn)
    return fn


@hsm_cli.command('simulate')
@model_options
@click.option('--draws', type=int, default=1_000_000, show_default=True, help='Selections T')
@click.option('--mode', type=click.Choice(MODE_CHOICES), default='montecarlo', show_default=True)
@click.option('--max-rank', type=int, default=None, help='Fit only ranks up to this value')
@click.option('--space', type=click.Choice(FIT_SPACES), default='log', show_default=True)
@click.option('--out', default=None, help='Output directory')
@translate_errors
def simulate_command(m, n, fm, fw, fc, seed, draws, mode, max_rank, space, out):
    """Run one model instance and fit its rank-frequency series."""
    inst = build_instance(_hierarchy_spec(m, n, fm, fw, fc))
    if SweepMode(mode) == SweepMode.EXPECTED:
        table = expected_frequencies(inst, draws)
    else:
        table = simulate(inst, draws, _seed(seed))
    series = rank_series(table).truncate(max_rank)
    fit = fit_power_loglog(series, space=space)

    out_dir = _out_dir(out, 'simulate')
    ExportService.write_frequency_table(table, out_dir / 'frequencies.csv')
    ExportService.write_series(series, out_dir / 'series.csv')
    ExportService.write_fit(fit, out_dir / 'fit.csv')
    ExportService.gnuplot_rank_series('series.csv', out_dir / 'series.gp', fit)
    click.echo(f"Hierarchy sizes: {list(inst.counts)}")
    _echo_fit('Fit', fit)


@hsm_cli.command('fit')
@click.argument('csv_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--space', type=click.Choice(FIT_SPACES), default='log', show_default=True)
@click.option('--max-rank', type=int, default=None)
@click.option('--out', default=None, help='Write fit.csv to this directory')
@translate_errors
def fit_command(csv_path, space, max_rank, out):
    """Fit a power law to a rank,frequency CSV."""
    series = ExportService.read_series(csv_path).truncate(max_rank)
    fit = fit_power_loglog(series, space=space)
    if out:
        ExportService.write_fit(fit, Path(out) / 'fit.csv')
    _echo_fit(Path(csv_path).name, fit)


def _analyse_sweep(config: SweepConfig, cells: List[SweepCell], out_dir: Path) -> dict:
    """Write every analysis the sweep's levels support; returns the goodness summary."""
    x_factor = config.metadata.get('x_factor')
    y_factor = config.metadata.get('y_factor')
    if x_factor and y_factor:
        try:
            grid = AnalysisService.contour_grid(cells, x_factor, y_factor)
            ExportService.write_contour(grid, out_dir / 'contour.csv')
            ExportService.gnuplot_contour('contour.csv', grid, out_dir / 'contour.gp')
        except (RaggedGridError, InsufficientLevelsError) as e:
            logger.warning(f"Contour skipped: {e}")

    try:
        means = AnalysisService.level_means(cells, 'ratio_m', 'adj_r2')
        ExportService.write_level_means(means, out_dir / 'goodness.csv')
        ExportService.gnuplot_goodness_by_ratio('sweep.csv', out_dir / 'goodness.gp')
        for mean in means:
            click.echo(f"ratio_m={mean.level}: mean adjR2={mean.mean:.4f} (n={mean.n})")
    except InsufficientLevelsError as e:
        logger.warning(f"Goodness by ratio skipped: {e}")

    try:
        trends = AnalysisService.exponent_trends(cells)
        ExportService.write_trends(trends, out_dir / 'trends.csv')
        ExportService.gnuplot_trends('trends.csv', out_dir / 'trends.gp')
        for varied, family in trends.items():
            for trend in family:
                click.echo(f"alpha vs {varied} at {trend.fixed_factor}={trend.fixed_value}: "
                           f"spearman={trend.spearman:+.3f}")
    except InsufficientLevelsError as e:
        logger.info(f"Trends skipped: {e}")

    factors = [f for f in ANOVA_FACTORS if len({c.factor(f) for c in cells if c.ok}) >= 2]
    if factors:
        _write_anova(cells, factors, out_dir)

    summary = None
    try:
        summary = AnalysisService.goodness_summary(cells)
        sd = f"{summary['sd']:.4f}" if summary['sd'] is not None else 'n/a'
        click.echo(f"adjR2 over {summary['n']} cells: mean={summary['mean']:.4f} sd={sd}")
    except InsufficientLevelsError as e:
        logger.warning(f"No goodness summary: {e}")
    return summary


def _write_anova(cells: List[SweepCell], factors, out_dir: Path) -> None:
    results = AnalysisService.anova_over_sweep(cells, factors=factors)
    ExportService.write_anova(results, out_dir / 'anova.csv')
    for r in results:
        click.echo(f"ANOVA {r.response:>6} ~ {r.factor_name:<8} F={r.f_stat:10.3f} "
                   f"df=({r.df_between},{r.df_within}) p={r.to_dict()['p_display']}")
    try:
        regression = AnalysisService.exponent_regression(cells)
    except ValueError as e:
        logger.info(f"Regression skipped: {e}")
        return
    ExportService.write_regression(regression, out_dir / 'regression.csv')
    for name, coef, se, p in regression.rows():
        click.echo(f"alpha ~ {name:<10} coef={coef:+.5f} se={se:.5f} p={p:.3g}")


@hsm_cli.command('sweep')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='Flat key=value sweep file')
@click.option('--preset', type=click.Choice(sorted([*SWEEP_PRESETS, *SWEEP_PRESET_ALIASES])),
              help='Named experiment')
@click.option('--vary', type=click.Choice(VARY_CHOICES), default=None,
              help='ratio-goodness only: vary f_m alone or f_m and f_c together')
@click.option('--replicates', type=int, default=None)
@click.option('--master-seed', type=int, default=None)
@click.option('--mode', type=click.Choice(MODE_CHOICES), default=None, help='Override the mode')
@click.option('--workers', type=int, default=None, help='Worker processes (default HSM_SWEEP_WORKERS)')
@click.option('--out', default=None, help='Output directory')
@click.option('--store/--no-store', default=False, help='Save the run in the database')
@translate_errors
def sweep_command(config_path, preset, vary, replicates, master_seed, mode, workers, out, store):
    """Run a factorial sweep and write sweep.csv plus the analyses it supports."""
    if bool(config_path) == bool(preset):
        raise click.UsageError("Give exactly one of --config or --preset")

    seed = _seed(master_seed)
    if preset:
        config = get_sweep_preset(preset, master_seed=seed, vary=vary, replicates=replicates)
    else:
        config = SweepConfig.from_file(config_path)
        if master_seed is not None:
            config = replace(config, master_seed=master_seed)
        if replicates is not None:
            config = replace(config, replicates=replicates)
    if mode:
        config = replace(config, mode=SweepMode(mode))
    config.validate()

    workers = workers or current_app.config['HSM_SWEEP_WORKERS']
    cells = SweepService.run_sweep(config, workers=workers)

    out_dir = _out_dir(out, config.name)
    ExportService.write_sweep(cells, out_dir / 'sweep.csv')
    if ExportService.write_failures(cells, out_dir / 'failures.csv'):
        click.echo(f"{sum(c.error is not None for c in cells)} cells failed; see failures.csv")
    summary = _analyse_sweep(config, cells, out_dir)

    if store:
        run = RunStore.save_run(config, cells, preset=resolve_sweep_preset(preset) if preset else None,
                               summary=summary)
        click.echo(f"Stored as run {run.id}")


@hsm_cli.command('anova')
@click.argument('sweep_csv', required=False, type=click.Path(exists=True, dir_okay=False))
@click.option('--run-id', type=int, default=None, help='Analyse a stored run instead of a CSV')
@click.option('--factors', default=','.join(ANOVA_FACTORS), show_default=True)
@click.option('--out', default=None, help='Output directory')
@translate_errors
def anova_command(sweep_csv, run_id, factors, out):
    """One-way ANOVA per factor and the exponent regression over a finished sweep."""
    if bool(sweep_csv) == (run_id is not None):
        raise click.UsageError("Give exactly one of SWEEP_CSV or --run-id")
    if sweep_csv:
        cells = ExportService.read_sweep(sweep_csv)
        default_dir = Path(sweep_csv).parent
    else:
        cells = RunStore.load_cells(run_id)
        default_dir = Path(get_output_dir(current_app)) / f'run{run_id}'
    out_dir = Path(out) if out else default_dir
    _write_anova(cells, [f.strip() for f in factors.split(',') if f.strip()], out_dir)


@hsm_cli.command('corpus')
@click.option('--dir', 'directory', required=True, type=click.Path(exists=True, file_okay=False),
              help='One UTF-8 text file per topic')
@click.option('--threshold', type=int, default=None, help='Minimum count per topic (default HSM_NT_THRESHOLD)')
@click.option('--proportion', type=float, default=1.0, show_default=True,
              help='Share of each NT group sampled for the rank/NT correlation')
@click.option('--seed', type=int, default=None)
@click.option('--max-rank', type=int, default=None)
@click.option('--casefold', is_flag=True, default=False)
@click.option('--out', default=None, help='Output directory')
@translate_errors
def corpus_command(directory, threshold, proportion, seed, max_rank, casefold, out):
    """NT table, NT group statistics, densities, rank/NT correlation and per-topic fits."""
    corpus = load_corpus_dir(directory, casefold=casefold)
    threshold = threshold if threshold is not None else current_app.config['HSM_NT_THRESHOLD']
    analysis = CorpusService.analyze(corpus, threshold=threshold, proportion=proportion,
                                     seed=_seed(seed), max_rank=max_rank)

    out_dir = _out_dir(out, 'corpus')
    ExportService.write_nt_table(analysis.records, out_dir / 'nt_table.csv')
    ExportService.write_group_stats(analysis.groups, out_dir / 'group_stats.csv')
    ExportService.write_topic_fits(analysis.topic_fits, out_dir / 'topic_fits.csv')
    curve_files = {}
    for nt, curve in analysis.curves.items():
        name = f'fig2_nt{nt}.csv'
        ExportService.write_kde(curve, out_dir / name)
        curve_files[nt] = name
    if curve_files:
        ExportService.gnuplot_densities(curve_files, out_dir / 'fig2_nt.gp')

    click.echo(f"{len(corpus.topics)} topics, {corpus.vocabulary_size} word types, "
               f"{corpus.token_count} tokens")
    for g in analysis.groups:
        alpha = f"{g.fit.alpha:.3f}" if g.fit else 'n/a'
        click.echo(f"NT={g.nt}: words={g.word_count} avg_rank={g.avg_rank:.1f} "
                   f"freq%={g.freq_pct:.2f} alpha={alpha}")
    if analysis.correlation is None:
        click.echo("rank/NT correlation: undefined")
    else:
        click.echo(f"rank/NT correlation: {analysis.correlation:.4f}")


@hsm_cli.command('generate-corpus')
@model_options
@click.option('--topics', type=int, default=8, show_default=True)
@click.option('--tokens', type=int, default=50_000, show_default=True, help='Tokens per topic')
@click.option('--out', default=None, help='Output directory')
@translate_errors
def generate_corpus_command(m, n, fm, fw, fc, seed, topics, tokens, out):
    """Write a synthetic topic corpus drawn from the model."""
    inst = build_instance(_hierarchy_spec(m, n, fm, fw, fc))
    corpus = CorpusService.generate_corpus(inst, topics, tokens, _seed(seed))
    paths = CorpusService.write_corpus(corpus, _out_dir(out, 'generated_corpus'))
    click.echo(f"Wrote {len(paths)} topic files to {paths[0].parent}")


@hsm_cli.command('fit-nt-curves')
@click.option('--space', type=click.Choice(FIT_SPACES), default='raw', show_default=True,
              help='Fit space of the shifted power fit')
@translate_errors
def fit_nt_curves_command(space):
    """Two-term fit of word counts by NT and shifted fit of frequency share by NT."""
    grid = get_two_term_grid(current_app)
    two_term = fit_two_term_power(NT_LEVELS, NT_WORD_COUNTS, b_grid=grid, d_grid=grid)
    click.echo(f"words(NT) = {two_term.a:.1f} x^-{two_term.b:.3f} + {two_term.c:.3f} x^{two_term.d:.3f}"
               f"  SSE={two_term.sse:.4g} adjR2={two_term.adj_r2:.4f}")
    shifted = fit_shifted_power(NT_LEVELS, NT_FREQ_PERCENT, NT_SHIFT, space=space)
    click.echo(f"freq%(NT) = {shifted.coefficient:.2f} ({NT_SHIFT:g} - x)^-{shifted.alpha:.3f}"
               f"  adjR2={shifted.adj_r2:.4f}")


@hsm_cli.command('reset-db')
@click.confirmation_option(prompt='This deletes all stored sweep runs. Continue?')
@translate_errors
def reset_db_command():
    """Drop and recreate the result store tables."""
    try:
        reset_database()
    except RuntimeError as e:
        raise click.ClickException(str(e))
    click.echo("Database reset complete.")
