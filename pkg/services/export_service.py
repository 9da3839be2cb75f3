"""Export service: CSV result files and gnuplot scripts that plot them."""
import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from corpus import NTGroupStats, NTRecord, TopicFitRow
from fitkit import FitResult, RankedSeries, series_from_frequencies
from hsmodel import FrequencyTable
from services.analysis_service import ContourGrid, LevelMean, Trend
from services.sweep_service import SWEEP_COLUMNS, Role, SweepCell, SweepConfigError, parse_level
from statkit import ANOVA_COLUMNS, AnovaResult, KdeCurve, RegressionResult

logger = logging.getLogger(__name__)

FIT_COLUMNS = ('alpha', 'log_intercept', 'r2', 'adj_r2', 'n_points', 'n_zero')
GROUP_COLUMNS = ('nt', 'word_count', 'avg_rank', 'word_pct', 'freq_pct', 'avg_freq',
                 'alpha', 'adj_r2')
TOPIC_FIT_COLUMNS = ('topic', 'word_types', 'tokens', 'exponent', 'adj_r2')
TREND_COLUMNS = ('varied', 'fixed_factor', 'fixed_value', 'level', 'mean', 'spearman')

GP_HEADER = """set terminal pngcairo size 1024,768
set datafile separator ","
set key autotitle columnhead
set grid
"""


def _blank(value):
    return '' if value is None else value


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_blank(v) for v in row])
    logger.info(f"Wrote {path}")
    return path


def _write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    logger.info(f"Wrote {path}")
    return path


def _optional_float(text: str) -> Optional[float]:
    return float(text) if text not in ('', None) else None


class ExportService:
    """Service for writing result files."""

    @staticmethod
    def write_frequency_table(table: FrequencyTable, path) -> Path:
        return _write_rows(path, ('object_id', 'hierarchy', 'within_rank', 'count'), table.rows())

    @staticmethod
    def write_series(series: RankedSeries, path) -> Path:
        return _write_rows(path, ('rank', 'frequency'), series.pairs())

    @staticmethod
    def read_series(path) -> RankedSeries:
        """Read a ``rank,frequency`` CSV and re-rank it (input order is not trusted)."""
        with Path(path).open(newline='', encoding='utf-8') as fh:
            reader = csv.DictReader(fh)
            if not reader.fieldnames or 'frequency' not in reader.fieldnames:
                raise ValueError(f"{path} has no 'frequency' column")
            freqs = [float(row['frequency']) for row in reader]
        return series_from_frequencies(freqs)

    @staticmethod
    def write_fit(fit: FitResult, path) -> Path:
        return _write_rows(path, FIT_COLUMNS, [[getattr(fit, c) for c in FIT_COLUMNS]])

    @staticmethod
    def write_sweep(cells: Sequence[SweepCell], path) -> Path:
        return _write_rows(path, SWEEP_COLUMNS, (c.csv_row() for c in cells))

    @staticmethod
    def write_failures(cells: Sequence[SweepCell], path) -> Optional[Path]:
        """
        Write cell_id, seed and error of every failed cell.

        Returns:
            The path written, or None when no cell failed (no file is created).
        """
        failed = [c for c in cells if c.error is not None]
        if not failed:
            return None
        return _write_rows(path, ('cell_id', 'seed', 'error'),
                           ((c.cell_id, c.seed, c.error) for c in failed))

    @staticmethod
    def read_sweep(path) -> List[SweepCell]:
        """
        Load cells back from a sweep CSV.

        Numeric ratio columns become triangular specs (f_m ascending); other
        labels are parsed as spec strings. Rows with an empty alpha are failed cells.
        """
        cells = []
        with Path(path).open(newline='', encoding='utf-8') as fh:
            reader = csv.DictReader(fh)
            missing = set(SWEEP_COLUMNS) - set(reader.fieldnames or ())
            if missing:
                raise SweepConfigError(f"{path} lacks sweep columns {sorted(missing)}")
            for row in reader:
                n_zero = row['n_zero']
                cells.append(SweepCell(
                    cell_id=int(row['cell_id']),
                    m=int(row['M']),
                    n=int(row['N']),
                    draws=int(row['T']),
                    fm=parse_level(row['ratio_m'], Role.FM),
                    fw=parse_level(row['ratio_w'], Role.FW),
                    fc=parse_level(row['ratio_c'], Role.FC),
                    replicate=int(row['replicate']),
                    seed=int(row['seed']),
                    alpha=_optional_float(row['alpha']),
                    adj_r2=_optional_float(row['adj_r2']),
                    n_zero=int(n_zero) if n_zero else None,
                ))
        return cells

    @staticmethod
    def write_contour(grid: ContourGrid, path) -> Path:
        """Matrix CSV: first column the y level, one column per x level."""
        header = [f"{grid.y_factor}\\{grid.x_factor}"] + list(grid.x_levels)
        rows = ([y] + row for y, row in zip(grid.y_levels, grid.values))
        return _write_rows(path, header, rows)

    @staticmethod
    def write_level_means(means: Sequence[LevelMean], path) -> Path:
        return _write_rows(path, ('factor', 'level', 'mean', 'n'),
                           ((m.factor, m.level, m.mean, m.n) for m in means))

    @staticmethod
    def write_trends(trends: Dict[str, List[Trend]], path) -> Path:
        rows = []
        for family in trends.values():
            for trend in family:
                for level, mean in zip(trend.levels, trend.means):
                    rows.append([trend.varied, trend.fixed_factor, trend.fixed_value,
                                 level, mean, trend.spearman])
        return _write_rows(path, TREND_COLUMNS, rows)

    @staticmethod
    def write_anova(results: Sequence[AnovaResult], path) -> Path:
        return _write_rows(path, ANOVA_COLUMNS, (r.row() for r in results))

    @staticmethod
    def write_regression(result: RegressionResult, path) -> Path:
        return _write_rows(path, ('term', 'coefficient', 'std_error', 'p_value'), result.rows())

    @staticmethod
    def write_kde(curve: KdeCurve, path) -> Path:
        return _write_rows(path, ('x', 'density'), curve.rows())

    @staticmethod
    def write_nt_table(records: Sequence[NTRecord], path) -> Path:
        rows = ((r.token, r.total_freq, r.global_rank, r.nt) for r in records)
        return _write_rows(path, ('token', 'total_freq', 'rank', 'nt'), rows)

    @staticmethod
    def write_group_stats(groups: Sequence[NTGroupStats], path) -> Path:
        rows = ([g.to_dict()[c] for c in GROUP_COLUMNS] for g in groups)
        return _write_rows(path, GROUP_COLUMNS, rows)

    @staticmethod
    def write_topic_fits(rows: Sequence[TopicFitRow], path) -> Path:
        return _write_rows(path, TOPIC_FIT_COLUMNS,
                           ([r.to_dict()[c] for c in TOPIC_FIT_COLUMNS] for r in rows))

    # gnuplot scripts. They reference CSVs by file name, relative to the script.

    @staticmethod
    def gnuplot_rank_series(csv_name: str, path, fit: Optional[FitResult] = None) -> Path:
        lines = [GP_HEADER, f'set output "{Path(csv_name).stem}.png"',
                 'set logscale xy', 'set xlabel "rank"', 'set ylabel "frequency"']
        plot = f'plot "{csv_name}" using 1:2 with points pt 7 ps 0.4 title "observed"'
        if fit is not None:
            lines.append(f'f(x) = exp({fit.log_intercept!r}) * x**(-({fit.alpha!r}))')
            plot += f', f(x) with lines lw 2 title "alpha = {fit.alpha:.4f}"'
        lines.append(plot)
        return _write_text(path, '\n'.join(lines) + '\n')

    @staticmethod
    def gnuplot_contour(csv_name: str, grid: ContourGrid, path) -> Path:
        lines = [
            GP_HEADER,
            f'set output "{Path(csv_name).stem}.png"',
            f'set xlabel "{grid.x_factor}"',
            f'set ylabel "{grid.y_factor}"',
            'set view map',
            'set contour base',
            'set cntrparam levels auto 10',
            'unset surface',
            f'splot "{csv_name}" matrix columnheaders rowheaders using 1:2:3 with lines title "adj R^2"',
        ]
        return _write_text(path, '\n'.join(lines) + '\n')

    @staticmethod
    def gnuplot_goodness_by_ratio(csv_name: str, path) -> Path:
        """adj_r2 of every sweep cell against its f_m ratio."""
        lines = [
            GP_HEADER,
            f'set output "{Path(csv_name).stem}_goodness.png"',
            'set xlabel "f_m ratio"',
            'set ylabel "adjusted R^2"',
            f'plot "{csv_name}" using "ratio_m":"adj_r2" with points pt 7 title "cells"',
        ]
        return _write_text(path, '\n'.join(lines) + '\n')

    @staticmethod
    def gnuplot_trends(csv_name: str, path) -> Path:
        lines = [
            GP_HEADER,
            f'set output "{Path(csv_name).stem}.png"',
            'set xlabel "level"',
            'set ylabel "mean alpha"',
            f'plot "{csv_name}" using 4:(strcol(1) eq "N" ? $5 : 1/0) with linespoints title "alpha vs N", \\',
            f'     "{csv_name}" using 4:(strcol(1) eq "M" ? $5 : 1/0) with linespoints title "alpha vs M"',
        ]
        return _write_text(path, '\n'.join(lines) + '\n')

    @staticmethod
    def gnuplot_densities(csv_names: Dict[int, str], path) -> Path:
        lines = [GP_HEADER, f'set output "{Path(path).stem}.png"',
                 'set xlabel "rank"', 'set ylabel "density"']
        parts = [f'"{name}" using 1:2 with lines title "NT = {nt}"'
                 for nt, name in sorted(csv_names.items())]
        lines.append('plot ' + ', \\\n     '.join(parts))
        return _write_text(path, '\n'.join(lines) + '\n')
