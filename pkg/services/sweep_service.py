"""Sweep service: factorial parameter sweeps over the selection model."""
import enum
import itertools
import logging
import multiprocessing
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from dotenv import dotenv_values

from distributions import (
    DistributionSpec, Family, Orientation, format_spec, get_family_preset, parse_spec
)
from fitkit import FitResult, fit_power_loglog, rank_series
from hsmodel import HierarchySpec, build_instance, expected_frequencies, simulate

logger = logging.getLogger(__name__)

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

SWEEP_COLUMNS = (
    'cell_id', 'M', 'N', 'T', 'ratio_m', 'ratio_w', 'ratio_c',
    'replicate', 'seed', 'alpha', 'adj_r2', 'n_zero',
)
FACTORS = ('M', 'N', 'T', 'ratio_m', 'ratio_w', 'ratio_c', 'replicate')


class SweepConfigError(ValueError):
    """Raised when a sweep configuration is invalid."""
    pass


class SweepMode(enum.Enum):
    MONTECARLO = "montecarlo"
    EXPECTED = "expected"


class Role(enum.Enum):
    FM = "fm"
    FW = "fw"
    FC = "fc"


def mix_seed(master_seed: int, cell_id: int) -> int:
    """
    Per-cell seed: one splitmix64 step from state master_seed + cell_id * 0x9E3779B97F4A7C15.

    Seeds depend only on (master_seed, cell_id), never on execution order.
    """
    z = (int(master_seed) + int(cell_id) * GOLDEN_GAMMA + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def parse_level(text, role: Role) -> DistributionSpec:
    """
    Parse one factor level.

    A bare number is a triangular ratio. f_m triangular levels without an
    orientation suffix are ascending (the top hierarchy holds the fewest
    objects); every other level defaults to descending.
    """
    if isinstance(text, DistributionSpec):
        return text
    if isinstance(text, (int, float)):
        text = repr(float(text))
    raw = str(text).strip()
    try:
        raw = f"tri:{float(raw)!r}"
    except ValueError:
        pass
    spec = parse_spec(raw, Orientation.DESCENDING)
    if role == Role.FM and spec.family == Family.TRIANGULAR and raw.count(':') == 1:
        spec = DistributionSpec.triangular(spec.param, Orientation.ASCENDING)
    return spec


def _split_list(value: str) -> List[str]:
    # Semicolons separate levels that themselves contain commas (explicit weights).
    sep = ';' if ';' in value else ','
    return [item.strip() for item in value.split(sep) if item.strip()]


@dataclass(frozen=True)
class SweepConfig:
    """Factor levels of a full-factorial sweep.

    With ``couple_fc`` each cell's f_c is a descending triangular ramp using the
    cell's f_m ratio, and ``fc_levels`` is ignored.
    """
    m_levels: Tuple[int, ...]
    n_levels: Tuple[int, ...]
    draws: int
    fm_levels: Tuple[DistributionSpec, ...]
    fw_levels: Tuple[DistributionSpec, ...]
    fc_levels: Tuple[DistributionSpec, ...]
    replicates: int = 1
    master_seed: int = 20130526
    mode: SweepMode = SweepMode.MONTECARLO
    name: str = 'sweep'
    couple_fc: bool = False
    max_rank: Optional[int] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        for label, levels in (('M', self.m_levels), ('N', self.n_levels),
                              ('fm', self.fm_levels), ('fw', self.fw_levels),
                              ('fc', self.fc_levels)):
            if not levels:
                raise SweepConfigError(f"Sweep needs at least one {label} level")
        if any(m < 1 for m in self.m_levels):
            raise SweepConfigError("M levels must be >= 1")
        if any(n < 1 for n in self.n_levels):
            raise SweepConfigError("N levels must be >= 1")
        if self.draws < 1:
            raise SweepConfigError(f"draws must be >= 1, got {self.draws}")
        if self.replicates < 1:
            raise SweepConfigError(f"replicates must be >= 1, got {self.replicates}")
        if self.couple_fc and any(s.family != Family.TRIANGULAR for s in self.fm_levels):
            raise SweepConfigError("couple_fc needs triangular f_m levels")

    @property
    def n_cells(self) -> int:
        fc = 1 if self.couple_fc else len(self.fc_levels)
        return (len(self.m_levels) * len(self.n_levels) * len(self.fm_levels)
                * len(self.fw_levels) * fc * self.replicates)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'm_levels': list(self.m_levels),
            'n_levels': list(self.n_levels),
            'draws': self.draws,
            'fm_levels': [format_spec(s) for s in self.fm_levels],
            'fw_levels': [format_spec(s) for s in self.fw_levels],
            'fc_levels': [format_spec(s) for s in self.fc_levels],
            'replicates': self.replicates,
            'master_seed': self.master_seed,
            'mode': self.mode.value,
            'couple_fc': self.couple_fc,
            'max_rank': self.max_rank,
            'metadata': dict(self.metadata),
        }

    @classmethod
    def from_mapping(cls, values: Mapping, defaults: Optional["SweepConfig"] = None) -> "SweepConfig":
        """
        Build a config from flat key/value pairs (file, API body or CLI).

        Keys: name, m_levels, n_levels, draws, fm, fw, fc, family, replicates,
        master_seed, mode, couple_fc, max_rank. List values are strings
        separated by commas or semicolons, or JSON lists.
        """
        data = {str(k).strip().lower(): v for k, v in values.items() if v is not None}

        def as_list(key):
            value = data[key]
            if isinstance(value, (list, tuple)):
                return list(value)
            return _split_list(str(value))

        try:
            kwargs = {}
            if defaults is not None:
                kwargs = {f: getattr(defaults, f) for f in cls.__dataclass_fields__}
            if 'name' in data:
                kwargs['name'] = str(data['name'])
            if 'm_levels' in data:
                kwargs['m_levels'] = tuple(int(v) for v in as_list('m_levels'))
            if 'n_levels' in data:
                kwargs['n_levels'] = tuple(int(v) for v in as_list('n_levels'))
            if 'draws' in data:
                kwargs['draws'] = int(float(data['draws']))
            if 'family' in data:
                preset = get_family_preset(str(data['family']))
                kwargs['fm_levels'] = (preset.fm,)
                kwargs['fw_levels'] = (preset.fw,)
                kwargs['fc_levels'] = (preset.fc,)
                kwargs['metadata'] = dict(preset.metadata)
            for key, role in (('fm', Role.FM), ('fw', Role.FW), ('fc', Role.FC)):
                if key in data:
                    kwargs[f'{key}_levels'] = tuple(parse_level(v, role) for v in as_list(key))
            if 'replicates' in data:
                kwargs['replicates'] = int(data['replicates'])
            if 'master_seed' in data:
                kwargs['master_seed'] = int(data['master_seed'])
            if 'mode' in data:
                kwargs['mode'] = SweepMode(str(data['mode']).strip().lower())
            if 'couple_fc' in data:
                kwargs['couple_fc'] = str(data['couple_fc']).strip().lower() in ('1', 'true', 'yes')
            if 'max_rank' in data and str(data['max_rank']).strip():
                kwargs['max_rank'] = int(data['max_rank'])
            config = cls(**kwargs)
        except TypeError as e:
            raise SweepConfigError(f"Incomplete sweep configuration: {e}")
        except ValueError as e:
            if isinstance(e, SweepConfigError):
                raise
            raise SweepConfigError(f"Invalid sweep configuration: {e}")
        config.validate()
        return config

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        """Read a flat ``key=value`` file (dotenv syntax)."""
        values = dotenv_values(path)
        if not values:
            raise SweepConfigError(f"Sweep config {path} is empty or unreadable")
        return cls.from_mapping(values)


@dataclass(frozen=True)
class SweepCell:
    """One sweep cell. A failed cell keeps ``error`` and has no fit values."""
    cell_id: int
    m: int
    n: int
    draws: int
    fm: DistributionSpec
    fw: DistributionSpec
    fc: DistributionSpec
    replicate: int
    seed: int
    alpha: Optional[float] = None
    adj_r2: Optional[float] = None
    n_zero: Optional[int] = None
    fit: Optional[FitResult] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.alpha is not None

    @property
    def ratio_m(self):
        return self.fm.ratio_label()

    @property
    def ratio_w(self):
        return self.fw.ratio_label()

    @property
    def ratio_c(self):
        return self.fc.ratio_label()

    def factor(self, name: str):
        values = {
            'M': self.m, 'N': self.n, 'T': self.draws,
            'ratio_m': self.ratio_m, 'ratio_w': self.ratio_w, 'ratio_c': self.ratio_c,
            'replicate': self.replicate,
        }
        if name not in values:
            raise SweepConfigError(f"Unknown factor {name!r}; choose from {list(values)}")
        return values[name]

    def response(self, name: str) -> Optional[float]:
        if name not in ('alpha', 'adj_r2'):
            raise SweepConfigError(f"Unknown response {name!r}")
        return getattr(self, name)

    def csv_row(self) -> list:
        def blank(v):
            return '' if v is None else v
        return [
            self.cell_id, self.m, self.n, self.draws,
            self.ratio_m, self.ratio_w, self.ratio_c,
            self.replicate, self.seed,
            blank(self.alpha), blank(self.adj_r2), blank(self.n_zero),
        ]

    def to_dict(self) -> dict:
        return {
            'cell_id': self.cell_id,
            'M': self.m,
            'N': self.n,
            'T': self.draws,
            'fm': format_spec(self.fm),
            'fw': format_spec(self.fw),
            'fc': format_spec(self.fc),
            'ratio_m': self.ratio_m,
            'ratio_w': self.ratio_w,
            'ratio_c': self.ratio_c,
            'replicate': self.replicate,
            'seed': str(self.seed),
            'alpha': self.alpha,
            'adj_r2': self.adj_r2,
            'n_zero': self.n_zero,
            'error': self.error,
        }


def run_cell(cell: SweepCell, mode: SweepMode, max_rank: Optional[int] = None) -> SweepCell:
    """build_instance -> simulate / expected_frequencies -> rank_series -> fit_power_loglog."""
    try:
        spec = HierarchySpec(cell.n, cell.m, cell.fm, cell.fw, cell.fc)
        inst = build_instance(spec)
        if mode == SweepMode.EXPECTED:
            table = expected_frequencies(inst, cell.draws)
        else:
            table = simulate(inst, cell.draws, cell.seed)
        fit = fit_power_loglog(rank_series(table).truncate(max_rank))
    except ValueError as e:
        logger.warning(f"Sweep cell {cell.cell_id} (M={cell.m}, N={cell.n}) failed: {e}")
        return replace(cell, error=str(e))
    return replace(cell, alpha=fit.alpha, adj_r2=fit.adj_r2, n_zero=fit.n_zero, fit=fit)


def _run_cell_task(task):
    return run_cell(*task)


class SweepService:
    """Service for enumerating and running sweeps."""

    @staticmethod
    def enumerate_cells(config: SweepConfig) -> List[SweepCell]:
        """
        Full factorial of the config's levels times replicates.

        cell_id counts up with the replicate index varying fastest, then f_c,
        f_w, f_m, N and M.
        """
        config.validate()
        fc_levels: Sequence = (None,) if config.couple_fc else config.fc_levels
        cells = []
        combos = itertools.product(
            config.m_levels, config.n_levels, config.fm_levels,
            config.fw_levels, fc_levels, range(config.replicates),
        )
        for cell_id, (m, n, fm, fw, fc, rep) in enumerate(combos):
            if fc is None:
                fc = DistributionSpec.triangular(fm.param, Orientation.DESCENDING)
            cells.append(SweepCell(
                cell_id=cell_id, m=m, n=n, draws=config.draws,
                fm=fm, fw=fw, fc=fc, replicate=rep,
                seed=mix_seed(config.master_seed, cell_id),
            ))
        return cells

    @staticmethod
    def run_sweep(config: SweepConfig, workers: int = 1) -> List[SweepCell]:
        """
        Run every cell of ``config``.

        Args:
            config: Sweep configuration
            workers: Worker processes; 1 runs in-process

        Returns:
            Cells sorted by cell_id; output does not depend on ``workers``
        """
        cells = SweepService.enumerate_cells(config)
        total = len(cells)
        tasks = [(cell, config.mode, config.max_rank) for cell in cells]
        logger.info(
            f"Sweep {config.name!r}: {total} cells, mode={config.mode.value}, workers={workers}"
        )

        step = max(1, total // 10)
        results = []

        def collect(iterator):
            for done, cell in enumerate(iterator, start=1):
                results.append(cell)
                if done % step == 0 or done == total:
                    logger.info(f"Sweep {config.name!r}: {done}/{total} cells done")

        if workers > 1:
            with multiprocessing.Pool(workers) as pool:
                collect(pool.imap_unordered(_run_cell_task, tasks, chunksize=1))
        else:
            collect(map(_run_cell_task, tasks))

        results.sort(key=lambda c: c.cell_id)
        failed = sum(1 for c in results if not c.ok)
        if failed:
            logger.warning(f"Sweep {config.name!r}: {failed} of {total} cells failed")
        return results

