"""Named sweep presets for the triangular and corpus-calibrated experiments."""
from typing import Callable, Dict

import numpy as np

from distributions import DistributionSpec, Orientation, CORPUS_FIT
from services.sweep_service import SweepConfig, SweepConfigError, SweepMode

DEFAULT_MASTER_SEED = 20130526

VARY_CHOICES = ('fm', 'both')


def _tri_asc(ratios):
    return tuple(DistributionSpec.triangular(float(r), Orientation.ASCENDING) for r in ratios)


def _tri_desc(ratios):
    return tuple(DistributionSpec.triangular(float(r), Orientation.DESCENDING) for r in ratios)


def goodness_plane(master_seed: int = DEFAULT_MASTER_SEED, **_) -> SweepConfig:
    """Goodness over the f_m x f_c ratio plane, f_w uniform, M = 5."""
    return SweepConfig(
        name='goodness-plane',
        m_levels=(5,),
        n_levels=(50000,),
        draws=2_000_000,
        fm_levels=_tri_asc(np.arange(1.0, 10.01, 0.5).round(2)),
        fw_levels=(DistributionSpec.uniform(),),
        fc_levels=_tri_desc(np.arange(1.0, 10.01, 0.5).round(2)),
        master_seed=master_seed,
        metadata={'x_factor': 'ratio_m', 'y_factor': 'ratio_c'},
    )


def ratio_goodness(master_seed: int = DEFAULT_MASTER_SEED, vary: str = 'fm',
                   replicates: int = 10, **_) -> SweepConfig:
    """
    Goodness at f_m ratios 5, 7, 9.

    ``vary='fm'`` holds f_c at a descending ratio of 2; ``vary='both'`` gives
    f_c the same ratio as f_m.
    """
    if vary not in VARY_CHOICES:
        raise SweepConfigError(f"ratio-goodness vary must be one of {VARY_CHOICES}, got {vary!r}")
    return SweepConfig(
        name='ratio-goodness',
        m_levels=(5,),
        n_levels=(50000,),
        draws=2_000_000,
        fm_levels=_tri_asc((5, 7, 9)),
        fw_levels=(DistributionSpec.uniform(),),
        fc_levels=_tri_desc((2,)),
        replicates=replicates,
        master_seed=master_seed,
        couple_fc=(vary == 'both'),
        metadata={'vary': vary},
    )


def size_trends(master_seed: int = DEFAULT_MASTER_SEED, **_) -> SweepConfig:
    """Exponent against N and M with the corpus-calibrated corpus-fit family, expected counts."""
    return SweepConfig(
        name='size-trends',
        m_levels=(2, 3, 4, 5, 6),
        n_levels=(1000, 2000, 5000, 10000, 20000, 50000),
        draws=1_000_000,
        fm_levels=(CORPUS_FIT.fm,),
        fw_levels=(CORPUS_FIT.fw,),
        fc_levels=(CORPUS_FIT.fc,),
        master_seed=master_seed,
        mode=SweepMode.EXPECTED,
        metadata=dict(CORPUS_FIT.metadata),
    )


def factor_anova(master_seed: int = DEFAULT_MASTER_SEED, replicates: int = 5, **_) -> SweepConfig:
    """
    Three levels of each of M, f_m, f_w and f_c for the factor ANOVA and regression.

    N is kept small against T so that sampling noise in the rank tail does not
    swamp the effect of M and f_w on the goodness of fit.
    """
    return SweepConfig(
        name='factor-anova',
        m_levels=(2, 5, 12),
        n_levels=(2000,),
        draws=4_000_000,
        fm_levels=_tri_asc((2, 5, 10)),
        fw_levels=_tri_desc((1, 4, 16)),
        fc_levels=_tri_desc((2, 5, 10)),
        replicates=replicates,
        master_seed=master_seed,
    )


SWEEP_PRESETS: Dict[str, Callable[..., SweepConfig]] = {
    'goodness-plane': goodness_plane,
    'ratio-goodness': ratio_goodness,
    'size-trends': size_trends,
    'factor-anova': factor_anova,
}

# Experiment names the presets are also known by.
SWEEP_PRESET_ALIASES = {
    'fig3': 'goodness-plane',
    'fig4': 'ratio-goodness',
    'fig5': 'size-trends',
    'table2-anova': 'factor-anova',
}


def resolve_sweep_preset(name: str) -> str:
    """Canonical preset name for ``name`` or one of its aliases."""
    key = name.strip().lower().replace('_', '-')
    return SWEEP_PRESET_ALIASES.get(key, key)


def get_sweep_preset(name: str, **options) -> SweepConfig:
    """Build the named preset; unknown options are ignored by presets that don't use them."""
    try:
        factory = SWEEP_PRESETS[resolve_sweep_preset(name)]
    except KeyError:
        raise SweepConfigError(f"Unknown sweep preset {name!r}; choose from {sorted(SWEEP_PRESETS)}")
    return factory(**{k: v for k, v in options.items() if v is not None})


# Corpus columns the calibrated family was read from, indexed by NT = 1..8.
NT_LEVELS = tuple(range(1, 9))
NT_WORD_COUNTS = (81864, 16156, 9603, 6687, 5546, 4672, 4984, 8731)
NT_FREQ_PERCENT = (2.22, 1.27, 1.44, 1.50, 1.89, 2.63, 5.18, 83.87)
NT_SHIFT = 9.0
