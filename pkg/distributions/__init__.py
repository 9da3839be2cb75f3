"""Distribution families, pmf construction and seeded sampling."""
from .distributions import (
    DistributionSpec, Family, Orientation, Pmf, InvalidSpecError,
    make_pmf, make_rng, sample, sample_many, parse_spec, format_spec
)
from .presets import FamilyPreset, CORPUS_FIT, CORPUS_FIT_EXP, get_family_preset

__all__ = [
    'DistributionSpec', 'Family', 'Orientation', 'Pmf', 'InvalidSpecError',
    'make_pmf', 'make_rng', 'sample', 'sample_many', 'parse_spec', 'format_spec',
    'FamilyPreset', 'CORPUS_FIT', 'CORPUS_FIT_EXP', 'get_family_preset'
]
