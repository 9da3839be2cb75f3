"""Named (f_m, f_w, f_c) families calibrated on the per-NT corpus statistics."""
from dataclasses import dataclass, field
from typing import Dict

from .distributions import DistributionSpec, Orientation, InvalidSpecError


@dataclass(frozen=True)
class FamilyPreset:
    """Distribution triple plus the provenance of each constant."""
    name: str
    fm: DistributionSpec
    fw: DistributionSpec
    fc: DistributionSpec
    metadata: Dict[str, str] = field(default_factory=dict)


# Hierarchy 1 is the top. The corpus functions are indexed by NT x, the
# top being x = M, so x = M + 1 - h. (M + 1 - x)^-e in h order is h^-e.
CORPUS_FIT = FamilyPreset(
    name="corpus-fit",
    fm=DistributionSpec.power(2.094, Orientation.ASCENDING),
    fw=DistributionSpec.power(0.82),
    fc=DistributionSpec.power(3.791),
    metadata={
        "fm": "word count per NT ~ 81530 x^-2.094 (decreasing term), x = M + 1 - h",
        "fw": "median per-NT rank-frequency exponent, 0.82",
        "fc": "frequency share per NT ~ 83.84 (9 - x)^-3.791, i.e. h^-3.791",
    },
)

CORPUS_FIT_EXP = FamilyPreset(
    name="corpus-fit-exp",
    fm=DistributionSpec.exponential(2.094, Orientation.ASCENDING),
    fw=DistributionSpec.exponential(0.82),
    fc=DistributionSpec.exponential(3.791),
    metadata={
        "fm": "exp(-2.094 i) over NT order, x = M + 1 - h",
        "fw": "exp(-0.82 j)",
        "fc": "exp(-3.791 h)",
    },
)

FAMILY_PRESETS = {p.name: p for p in (CORPUS_FIT, CORPUS_FIT_EXP)}
FAMILY_PRESET_ALIASES = {"table2": "corpus-fit", "table2-exp": "corpus-fit-exp"}


def get_family_preset(name: str) -> FamilyPreset:
    try:
        key = name.strip().lower().replace("_", "-")
        return FAMILY_PRESETS[FAMILY_PRESET_ALIASES.get(key, key)]
    except KeyError:
        raise InvalidSpecError(
            f"Unknown family preset {name!r}; choose from {sorted(FAMILY_PRESETS)}"
        )
