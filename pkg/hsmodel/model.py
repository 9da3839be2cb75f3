"""Hierarchical Selection Model: instances, exact probabilities and Monte Carlo runs."""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from distributions import (
    DistributionSpec, Pmf, InvalidSpecError, make_pmf, make_rng
)

logger = logging.getLogger(__name__)

# Draws are generated in blocks so memory stays bounded for large T.
DRAW_BLOCK = 1 << 20


@dataclass(frozen=True)
class HierarchySpec:
    """N objects in M hierarchies with the three shaping distributions."""
    n_objects: int
    n_hierarchies: int
    fm: DistributionSpec
    fw: DistributionSpec
    fc: DistributionSpec

    def validate(self) -> None:
        if self.n_hierarchies < 1:
            raise InvalidSpecError(f"Need at least one hierarchy, got M={self.n_hierarchies}")
        if self.n_objects < self.n_hierarchies:
            raise InvalidSpecError(
                f"N={self.n_objects} < M={self.n_hierarchies}: "
                "cannot give every hierarchy at least one object"
            )


@dataclass(frozen=True, eq=False)
class ModelInstance:
    """Concrete model. Index 0 of every per-hierarchy sequence is the top hierarchy."""
    counts: Tuple[int, ...]
    fc_pmf: Pmf
    fw_pmfs: Tuple[Pmf, ...]

    def __post_init__(self):
        if len(self.counts) != self.fc_pmf.support_size:
            raise InvalidSpecError("fc support must equal the number of hierarchies")
        for n_h, pmf in zip(self.counts, self.fw_pmfs):
            if n_h < 1 or pmf.support_size != n_h:
                raise InvalidSpecError("Each hierarchy needs >= 1 object and a matching fw pmf")
        if len(self.fw_pmfs) != len(self.counts):
            raise InvalidSpecError("One fw pmf per hierarchy is required")

    @property
    def n_hierarchies(self) -> int:
        return len(self.counts)

    @property
    def n_objects(self) -> int:
        return int(sum(self.counts))

    @property
    def offsets(self) -> np.ndarray:
        """0-based object index where each hierarchy starts."""
        return np.concatenate(([0], np.cumsum(self.counts)[:-1])).astype(np.int64)

    def object_layout(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(object_id, hierarchy, within_rank) arrays; ids run 1..N, top hierarchy first."""
        hierarchy = np.repeat(np.arange(1, self.n_hierarchies + 1), self.counts)
        within = np.concatenate([np.arange(1, n + 1) for n in self.counts])
        object_id = np.arange(1, self.n_objects + 1)
        return object_id, hierarchy, within


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """One row per object; counts are reals so expected and simulated tables share a type."""
    object_id: np.ndarray
    hierarchy: np.ndarray
    within_rank: np.ndarray
    count: np.ndarray
    total: float

    def __len__(self) -> int:
        return int(self.object_id.size)

    def rows(self) -> List[Tuple[int, int, int, float]]:
        order = np.argsort(self.object_id, kind="stable")
        return [
            (int(self.object_id[i]), int(self.hierarchy[i]),
             int(self.within_rank[i]), float(self.count[i]))
            for i in order
        ]


def apportion(total: int, pmf: Pmf) -> List[int]:
    """
    Largest-remainder apportionment of ``total`` over ``pmf``, floor of 1 per part.

    Ties in remainders go to the lower index. Parts that come out at 0 are raised
    to 1, taking the deficit one unit at a time from the currently largest part.
    """
    quotas = total * pmf.probs
    counts = np.floor(quotas).astype(np.int64)
    remainders = quotas - counts
    leftover = int(total - counts.sum())
    # Stable sort on -remainder keeps lower indices first among ties.
    order = np.argsort(-remainders, kind="stable")
    for idx in order[:leftover]:
        counts[idx] += 1

    for idx in range(counts.size):
        while counts[idx] < 1:
            largest = int(np.argmax(counts))
            if counts[largest] <= 1:
                raise InvalidSpecError(f"Cannot give {counts.size} parts at least 1 of {total}")
            counts[largest] -= 1
            counts[idx] += 1
    return [int(c) for c in counts]


def build_instance(spec: HierarchySpec) -> ModelInstance:
    """
    Build a concrete model from a HierarchySpec.

    Object counts are apportioned from make_pmf(fm, M); fw is instantiated per
    hierarchy over that hierarchy's own n_h ranks.

    Raises:
        InvalidSpecError: If N < M or any distribution spec is invalid.
    """
    spec.validate()
    n, m = spec.n_objects, spec.n_hierarchies
    if m > n / 10:
        logger.warning(f"M={m} is not much smaller than N={n} (M > N/10)")

    counts = apportion(n, make_pmf(spec.fm, m))
    fc_pmf = make_pmf(spec.fc, m)
    fw_pmfs = tuple(make_pmf(spec.fw, n_h) for n_h in counts)
    return ModelInstance(counts=tuple(counts), fc_pmf=fc_pmf, fw_pmfs=fw_pmfs)


def exact_pmf(inst: ModelInstance) -> np.ndarray:
    """p(object) = fc[h] * fw_h[j], in object_id order."""
    return np.concatenate([
        inst.fc_pmf.probs[h] * inst.fw_pmfs[h].probs
        for h in range(inst.n_hierarchies)
    ])


def _table(inst: ModelInstance, counts: np.ndarray, total: float) -> FrequencyTable:
    object_id, hierarchy, within = inst.object_layout()
    return FrequencyTable(
        object_id=object_id,
        hierarchy=hierarchy,
        within_rank=within,
        count=np.asarray(counts, dtype=np.float64),
        total=float(total),
    )


def simulate(inst: ModelInstance, draws: int, seed: int) -> FrequencyTable:
    """
    Run ``draws`` two-step selections: a hierarchy from fc, then an object from
    that hierarchy's fw. The within-hierarchy pmfs never change during the run.

    Deterministic in (inst, draws, seed).
    """
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    rng = make_rng(seed)
    offsets = inst.offsets
    counts = np.zeros(inst.n_objects, dtype=np.int64)

    remaining = int(draws)
    while remaining > 0:
        block = min(remaining, DRAW_BLOCK)
        h = np.searchsorted(inst.fc_pmf.cdf, rng.random(block), side="right")
        u = rng.random(block)
        objects = np.empty(block, dtype=np.int64)
        for level in range(inst.n_hierarchies):
            mask = h == level
            if not mask.any():
                continue
            local = np.searchsorted(inst.fw_pmfs[level].cdf, u[mask], side="right")
            objects[mask] = offsets[level] + local
        counts += np.bincount(objects, minlength=inst.n_objects)
        remaining -= block

    return _table(inst, counts, int(counts.sum()))


def expected_frequencies(inst: ModelInstance, draws: int) -> FrequencyTable:
    """Noise-free counterpart of ``simulate``: count = draws * exact_pmf."""
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    counts = draws * exact_pmf(inst)
    return _table(inst, counts, float(draws))
