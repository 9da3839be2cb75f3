"""Distribution families over finite ordinal supports and weighted sampling.

These are the building blocks for f_m (object counts per hierarchy), f_w
(selection within a hierarchy) and f_c (selection of a hierarchy).
"""
import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np


class InvalidSpecError(ValueError):
    """Raised when a distribution or model specification is invalid."""
    pass


class Family(enum.Enum):
    UNIFORM = "uniform"
    TRIANGULAR = "tri"
    POWER = "pow"
    SHIFTED_POWER = "spow"
    EXPONENTIAL = "exp"
    EXPLICIT = "explicit"


class Orientation(enum.Enum):
    DESCENDING = "desc"
    ASCENDING = "asc"


@dataclass(frozen=True)
class DistributionSpec:
    """Parameterized family describing f_m, f_w or f_c.

    ``param`` is the triangular max/min ratio, the power, shifted-power or
    exponential exponent, and unused for uniform/explicit.
    """
    family: Family
    param: Optional[float] = None
    orientation: Orientation = Orientation.DESCENDING
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.family == Family.TRIANGULAR:
            if self.param is None or not math.isfinite(self.param) or self.param < 1:
                raise InvalidSpecError(f"Triangular ratio must be >= 1, got {self.param}")
        elif self.family in (Family.POWER, Family.SHIFTED_POWER, Family.EXPONENTIAL):
            if self.param is None or not math.isfinite(self.param) or self.param <= 0:
                raise InvalidSpecError(
                    f"{self.family.value} exponent must be positive, got {self.param}"
                )
        elif self.family == Family.EXPLICIT:
            if not self.weights:
                raise InvalidSpecError("Explicit distribution needs at least one weight")
            if any(not math.isfinite(w) or w <= 0 for w in self.weights):
                raise InvalidSpecError("Explicit weights must all be positive")

    @classmethod
    def uniform(cls) -> "DistributionSpec":
        return cls(Family.UNIFORM)

    @classmethod
    def triangular(cls, ratio: float,
                   orientation: Orientation = Orientation.DESCENDING) -> "DistributionSpec":
        return cls(Family.TRIANGULAR, float(ratio), orientation)

    @classmethod
    def power(cls, exponent: float,
              orientation: Orientation = Orientation.DESCENDING) -> "DistributionSpec":
        return cls(Family.POWER, float(exponent), orientation)

    @classmethod
    def shifted_power(cls, exponent: float,
                      orientation: Orientation = Orientation.DESCENDING) -> "DistributionSpec":
        return cls(Family.SHIFTED_POWER, float(exponent), orientation)

    @classmethod
    def exponential(cls, rate: float,
                    orientation: Orientation = Orientation.DESCENDING) -> "DistributionSpec":
        return cls(Family.EXPONENTIAL, float(rate), orientation)

    @classmethod
    def explicit(cls, weights: Sequence[float]) -> "DistributionSpec":
        return cls(Family.EXPLICIT, weights=tuple(float(w) for w in weights))

    @property
    def is_uniform(self) -> bool:
        if self.family == Family.UNIFORM:
            return True
        return self.family == Family.TRIANGULAR and self.param == 1.0

    def ratio_label(self):
        """Numeric ratio for triangular/uniform specs, else the spec string.

        Sweep outputs use this as the factor level in the ratio columns.
        """
        if self.family == Family.UNIFORM:
            return 1.0
        if self.family == Family.TRIANGULAR:
            return self.param
        return format_spec(self)


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over ranks 1..k (stored 0-based)."""
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise InvalidSpecError("Pmf needs a non-empty 1-D probability vector")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise InvalidSpecError("Pmf probabilities must be finite and non-negative")
        if abs(probs.sum() - 1.0) > 1e-12 * max(1.0, probs.size ** 0.5):
            raise InvalidSpecError(f"Pmf must sum to 1, got {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        cdf = np.cumsum(probs)
        cdf[-1] = 1.0
        cdf.setflags(write=False)
        object.__setattr__(self, "_cdf", cdf)

    @classmethod
    def from_weights(cls, weights) -> "Pmf":
        w = np.asarray(weights, dtype=np.float64)
        total = w.sum()
        if total <= 0:
            raise InvalidSpecError("Weights must have a positive sum")
        probs = w / total
        # One renormalization pass pulls the sum within rounding of 1.
        probs = probs / probs.sum()
        return cls(probs)

    @property
    def support_size(self) -> int:
        return int(self.probs.size)

    @property
    def cdf(self) -> np.ndarray:
        return self._cdf

    def __len__(self) -> int:
        return self.support_size

    def __getitem__(self, rank: int) -> float:
        """Probability of 1-based rank."""
        if rank < 1 or rank > self.support_size:
            raise IndexError(f"Rank {rank} outside 1..{self.support_size}")
        return float(self.probs[rank - 1])


def _ramp(spec: DistributionSpec, k: int) -> np.ndarray:
    """Unnormalized weights for ranks 1..k in the family's natural order."""
    i = np.arange(1, k + 1, dtype=np.float64)
    if spec.family == Family.UNIFORM:
        return np.ones(k)
    if spec.family == Family.TRIANGULAR:
        rho = spec.param
        return rho - (rho - 1.0) * (i - 1.0) / (k - 1.0)
    if spec.family == Family.POWER:
        return i ** (-spec.param)
    if spec.family == Family.SHIFTED_POWER:
        return (k + 1.0 - i) ** (-spec.param)
    if spec.family == Family.EXPONENTIAL:
        # Shifted so the first weight is 1; avoids underflow for large k.
        return np.exp(-spec.param * (i - 1.0))
    raise InvalidSpecError(f"Unknown family {spec.family}")


def make_pmf(spec: DistributionSpec, k: int) -> Pmf:
    """
    Build the pmf of ``spec`` over a support of size k.

    Triangular: weight(i) = rho - (rho - 1)(i - 1)/(k - 1), so weight(1) = rho
    and weight(k) = 1. Power: i^-e. Shifted power: (k + 1 - i)^-e.
    Exponential: e^(-rate * i). An ascending orientation reverses the weights.
    k = 1 always yields [1].

    Raises:
        InvalidSpecError: k < 1, or explicit weights of the wrong length.
    """
    if k is None or int(k) != k or k < 1:
        raise InvalidSpecError(f"Support size must be >= 1, got {k}")
    k = int(k)
    if spec.family == Family.EXPLICIT:
        if len(spec.weights) != k:
            raise InvalidSpecError(
                f"Explicit weights have length {len(spec.weights)}, support size is {k}"
            )
        return Pmf.from_weights(spec.weights)
    if k == 1:
        return Pmf(np.ones(1))
    weights = _ramp(spec, k)
    if spec.orientation == Orientation.ASCENDING:
        weights = weights[::-1]
    return Pmf.from_weights(weights)


def make_rng(seed: int) -> np.random.Generator:
    """Random stream used everywhere: numpy PCG64 seeded with a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def sample(pmf: Pmf, rng: np.random.Generator) -> int:
    """Draw one 1-based rank. Consumes exactly one uniform variate."""
    u = rng.random()
    return int(np.searchsorted(pmf.cdf, u, side="right")) + 1


def sample_many(pmf: Pmf, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized ``sample``: ``size`` uniforms, 0-based indices."""
    u = rng.random(size)
    return np.searchsorted(pmf.cdf, u, side="right")


def parse_spec(text: str,
               default_orientation: Orientation = Orientation.DESCENDING) -> DistributionSpec:
    """
    Parse the spec string grammar used by the CLI and config files.

    ``uniform``, ``tri:<ratio>[:asc|:desc]``, ``pow:<e>[:asc|:desc]``,
    ``spow:<e>[:asc|:desc]``, ``exp:<rate>[:asc|:desc]``, ``explicit:<w1,w2,...>``.
    ``default_orientation`` applies when the suffix is omitted.
    """
    if text is None or not str(text).strip():
        raise InvalidSpecError("Empty distribution spec")
    parts = [p.strip() for p in str(text).strip().split(":")]
    name = parts[0].lower()

    if name == "uniform":
        if len(parts) != 1:
            raise InvalidSpecError(f"'uniform' takes no parameters: {text!r}")
        return DistributionSpec.uniform()

    if name == "explicit":
        if len(parts) != 2 or not parts[1]:
            raise InvalidSpecError(f"Expected explicit:<w1,w2,...>, got {text!r}")
        try:
            weights = [float(w) for w in parts[1].split(",")]
        except ValueError:
            raise InvalidSpecError(f"Invalid explicit weights in {text!r}")
        return DistributionSpec.explicit(weights)

    families = {
        "tri": Family.TRIANGULAR,
        "pow": Family.POWER,
        "spow": Family.SHIFTED_POWER,
        "exp": Family.EXPONENTIAL,
    }
    if name not in families or len(parts) not in (2, 3):
        raise InvalidSpecError(f"Unrecognized distribution spec {text!r}")
    try:
        param = float(parts[1])
    except ValueError:
        raise InvalidSpecError(f"Invalid parameter in {text!r}")

    orientation = default_orientation
    if len(parts) == 3:
        try:
            orientation = Orientation(parts[2].lower())
        except ValueError:
            raise InvalidSpecError(f"Orientation must be 'asc' or 'desc' in {text!r}")
    return DistributionSpec(families[name], param, orientation)


def format_spec(spec: DistributionSpec) -> str:
    """Inverse of ``parse_spec`` (always writes the orientation suffix)."""
    if spec.family == Family.UNIFORM:
        return "uniform"
    if spec.family == Family.EXPLICIT:
        return "explicit:" + ",".join(f"{w:g}" for w in spec.weights)
    return f"{spec.family.value}:{spec.param:g}:{spec.orientation.value}"
