"""Ordinary least squares with an intercept."""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from statkit.special import t_two_sided


class SingularDesignError(ValueError):
    """Raised when the design matrix is rank deficient or too short."""
    pass


@dataclass(frozen=True)
class RegressionResult:
    names: List[str]
    coefficients: List[float]
    std_errors: List[float]
    p_values: List[float]
    r2: float
    n_obs: int

    def coefficient(self, name: str) -> float:
        return self.coefficients[self.names.index(name)]

    def rows(self):
        return list(zip(self.names, self.coefficients, self.std_errors, self.p_values))

    def to_dict(self) -> dict:
        return {
            'n_obs': self.n_obs,
            'r2': self.r2,
            'terms': [
                {'name': n, 'coefficient': c, 'std_error': s, 'p_value': p}
                for n, c, s, p in self.rows()
            ],
        }


def linear_regression(design, y: Sequence[float],
                      names: Optional[Sequence[str]] = None) -> RegressionResult:
    """
    Fit y = b0 + X b by least squares; an intercept column is always prepended.

    ``design`` is n x k (a 1-D sequence is treated as one predictor). Standard
    errors and t-test p-values need n > k + 1 and come back NaN otherwise.

    Raises:
        SingularDesignError: Fewer than k + 1 rows or a rank-deficient design.
    """
    X = np.asarray(design, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    yv = np.asarray(y, dtype=np.float64)
    n, k = X.shape
    if yv.shape != (n,):
        raise SingularDesignError(f"y has {yv.size} values for {n} design rows")
    if names is None:
        names = [f"x{i + 1}" for i in range(k)]
    if len(names) != k:
        raise SingularDesignError(f"{len(names)} names for {k} predictors")

    A = np.column_stack([np.ones(n), X])
    p = k + 1
    if n < p:
        raise SingularDesignError(f"Need at least {p} observations, got {n}")
    if np.linalg.matrix_rank(A) < p:
        raise SingularDesignError("Design matrix is rank deficient")

    beta, _, _, _ = np.linalg.lstsq(A, yv, rcond=None)
    resid = yv - A @ beta
    sse = float(resid @ resid)
    dy = yv - yv.mean()
    sst = float(dy @ dy)
    r2 = 1.0 - sse / sst if sst > 0 else 1.0

    df = n - p
    if df > 0:
        cov = (sse / df) * np.linalg.inv(A.T @ A)
        se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        p_values = [
            t_two_sided(b / s, df) if s > 0 else (0.0 if b != 0 else 1.0)
            for b, s in zip(beta, se)
        ]
    else:
        se = np.full(p, np.nan)
        p_values = [float('nan')] * p

    return RegressionResult(
        names=['intercept'] + list(names),
        coefficients=[float(b) for b in beta],
        std_errors=[float(s) for s in se],
        p_values=[float(v) for v in p_values],
        r2=r2,
        n_obs=n,
    )
