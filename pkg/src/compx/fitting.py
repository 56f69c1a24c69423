"""Least-squares fits of the seven families and LOO-based model selection.

Each family is fit by ordinary least squares of the observed cost on its
transformed size (one predictor plus intercept). Candidates are ranked by
leave-one-out mean squared error, computed in closed form from the hat
matrix diagonal: the LOO residual of observation i is e_i / (1 - h_ii).
The winner is then compared against an intercept-only model with an F test.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import stats

from .errors import DegenerateFitError, InsufficientDataError
from .families import ComplexityFamily, family_order, transform, transform_scalar

# Leverage this close to 1 means the point fully determines its own fit and
# the LOO residual blows up; the family is kept but ranked last.
_LEVERAGE_TOL = 1e-12


class Resource(Enum):
    TIME = "time"
    MEMORY = "memory"


@dataclass(frozen=True)
class MeasurementSeries:
    """Observed (size, cost) pairs for one resource, replicates as rows."""

    resource: Resource
    sizes: tuple
    values: tuple

    def __post_init__(self):
        if len(self.sizes) != len(self.values):
            raise ValueError("sizes and values must have equal length")
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if any(s < 1 for s in self.sizes):
            raise ValueError("sample sizes must be positive")
        if not all(np.isfinite(v) for v in self.values):
            raise ValueError("measured values must be finite")
        if any(v < 0 for v in self.values):
            raise ValueError("measured values must be non-negative")

    def __len__(self):
        return len(self.sizes)

    @property
    def rows(self):
        return list(zip(self.sizes, self.values))

    @classmethod
    def from_rows(cls, resource, rows):
        sizes, values = zip(*rows) if rows else ((), ())
        return cls(Resource(resource), tuple(sizes), tuple(values))

    def arrays(self):
        return np.asarray(self.sizes, dtype=float), np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class FittedModel:
    """One family's OLS fit: cost ~ intercept + slope * g(size)."""

    family: ComplexityFamily
    intercept: float
    slope: float
    loo_mse: float
    residuals: tuple

    def predict(self, n):
        """Model value at size n (unclamped; see predict_at for reporting)."""
        return self.intercept + self.slope * transform(self.family, n)


@dataclass(frozen=True)
class BenchmarkResult:
    """All non-degenerate family fits plus the LOO winner and its test."""

    fits: dict
    best: ComplexityFamily
    p_value: Optional[float]
    significant: bool
    alpha: float = 0.005

    @property
    def best_fit(self) -> FittedModel:
        return self.fits[self.best]

    def ranking(self):
        """Families sorted by (loo_mse, complexity order)."""
        return sorted(self.fits, key=lambda f: (self.fits[f].loo_mse, family_order(f)))


def _leverages(family, sizes):
    """Hat matrix diagonal for the family's one-predictor design."""
    n = len(sizes)
    if family is ComplexityFamily.CONSTANT:
        return np.full(n, 1.0 / n)
    g = transform(family, sizes)
    centered = g - g.mean()
    sxx = float(centered @ centered)
    if sxx <= 0.0:
        raise DegenerateFitError(
            f"{family.name} design is degenerate: all transformed sizes equal"
        )
    return 1.0 / n + centered**2 / sxx


def fit_family(family: ComplexityFamily, series: MeasurementSeries) -> FittedModel:
    """Ordinary least squares of the series values on the family transform.

    CONSTANT reduces to the intercept-only fit (mean of the values).
    Raises DegenerateFitError when a non-constant family sees a single
    distinct transformed size.
    """
    sizes, y = series.arrays()
    n = len(series)
    min_rows = 1 if family is ComplexityFamily.CONSTANT else 2
    if n < min_rows:
        raise InsufficientDataError(f"{family.name} fit needs >= {min_rows} rows, got {n}")

    if family is ComplexityFamily.CONSTANT:
        intercept = float(y.mean())
        slope = 0.0
        fitted = np.full(n, intercept)
    else:
        g = transform(family, sizes)
        g_mean = g.mean()
        centered = g - g_mean
        sxx = float(centered @ centered)
        if sxx <= 0.0:
            raise DegenerateFitError(
                f"{family.name} design is degenerate: all transformed sizes equal"
            )
        slope = float(centered @ (y - y.mean())) / sxx
        intercept = float(y.mean() - slope * g_mean)
        fitted = intercept + slope * g

    residuals = y - fitted
    loo = _loo_from_parts(family, sizes, residuals)
    return FittedModel(
        family=family,
        intercept=intercept,
        slope=slope,
        loo_mse=loo,
        residuals=tuple(float(e) for e in residuals),
    )


def _loo_from_parts(family, sizes, residuals):
    h = _leverages(family, sizes)
    denom = 1.0 - h
    if np.any(denom < _LEVERAGE_TOL):
        return float("inf")
    loo_residuals = residuals / denom
    return float(np.mean(loo_residuals**2))


def loo_mse(model: FittedModel, series: MeasurementSeries) -> float:
    """Closed-form leave-one-out MSE of `model` on the series it was fit on.

    Equals the n-refit brute force exactly for linear least squares. A
    leverage of 1 (a point that determines its own fit) yields +inf.
    """
    sizes, y = series.arrays()
    residuals = y - (model.intercept + model.slope * transform(model.family, sizes))
    return _loo_from_parts(model.family, sizes, residuals)


def significance_test(best: FittedModel, series: MeasurementSeries, alpha: float):
    """F test of the winning one-predictor model against intercept-only.

    Returns (p_value, significant). A CONSTANT winner has nothing to test
    against and returns (None, False). With one predictor this F test is
    equivalent to the t test on the slope.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if best.family is ComplexityFamily.CONSTANT:
        return None, False
    n = len(series)
    if n < 3:
        raise InsufficientDataError("significance test needs >= 3 rows")

    sizes, y = series.arrays()
    fitted = best.intercept + best.slope * transform(best.family, sizes)
    rss_model = float(np.sum((y - fitted) ** 2))
    rss_null = float(np.sum((y - y.mean()) ** 2))

    if rss_model <= 0.0:
        # Perfect fit; if the null is also exact both models have zero
        # residual variance and the comparison degenerates to p = 0.
        return 0.0, True
    f_stat = max(0.0, (rss_null - rss_model)) / (rss_model / (n - 2))
    p = float(stats.f.sf(f_stat, 1, n - 2))
    return p, p < alpha


def fit_all(series: MeasurementSeries, alpha: float = 0.005) -> BenchmarkResult:
    """Fit every family, rank by LOO-MSE, and test the winner.

    Degenerate families are dropped from the ranking instead of failing the
    whole benchmark. Exact LOO ties resolve to the lower-order family.
    """
    if len(series) < 3:
        raise InsufficientDataError(f"need >= 3 measurements to benchmark, got {len(series)}")

    fits = {}
    for family in ComplexityFamily:
        try:
            fits[family] = fit_family(family, series)
        except DegenerateFitError:
            continue

    best = min(fits, key=lambda f: (fits[f].loo_mse, family_order(f)))
    p_value, significant = significance_test(fits[best], series, alpha)
    return BenchmarkResult(fits=fits, best=best, p_value=p_value, significant=significant, alpha=alpha)


def predict_at(model: FittedModel, n_full: int) -> float:
    """Extrapolated cost at the full dataset size, clamped at zero.

    Resource usage cannot be negative, so a negative extrapolation (possible
    with a negative intercept at small n) reports as 0.
    """
    if n_full < 1:
        raise ValueError(f"n_full must be >= 1, got {n_full}")
    return max(0.0, model.intercept + model.slope * transform_scalar(model.family, n_full))
