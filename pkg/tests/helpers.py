"""Shared test oracles, independent of the library's own code paths."""

import numpy as np

from compx import ComplexityFamily
from compx.families import transform_scalar


def ols_fit(family, sizes, values):
    """Normal-equations OLS via numpy's SVD-backed polyfit (oracle only)."""
    y = np.asarray(values, dtype=float)
    if family is ComplexityFamily.CONSTANT:
        return float(y.mean()), 0.0
    g = np.asarray([transform_scalar(family, s) for s in sizes])
    if np.ptp(g) == 0:
        raise ZeroDivisionError("degenerate")
    slope, intercept = np.polyfit(g, y, 1)
    return float(intercept), float(slope)


def brute_force_loo(family, sizes, values):
    """Leave-one-out MSE by literally refitting with each row held out."""
    n = len(sizes)
    errors = []
    for i in range(n):
        rest_sizes = [s for j, s in enumerate(sizes) if j != i]
        rest_values = [v for j, v in enumerate(values) if j != i]
        try:
            intercept, slope = ols_fit(family, rest_sizes, rest_values)
        except ZeroDivisionError:
            return float("inf")
        pred = intercept + slope * transform_scalar(family, sizes[i])
        errors.append((values[i] - pred) ** 2)
    return sum(errors) / n
