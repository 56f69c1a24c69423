"""Scikit-learn style front end for complexity fitting.

``ComplexityEstimator`` treats sample sizes as the single feature and the
measured cost (seconds or bytes) as the target, so a fitted campaign can be
inspected, cross-validated, or embedded anywhere a regressor is accepted.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from .fitting import MeasurementSeries, Resource, fit_all, predict_at


def _as_sizes(X):
    """Validate X as a single column of positive integer sizes."""
    X = check_array(X, ensure_2d=False, dtype="numeric", ensure_min_samples=1)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single size feature, got {X.shape[1]} columns")
        X = X[:, 0]
    sizes = np.asarray(X, dtype=float)
    if np.any(sizes < 1) or np.any(sizes != np.floor(sizes)):
        raise ValueError("sample sizes must be positive integers")
    return sizes.astype(int)


class ComplexityEstimator(BaseEstimator, RegressorMixin):
    """Select the best-fitting complexity family for (size, cost) data.

    Parameters
    ----------
    alpha : float, default=0.005
        Risk level for the F test of the winner against an intercept-only
        model.
    resource : {"time", "memory"}, default="time"
        Label carried through to the underlying measurement series.

    Attributes
    ----------
    result_ : BenchmarkResult
        Full per-family fits and ranking.
    best_family_ : ComplexityFamily
        The family with the smallest leave-one-out MSE.
    p_value_ : float or None
        Significance of the winner vs. intercept-only; None for CONSTANT.
    significant_ : bool
        Whether p_value_ < alpha.

    Examples
    --------
    >>> est = ComplexityEstimator().fit([2, 4, 8, 16, 32], [4, 16, 64, 256, 1024])
    >>> est.best_family_.name
    'QUADRATIC'
    """

    def __init__(self, alpha=0.005, resource="time"):
        self.alpha = alpha
        self.resource = resource

    def fit(self, X, y):
        """Fit all seven families to sizes X and costs y.

        X may be a 1-d sequence of sizes or an (n, 1) column. Replicated
        sizes are welcome; every row enters the fit independently.
        """
        sizes = _as_sizes(X)
        y = check_array(y, ensure_2d=False, dtype="numeric")
        if y.ndim != 1:
            raise ValueError("y must be one-dimensional")
        if len(y) != len(sizes):
            raise ValueError(f"X and y length mismatch: {len(sizes)} vs {len(y)}")

        series = MeasurementSeries(Resource(self.resource), tuple(sizes), tuple(y))
        self.result_ = fit_all(series, alpha=self.alpha)
        self.fits_ = self.result_.fits
        self.best_family_ = self.result_.best
        self.p_value_ = self.result_.p_value
        self.significant_ = self.result_.significant
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        """Extrapolate the best model's cost at each size, clamped at >= 0."""
        if not hasattr(self, "result_"):
            raise NotFittedError("ComplexityEstimator is not fitted; call fit first")
        sizes = _as_sizes(X)
        best = self.result_.best_fit
        return np.array([predict_at(best, int(n)) for n in sizes])
