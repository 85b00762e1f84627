"""scikit-learn adapters for weighted least squares and scaled projections.

These wrap the functional API; they add no numerics of their own.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .bounds import bental_teboulle, stewart_oleary
from .linalg import Subspace, orthonormal_range
from .oblique import DiagonalWeight, weighted_projection

__all__ = ["WeightedLeastSquares", "ScaledProjector"]


class WeightedLeastSquares(RegressorMixin, BaseEstimator):
    """Minimise ``sum_i w_i |x_i . coef - y_i|^2`` over ``coef``.

    The fitted coefficients are ``(X^T W X)^{-1} X^T W y``. Alongside them
    the estimator records the norm of the scaled projection ``X (X^T W X)^{-1} X^T W``
    and the weight-independent bound on that norm.

    Parameters
    ----------
    compute_bound : bool
        Also compute ``projection_bound_``, the supremum of the projection
        norm over all positive weights (exhaustive in ``n_samples``; keep it
        small).

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
    projection_norm_ : float
    projection_bound_ : float or None
    n_features_in_ : int
    """

    def __init__(self, compute_bound=False):
        self.compute_bound = compute_bound

    def fit(self, X, y, sample_weight=None):
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        w = np.ones(X.shape[0]) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        if w.shape != (X.shape[0],):
            raise ValueError("sample_weight must have one entry per sample")
        W = DiagonalWeight.positive_definite(w)
        P = weighted_projection(X, W)
        sq = np.sqrt(w)
        self.coef_, *_ = np.linalg.lstsq(sq[:, None] * X, sq * y, rcond=None)
        self.projection_norm_ = P.norm()
        self.projection_bound_ = None
        if self.compute_bound:
            self.projection_bound_ = stewart_oleary(orthonormal_range(X), samples=0).max_over_Q
        self._X = X
        self._weight = W
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_

    def hull_decomposition(self):
        """Fitted projection as a convex combination of unweighted subset fits."""
        check_is_fitted(self, "coef_")
        return bental_teboulle(self._X, self._weight)


class ScaledProjector(TransformerMixin, BaseEstimator):
    """Apply the scaled projection onto ``span(basis)`` with diagonal ``weights``.

    ``transform`` maps each row ``x`` to ``P x``.
    """

    def __init__(self, basis=None, weights=None):
        self.basis = basis
        self.weights = weights

    def fit(self, X=None, y=None):
        A = np.asarray(self.basis, dtype=float)
        if A.ndim == 1:
            A = A[:, None]
        w = np.ones(A.shape[0]) if self.weights is None else self.weights
        self.projection_ = weighted_projection(A, DiagonalWeight.positive_definite(w))
        self.n_features_in_ = A.shape[0]
        return self

    def transform(self, X):
        check_is_fitted(self, "projection_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return (X @ self.projection_.matrix.T).real
