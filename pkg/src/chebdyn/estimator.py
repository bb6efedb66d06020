"""scikit-learn style facade over the iteration-map analysis."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .basins import iterate_points
from .fixpoints import attractors, fixed_points
from .method import MethodKind, build_method
from .poly import FactoredPolynomial, Polynomial, PolynomialError
from .symmetry import poly_symmetry_group


def check_polynomial(p) -> Polynomial:
    """Accept a Polynomial, a FactoredPolynomial or a 1-D coefficient array
    (low to high) and return a Polynomial of degree >= 2."""
    if isinstance(p, FactoredPolynomial):
        p = p.expand()
    elif not isinstance(p, Polynomial):
        arr = np.asarray(p)
        if arr.ndim != 1:
            raise ValueError(f"coefficients must be 1-D, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.number):
            raise ValueError("coefficients must be numeric")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        p = Polynomial(arr.astype(complex))
    if p.degree < 2:
        raise PolynomialError(f"need degree >= 2, got {p.degree}")
    return p


def check_points(z) -> np.ndarray:
    """Complex start points as a flat array; a real ``(n, 2)`` array is read
    as ``(x, y)`` pairs."""
    arr = np.asarray(z)
    if np.iscomplexobj(arr):
        out = arr.astype(complex).ravel()
    elif arr.ndim == 2 and arr.shape[1] == 2:
        out = arr[:, 0].astype(float) + 1j * arr[:, 1].astype(float)
    elif arr.ndim <= 1 and np.issubdtype(arr.dtype, np.number):
        out = arr.astype(complex).ravel()
    else:
        raise ValueError(f"cannot read start points of shape {arr.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("start points must be finite")
    return out


class ChebyshevBasins(BaseEstimator):
    """Fit on a polynomial; predict the basin of each start point.

    ``fit`` builds the iteration map and its attractors; ``predict`` returns
    attractor indices (``-1`` for no convergence) and ``transform`` the
    iteration counts.
    """

    def __init__(self, method: str = "chebyshev", max_iter: int = 200, tol: float = 1e-8):
        self.method = method
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        MethodKind(self.method)
        if not (int(self.max_iter) > 0 and self.tol > 0):
            raise ValueError("max_iter and tol must be positive")
        p = check_polynomial(X)
        self.polynomial_ = p
        self.bundle_ = build_method(p, self.method)
        self.fixed_points_ = fixed_points(self.bundle_)
        self.attractors_ = np.asarray(attractors(self.fixed_points_), dtype=complex)
        self.symmetry_group_ = poly_symmetry_group(p)
        return self

    def _run(self, X):
        check_is_fitted(self, "bundle_")
        return iterate_points(self.bundle_, check_points(X), self.attractors_,
                              int(self.max_iter), float(self.tol))

    def predict(self, X) -> np.ndarray:
        return self._run(X)[0]

    def transform(self, X) -> np.ndarray:
        return self._run(X)[1]

    def fit_predict(self, p, X) -> np.ndarray:
        return self.fit(p).predict(X)
