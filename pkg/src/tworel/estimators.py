"""scikit-learn style wrappers.

``ReliabilityTransformer`` turns a list of graphs into a coefficient matrix, so
reliability polynomials can feed a pipeline. ``AttractorEstimator`` fits a
point cloud to one graph.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dynamics import DEFAULT_BUDGET, DEFAULT_DEPTH, attractor
from .multigraph import Multigraph
from .reliability import ReliabilityEngine

__all__ = ["ReliabilityTransformer", "AttractorEstimator"]


class ReliabilityTransformer(TransformerMixin, BaseEstimator):
    """Graphs to rows of reliability coefficients (lowest power first).

    Rows are zero-padded to the largest degree seen in ``fit``; longer
    polynomials at transform time raise. With ``exact=True`` the matrix holds
    ``Fraction`` objects instead of floats.
    """

    def __init__(self, exact: bool = False):
        self.exact = exact

    def _polys(self, X):
        engine = ReliabilityEngine()
        out = []
        for g in X:
            if not isinstance(g, Multigraph):
                raise TypeError(f"expected Multigraph, got {type(g).__name__}")
            out.append(engine.trel(g))
        return out

    def fit(self, X, y=None):
        polys = self._polys(X)
        self.n_coefficients_ = max((len(f.coeffs) for f in polys), default=0)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_coefficients_")
        polys = self._polys(X)
        width = self.n_coefficients_
        rows = []
        for f in polys:
            if len(f.coeffs) > width:
                raise ValueError(f"degree {f.degree} exceeds the fitted width {width - 1}")
            cs = list(f.coeffs) + [0] * (width - len(f.coeffs))
            rows.append(cs if self.exact else [float(c) for c in cs])
        if self.exact:
            arr = np.empty((len(rows), width), dtype=object)
            for i, r in enumerate(rows):
                arr[i, :] = r
            return arr
        return np.array(rows, dtype=float).reshape(len(rows), width)


class AttractorEstimator(BaseEstimator):
    """Inverse-orbit cloud of the two-terminal attractor of one graph."""

    def __init__(self, depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_BUDGET, seed: int | None = 0):
        self.depth = depth
        self.budget = budget
        self.seed = seed

    def fit(self, X: Multigraph, y=None):
        rep = attractor(X, self.depth, self.budget, self.seed)
        self.polynomial_ = rep.polynomial
        self.structure_ = rep.structure
        self.origin_ = rep.origin
        self.points_ = rep.cloud.points
        self.depths_ = rep.cloud.depths
        self.budget_hit_ = rep.cloud.budget_hit
        return self

    def distance(self, z) -> np.ndarray:
        """Distance from each query point to the fitted cloud."""
        check_is_fitted(self, "points_")
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.min(np.abs(z[:, None] - self.points_[None, :]), axis=1)
