"""scikit-learn style estimator wrapping the spectral coloring pipeline."""

from __future__ import annotations

from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .coloring import Status, color2, colorK
from .eigen import DEFAULT_TOL, START_SEED
from .validation import check_hypergraph, check_labels

__all__ = ["SpectralHypergraphColoring"]


class SpectralHypergraphColoring(ClusterMixin, BaseEstimator):
    """Color the vertices of a hypergraph so that no edge is monochromatic.

    Parameters
    ----------
    n_colors : int, default=2
        Number of colors. 2 runs the sign-split pipeline, larger values embed
        with ``n_colors - 1`` eigenvectors and cluster with k-means.
    tol : float, default=1e-8
        Residual tolerance of the eigensolver, relative to ``max(1, ||A||_inf)``.
    max_iter : int or None, default=None
        Eigensolver iteration cap; ``None`` scales with the number of vertices.
    n_init : int, default=10
        k-means restarts (``n_colors > 2`` only).
    random_state : int
        Seed of the eigensolver start block and of k-means.

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
        Color of vertex ``v`` at index ``v - 1``.
    status_ : Status
    proper_ : bool
    witness_edges_ : list of int
        Indices of monochromatic edges; empty on success.
    outcome_ : ColorOutcome
    """

    def __init__(self, n_colors=2, tol=DEFAULT_TOL, max_iter=None, n_init=10, random_state=START_SEED):
        self.n_colors = n_colors
        self.tol = tol
        self.max_iter = max_iter
        self.n_init = n_init
        self.random_state = random_state

    def fit(self, X, y=None, num_vertices=None):
        """Color ``X``, a hypergraph, edge list or incidence matrix.

        ``y``, if given, is the planted coloring; the trajectory then records
        the mismatch against it after each round.
        """
        h = check_hypergraph(X, num_vertices)
        planted = check_labels(y, h.num_vertices)
        if self.n_colors == 2:
            outcome = color2(h, tol=self.tol, max_iter=self.max_iter, planted=planted,
                             seed=self.random_state)
        else:
            outcome = colorK(h, self.n_colors, tol=self.tol, max_iter=self.max_iter,
                             planted=planted, seed=self.random_state, n_init=self.n_init)
        self.outcome_ = outcome
        self.labels_ = outcome.coloring.labels.copy()
        self.status_ = outcome.status
        self.proper_ = outcome.status is Status.SUCCESS
        self.witness_edges_ = list(outcome.witness_edges)
        self.n_vertices_ = h.num_vertices
        return self

    @property
    def coloring_(self):
        check_is_fitted(self, "outcome_")
        return self.outcome_.coloring
