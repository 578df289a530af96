"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils import check_array

from .exceptions import ContractError
from .hypergraph import Coloring, Hypergraph

__all__ = ["check_hypergraph", "check_labels"]


def check_hypergraph(H, num_vertices: int | None = None) -> Hypergraph:
    """Coerce ``H`` into a :class:`Hypergraph`.

    Accepted inputs:

    * a :class:`Hypergraph` (returned unchanged);
    * an iterable of edges, each an iterable of 1-based vertex ids. Without
      ``num_vertices`` the largest id present is used;
    * a 0/1 incidence matrix of shape ``(n_vertices, n_edges)``, dense or sparse.
    """
    if isinstance(H, Hypergraph):
        if num_vertices is not None and num_vertices != H.num_vertices:
            raise ContractError(f"hypergraph has {H.num_vertices} vertices, expected {num_vertices}")
        return H
    if sp.issparse(H) or isinstance(H, np.ndarray):
        B = check_array(H, accept_sparse="csc", dtype=None, ensure_min_features=0)
        B = sp.csc_matrix(B)
        if B.nnz and not np.all(np.isin(B.data, (0, 1))):
            raise ContractError("incidence matrix entries must be 0 or 1")
        B.eliminate_zeros()
        edges = [tuple((B.indices[B.indptr[j]:B.indptr[j + 1]] + 1).tolist()) for j in range(B.shape[1])]
        n = B.shape[0] if num_vertices is None else num_vertices
        return Hypergraph(n, edges)
    try:
        edges = [tuple(e) for e in H]
    except TypeError:
        raise ContractError(f"cannot interpret {type(H).__name__} as a hypergraph") from None
    if num_vertices is None:
        num_vertices = max((max(e) for e in edges if e), default=1)
    return Hypergraph(num_vertices, edges)


def check_labels(y, num_vertices: int, k: int | None = None) -> Coloring | None:
    """Planted labels as a :class:`Coloring` (``y[v - 1]`` is the color of vertex ``v``)."""
    if y is None:
        return None
    if isinstance(y, Coloring):
        labels = y
    else:
        arr = np.asarray(y)
        if arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer):
            raise ContractError("labels must be a 1-D integer array")
        labels = Coloring(arr, k)
    if len(labels) != num_vertices:
        raise ContractError(f"got {len(labels)} labels for {num_vertices} vertices")
    return labels
