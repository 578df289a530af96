"""Weighted adjacency matrix of a hypergraph and its planted-model expectation.

For a hypergraph ``H = (V, E)`` the matrix ``A`` has

* ``A_ij = sum over edges e containing i and j of 1/|e|`` for ``i != j``
* ``A_ii = sum over edges e containing i of 1/|e|``

Equivalently ``A = B diag(1/|e|) B^T`` with ``B`` the 0/1 vertex-edge
incidence matrix, which is how it is built and, for large hypergraphs, how
products ``A X`` are streamed without forming ``A``.

Under the planted 2-class model with class size ``n``::

    E[A] = a1 * J - a2 * blockdiag(J_n, J_n) + a3 * I

whose smallest eigenvalue ``a3 - n a2`` is simple, separated from the rest by
``n a2``, with eigenvector ``+-1/sqrt(2n)`` split by class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .eigen import spectral_norm
from .exceptions import ContractError
from .hypergraph import Hypergraph
from .planted import PlantedParams, binom

__all__ = [
    "WeightedAdjacency",
    "ModelMoments",
    "build_matrix",
    "brute_force_matrix",
    "incidence_matrix",
    "moments",
    "compute_eta",
    "expected_matrix",
    "deviation_diagnostic",
    "DeviationReport",
    "initial_error_budget",
    "DENSE_LIMIT",
]

DENSE_LIMIT = 4096
# Largest value for which integer-scaled attachment sums stay exact in float64.
_EXACT_LIMIT = 2.0**50


class WeightedAdjacency:
    """Symmetric nonnegative ``|V| x |V|`` matrix, dense or incidence-backed.

    ``scale`` is an integer ``L`` such that ``L * A`` has integer entries
    (the lcm of the edge sizes), or ``None`` for matrices without that
    structure such as the model expectation. Refinement uses it to compare
    attachment sums exactly.
    """

    def __init__(self, dense=None, incidence=None, weights=None, scale=None):
        if (dense is None) == (incidence is None):
            raise ContractError("give exactly one of dense or incidence")
        if dense is not None:
            dense = np.asarray(dense, dtype=float)
            if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
                raise ContractError(f"expected a square matrix, got shape {dense.shape}")
            self.dim = dense.shape[0]
            self._diag = np.diag(dense).copy()
        else:
            incidence = sp.csr_matrix(incidence, dtype=float)
            weights = np.asarray(weights, dtype=float)
            self.dim = incidence.shape[0]
            self._weighted_t = sp.csr_matrix(incidence.T.multiply(weights[:, None]))
            self._diag = np.asarray(incidence @ weights).ravel()
        self._dense = dense
        self._incidence = incidence
        self._weights = weights
        self.scale = scale
        self._inf_norm = None

    @classmethod
    def from_dense(cls, matrix, scale=None) -> "WeightedAdjacency":
        return cls(dense=matrix, scale=scale)

    @property
    def shape(self):
        return (self.dim, self.dim)

    @property
    def is_dense(self) -> bool:
        return self._dense is not None

    def matmat(self, X: np.ndarray) -> np.ndarray:
        if self._dense is not None:
            return self._dense @ X
        return np.asarray(self._incidence @ (self._weighted_t @ X))

    def __matmul__(self, X):
        return self.matmat(np.asarray(X, dtype=float))

    def diagonal(self) -> np.ndarray:
        return self._diag

    def toarray(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        return (self._incidence @ self._weighted_t).toarray()

    def inf_norm(self) -> float:
        """Largest absolute row sum. Equals the maximum degree for hypergraph matrices."""
        if self._inf_norm is None:
            if self.dim == 0:
                self._inf_norm = 0.0
            elif self._dense is not None:
                self._inf_norm = float(np.abs(self._dense).sum(axis=1).max())
            else:
                self._inf_norm = float(self.matmat(np.ones(self.dim)).max())
        return self._inf_norm

    def row_sums(self) -> np.ndarray:
        return self.matmat(np.ones(self.dim))


def incidence_matrix(h: Hypergraph) -> sp.csr_matrix:
    """0/1 matrix of shape ``(|V|, |E|)`` with a 1 where vertex ``v`` lies in edge ``e``."""
    sizes = np.fromiter((len(e) for e in h.edges), dtype=np.int64, count=h.num_edges)
    rows = np.fromiter((v - 1 for e in h.edges for v in e), dtype=np.int64, count=int(sizes.sum()))
    cols = np.repeat(np.arange(h.num_edges), sizes)
    data = np.ones(rows.size)
    return sp.csr_matrix((data, (rows, cols)), shape=(h.num_vertices, h.num_edges))


def _exact_scale(h: Hypergraph) -> int | None:
    sizes = {len(e) for e in h.edges}
    if not sizes:
        return 1
    scale = math.lcm(*sizes)
    if scale * max(h.num_edges, 1) > _EXACT_LIMIT:
        return None
    return scale


def build_matrix(h: Hypergraph, dense_limit: int = DENSE_LIMIT) -> WeightedAdjacency:
    """Weighted adjacency matrix ``A`` of ``h``.

    Stored densely up to ``dense_limit`` vertices; above that, products are
    streamed through the incidence matrix.
    """
    B = incidence_matrix(h)
    weights = 1.0 / np.fromiter((len(e) for e in h.edges), dtype=float, count=h.num_edges)
    scale = _exact_scale(h)
    if h.num_vertices <= dense_limit:
        dense = (B.multiply(weights[None, :]) @ B.T).toarray()
        return WeightedAdjacency(dense=dense, scale=scale)
    return WeightedAdjacency(incidence=B, weights=weights, scale=scale)


def brute_force_matrix(h: Hypergraph) -> np.ndarray:
    """Reference construction: for every edge and every ordered pair in it, add ``1/|e|``."""
    A = np.zeros((h.num_vertices, h.num_vertices))
    for e in h.edges:
        w = 1.0 / len(e)
        for i in e:
            for j in e:
                A[i - 1, j - 1] += w
    return A


def _alphas(n: int, k: int, p: PlantedParams):
    N = k * n
    a1 = a2 = a3 = 0.0
    for m in p.sizes():
        pm = p.prob(m)
        if pm == 0.0:
            continue
        a1 += pm / m * binom(N - 2, m - 2)
        a2 += pm / m * binom(n - 2, m - 2)
        a3 += pm / m * (binom(N - 2, m - 1) - binom(n - 2, m - 1))
    return a1, a2, a3


def compute_eta(params: PlantedParams) -> float:
    """Attachment threshold ``2^-(M+2) * sum_m p_m (n-1)/m C(n-2, m-2)``.

    A vertex whose total weight towards currently miscolored vertices stays
    below this value is corrected by one refinement step with high probability.
    """
    n, M = params.n, params.M
    total = sum(params.prob(m) * (n - 1) / m * binom(n - 2, m - 2) for m in params.sizes())
    return float(total / 2 ** (M + 2))


def initial_error_budget(n: int, M: int) -> float:
    """Number of initial spectral errors the refinement analysis tolerates: ``n / (M^2 2^(2M+4))``."""
    return n / (M**2 * 2 ** (2 * M + 4))


def _block_matrix(n, k, a1, a2, a3):
    N = k * n
    blocks = np.kron(np.eye(k), np.ones((n, n)))
    return a1 * np.ones((N, N)) - a2 * blocks + a3 * np.eye(N)


def expected_matrix(params: PlantedParams) -> np.ndarray:
    """Entrywise expectation of ``A`` under the planted model, for any ``k``.

    For ``k > 2`` the same block form is used with ``C(k n - 2, .)`` in place of
    ``C(2 n - 2, .)``; the smallest eigenvalue ``a3 - n a2`` then has
    multiplicity ``k - 1``.
    """
    a1, a2, a3 = _alphas(params.n, params.k, params)
    return _block_matrix(params.n, params.k, a1, a2, a3)


@dataclass(frozen=True)
class ModelMoments:
    alpha1: float
    alpha2: float
    alpha3: float
    eta: float
    n: int

    @property
    def expected_matrix(self) -> np.ndarray:
        return _block_matrix(self.n, 2, self.alpha1, self.alpha2, self.alpha3)

    @property
    def lambda_min(self) -> float:
        return self.alpha3 - self.n * self.alpha2

    @property
    def eigen_gap(self) -> float:
        return self.n * self.alpha2


def moments(params: PlantedParams) -> ModelMoments:
    """The constants ``alpha1, alpha2, alpha3`` and ``eta`` of the 2-class model."""
    if params.k != 2:
        raise ContractError(
            f"moments are defined for the 2-class model only (got k = {params.k}); "
            "use expected_matrix for the k-class block extension"
        )
    a1, a2, a3 = _alphas(params.n, 2, params)
    return ModelMoments(a1, a2, a3, compute_eta(params), params.n)


@dataclass(frozen=True)
class DeviationReport:
    spectral_norm_dev: float
    bernstein_bound: float
    within_bound: bool


def deviation_diagnostic(A: WeightedAdjacency | np.ndarray, params: PlantedParams,
                         tol: float = 1e-6) -> DeviationReport:
    """Compare ``||A - E[A]||_2`` with the high-probability bound ``4 sqrt(n a1 ln n)``.

    Purely informational; the coloring pipeline never consults it.
    """
    mom = moments(params)
    dense = A.toarray() if isinstance(A, WeightedAdjacency) else np.asarray(A, dtype=float)
    dev = spectral_norm(dense - mom.expected_matrix, tol=tol)
    n = params.n
    bound = 4.0 * math.sqrt(n * mom.alpha1 * math.log(n)) if n > 1 else 0.0
    return DeviationReport(dev, bound, dev <= bound)
