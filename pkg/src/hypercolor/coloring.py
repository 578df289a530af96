"""Spectral coloring with iterative refinement.

Two colors: take the eigenvector ``x`` of the smallest eigenvalue of the
weighted adjacency matrix, split vertices by the sign of ``x``, then for
``T = ceil(log2 n)`` rounds move every vertex, simultaneously, to the side it
is *less* attached to. Planted edges are never monochromatic, so a vertex's
true neighbours pile up on the other side. The result is accepted only if no
edge ends up inside one side.

``k`` colors: embed vertices with the ``k - 1`` smallest eigenvectors, cluster
the rows with k-means, then refine with the same rule against all parts.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .eigen import DEFAULT_TOL, START_SEED, k_smallest_eigenvectors, smallest_eigenpair
from .exceptions import ContractError
from .hypergraph import Coloring, Hypergraph, verify_proper
from .spectral import WeightedAdjacency, build_matrix

__all__ = [
    "Status",
    "PartitionState",
    "ColorOutcome",
    "IterationStats",
    "initial_partition",
    "refine_step",
    "num_rounds",
    "color2",
    "colorK",
    "kmeans",
    "mismatch",
]


class Status(str, enum.Enum):
    SUCCESS = "success"
    FAIL = "fail"
    EIGEN_NONCONVERGENCE = "eigen_nonconvergence"


@dataclass(frozen=True)
class PartitionState:
    """Assignment of vertices to ``k`` parts at refinement round ``iteration``.

    ``labels[v - 1]`` is the 0-based part of vertex ``v``.
    """

    labels: np.ndarray
    k: int = 2
    iteration: int = 0

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if self.k < 2:
            raise ContractError(f"need at least 2 parts, got {self.k}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ContractError("part labels must lie in [0, k)")
        labels = labels.copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_parts(cls, parts: Sequence[Sequence[int]], num_vertices: int, iteration: int = 0):
        """Build from 1-based vertex sets; they must partition ``1..num_vertices``."""
        labels = np.full(num_vertices, -1, dtype=np.int64)
        for l, part in enumerate(parts):
            for v in part:
                if not 1 <= v <= num_vertices:
                    raise ContractError(f"vertex {v} out of range")
                if labels[v - 1] >= 0:
                    raise ContractError(f"vertex {v} appears in two parts")
                labels[v - 1] = l
        missing = np.flatnonzero(labels < 0)
        if missing.size:
            raise ContractError(f"vertex {missing[0] + 1} is in no part")
        return cls(labels, len(parts), iteration)

    @property
    def parts(self) -> list[frozenset[int]]:
        return [frozenset((np.flatnonzero(self.labels == l) + 1).tolist()) for l in range(self.k)]

    def sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.k).tolist()

    def to_coloring(self) -> Coloring:
        return Coloring(self.labels, self.k)


@dataclass(frozen=True)
class IterationStats:
    iteration: int
    part_sizes: list[int]
    mismatch: int | None = None


@dataclass(frozen=True)
class ColorOutcome:
    """Result of a coloring run.

    ``status`` is SUCCESS exactly when the final partition is a proper
    coloring. Otherwise it is EIGEN_NONCONVERGENCE if the eigensolver hit its
    iteration cap, else FAIL. ``coloring`` always holds the final partition
    (best effort when not proper); ``witness_edges`` lists the indices of
    monochromatic edges.
    """

    status: Status
    coloring: Coloring
    witness_edges: list[int]
    trajectory: list[IterationStats] = field(default_factory=list)
    eigen_converged: bool = True
    eigenvalues: np.ndarray | None = None
    n_rounds: int = 0

    @property
    def success(self) -> bool:
        return self.status is Status.SUCCESS


def initial_partition(x: np.ndarray) -> PartitionState:
    """Part 0 gets ``x_i >= 0`` (zeros included), part 1 the rest."""
    x = np.asarray(x, dtype=float).reshape(-1)
    return PartitionState(np.where(x >= 0, 0, 1), 2, 0)


def _attachments(A: WeightedAdjacency, labels: np.ndarray, k: int) -> np.ndarray:
    # S[i, l] = sum of A_ij over j in part l, j != i.
    indicator = np.zeros((labels.size, k))
    indicator[np.arange(labels.size), labels] = 1.0
    S = A.matmat(indicator)
    S[np.arange(labels.size), labels] -= A.diagonal()
    if A.scale is not None:
        S = np.rint(S * A.scale)
    return S


def refine_step(A: WeightedAdjacency | np.ndarray, state: PartitionState) -> PartitionState:
    """One simultaneous refinement round.

    Part ``l < k - 1`` collects the vertices whose attachment to the old part
    ``l`` is strictly smaller than to every other old part; the last part takes
    everything else, so ties land there.
    """
    if not isinstance(A, WeightedAdjacency):
        A = WeightedAdjacency.from_dense(A)
    if state.labels.size != A.dim:
        raise ContractError(f"partition covers {state.labels.size} vertices, matrix has {A.dim}")
    k = state.k
    S = _attachments(A, state.labels, k)
    new = np.full(A.dim, k - 1, dtype=np.int64)
    for l in range(k - 1):
        others = np.delete(S, l, axis=1)
        wins = (S[:, l][:, None] < others).all(axis=1)
        new[wins] = l
    return PartitionState(new, k, state.iteration + 1)


def num_rounds(num_vertices: int, k: int = 2) -> int:
    """``ceil(log2(class size))`` with class size ``ceil(|V| / k)``."""
    size = -(-num_vertices // k)
    return max(0, math.ceil(math.log2(size))) if size > 0 else 0


def mismatch(labels: np.ndarray, truth: np.ndarray, k: int) -> int:
    """Hamming distance to ``truth`` minimized over relabelings of ``labels``.

    Exhaustive over permutations for ``k <= 4``, assignment matching above.
    """
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    kk = max(k, int(truth.max()) + 1 if truth.size else 0)
    confusion = np.zeros((kk, kk), dtype=np.int64)
    np.add.at(confusion, (labels, truth), 1)
    if kk <= 4:
        best = max(sum(confusion[a, perm[a]] for a in range(kk))
                   for perm in itertools.permutations(range(kk)))
    else:
        rows, cols = linear_sum_assignment(-confusion)
        best = int(confusion[rows, cols].sum())
    return int(labels.size - best)


def _refine_and_check(h, A, state, rounds, planted, eigen_converged, eigenvalues):
    truth = planted.labels if planted is not None else None

    def stats(s):
        mm = mismatch(s.labels, truth, s.k) if truth is not None else None
        return IterationStats(s.iteration, s.sizes(), mm)

    trajectory = [stats(state)]
    for _ in range(rounds):
        state = refine_step(A, state)
        trajectory.append(stats(state))
    coloring = state.to_coloring()
    verdict = verify_proper(h, coloring)
    if verdict.proper:
        status = Status.SUCCESS
    elif not eigen_converged:
        status = Status.EIGEN_NONCONVERGENCE
    else:
        status = Status.FAIL
    return ColorOutcome(status, coloring, verdict.monochromatic_edges, trajectory,
                        eigen_converged, eigenvalues, rounds)


def _check_planted(h, planted):
    if planted is not None and len(planted) != h.num_vertices:
        raise ContractError("planted coloring must cover every vertex")


def color2(h: Hypergraph, tol: float = DEFAULT_TOL, max_iter: int | None = None,
           planted: Coloring | None = None, seed: int = START_SEED) -> ColorOutcome:
    """Spectral 2-coloring with ``ceil(log2 ceil(|V|/2))`` refinement rounds.

    With ``planted`` given, the trajectory records the mismatch against it
    after every round.
    """
    _check_planted(h, planted)
    A = build_matrix(h)
    pair = smallest_eigenpair(A, tol=tol, max_iter=max_iter, seed=seed)
    state = initial_partition(pair.vector)
    return _refine_and_check(h, A, state, num_rounds(h.num_vertices, 2), planted,
                             pair.converged, np.array([pair.value]))


def _pipeline_from_vector(h: Hypergraph, x: np.ndarray, planted: Coloring | None = None) -> ColorOutcome:
    # Same as color2 but with the embedding supplied by the caller.
    A = build_matrix(h)
    return _refine_and_check(h, A, initial_partition(x), num_rounds(h.num_vertices, 2),
                             planted, True, None)


def colorK(h: Hypergraph, k: int, tol: float = DEFAULT_TOL, max_iter: int | None = None,
           planted: Coloring | None = None, seed: int = START_SEED, n_init: int = 10) -> ColorOutcome:
    """``k``-coloring: k-means on the ``k - 1`` smallest eigenvectors, then refinement."""
    if k < 2:
        raise ContractError(f"k must be at least 2, got {k}")
    if k > h.num_vertices:
        raise ContractError(f"k = {k} exceeds the number of vertices {h.num_vertices}")
    _check_planted(h, planted)
    A = build_matrix(h)
    count = min(k - 1, h.num_vertices)
    eig = k_smallest_eigenvectors(A, count, tol=tol, max_iter=max_iter, seed=seed)
    labels = kmeans(eig.vectors, k, seed=seed, n_init=n_init)
    state = PartitionState(labels, k, 0)
    return _refine_and_check(h, A, state, num_rounds(h.num_vertices, k), planted,
                             eig.converged, eig.values)


def _sq_dists(X, C):
    d = (X * X).sum(axis=1)[:, None] - 2.0 * X @ C.T + (C * C).sum(axis=1)[None, :]
    return np.maximum(d, 0.0)


def _plus_plus(X, k, rng):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    closest = _sq_dists(X, centers[:1]).ravel()
    for c in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            idx = int(rng.integers(n))
        centers[c] = X[idx]
        closest = np.minimum(closest, _sq_dists(X, centers[c:c + 1]).ravel())
    return centers


def _lloyd(X, centers, max_iter, tol):
    k = centers.shape[0]
    prev = np.inf
    for _ in range(max_iter):
        d = _sq_dists(X, centers)
        labels = d.argmin(axis=1)
        wcss = float(d[np.arange(X.shape[0]), labels].sum())
        counts = np.bincount(labels, minlength=k)
        for c in np.flatnonzero(counts == 0):
            # Empty cluster: move its centroid onto the row farthest from its own centroid.
            far = int(d[np.arange(X.shape[0]), labels].argmax())
            labels[far] = c
            d[far] = 0.0
            counts = np.bincount(labels, minlength=k)
        for c in range(k):
            centers[c] = X[labels == c].mean(axis=0)
        if np.isfinite(prev) and prev - wcss <= tol * prev:
            break
        prev = wcss
    d = _sq_dists(X, centers)
    labels = d.argmin(axis=1)
    return labels, float(d[np.arange(X.shape[0]), labels].sum())


def _canonical_labels(labels, k):
    # Renumber clusters by first appearance so equal partitions get equal labels.
    order = {}
    for lab in labels.tolist():
        if lab not in order:
            order[lab] = len(order)
    for lab in range(k):
        order.setdefault(lab, len(order))
    return np.array([order[lab] for lab in labels.tolist()], dtype=np.int64)


def kmeans(rows, k: int, seed: int = 0, n_init: int = 10, max_iter: int = 200,
           tol: float = 1e-9) -> np.ndarray:
    """Cluster the rows of ``rows`` into ``k`` groups.

    k-means++ seeding, Lloyd iterations until the relative decrease of the
    within-cluster sum of squares drops below ``tol``, best of ``n_init``
    restarts. Labels are renumbered by first appearance.
    """
    X = np.asarray(rows, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ContractError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
    best_labels, best_wcss = None, np.inf
    for _ in range(n_init):
        labels, wcss = _lloyd(X, _plus_plus(X, k, rng), max_iter, tol)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return _canonical_labels(best_labels, k)
