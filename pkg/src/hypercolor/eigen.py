"""Extreme eigenpairs of symmetric matrices by shifted power iteration.

The smallest eigenvalues of ``A`` are the largest of ``sigma I - A`` with the
Gershgorin shift ``sigma = 1 + max_i sum_j |A_ij|``, which makes the shifted
matrix positive definite. We run block power iteration on it with a
Rayleigh-Ritz step every sweep: the block holds the wanted vectors plus a few
guard vectors, so nearly degenerate clusters of wanted eigenvalues do not stall
convergence.

Only matrix-block products are needed, so the same code serves dense arrays,
sparse matrices and the edge-streaming operator of :mod:`hypercolor.spectral`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError

__all__ = [
    "EigenResult",
    "EigenPair",
    "default_max_iter",
    "gershgorin_shift",
    "smallest_eigenpair",
    "k_smallest_eigenvectors",
    "spectral_norm",
    "fix_sign",
]

DEFAULT_TOL = 1e-8
START_SEED = 20150611
_GUARD = 2
# Coordinates within this relative distance of the largest magnitude count as tied.
_SIGN_TIE_RTOL = 1e-6


@dataclass(frozen=True)
class EigenResult:
    """Ritz values (ascending) and orthonormal Ritz vectors as columns."""

    values: np.ndarray
    vectors: np.ndarray
    converged: bool
    n_iter: int
    residuals: np.ndarray


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    converged: bool
    n_iter: int
    residual: float


def default_max_iter(dim: int) -> int:
    return int(10 * dim * math.log(max(dim, 2))) + 1000


def _as_operator(A):
    """Return ``(dim, matmat, inf_norm)`` for an array, sparse matrix or operator."""
    if hasattr(A, "matmat") and hasattr(A, "inf_norm"):
        return A.shape[0], A.matmat, float(A.inf_norm())
    if hasattr(A, "tocsr"):
        A = A.tocsr()
        norm = float(abs(A).sum(axis=1).max()) if A.shape[0] else 0.0
        return A.shape[0], lambda X: np.asarray(A @ X), norm
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {A.shape}")
    norm = float(np.abs(A).sum(axis=1).max()) if A.shape[0] else 0.0
    return A.shape[0], lambda X: A @ X, norm


def gershgorin_shift(A) -> float:
    return 1.0 + _as_operator(A)[2]


def fix_sign(x: np.ndarray) -> np.ndarray:
    """Flip ``x`` so its largest-magnitude coordinate is positive (ties: lowest index)."""
    mags = np.abs(x)
    top = mags.max() if mags.size else 0.0
    if top == 0.0:
        return x
    idx = int(np.flatnonzero(mags >= top * (1.0 - _SIGN_TIE_RTOL))[0])
    return -x if x[idx] < 0 else x


def _block_iteration(matmat, dim, count, sigma, threshold, max_iter, seed):
    block = min(dim, count + _GUARD)
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((dim, block)))
    values = np.zeros(count)
    ritz = Q[:, :count].copy()
    residuals = np.full(count, np.inf)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        Z = matmat(Q)
        T = Q.T @ Z
        theta, W = np.linalg.eigh((T + T.T) / 2)
        Q = Q @ W
        Z = Z @ W
        R = Z[:, :count] - Q[:, :count] * theta[:count]
        residuals = np.linalg.norm(R, axis=0)
        values = theta[:count].copy()
        ritz = Q[:, :count].copy()
        if residuals.max() <= threshold:
            converged = True
            break
        Q, _ = np.linalg.qr(sigma * Q - Z)
    return EigenResult(values, ritz, converged, it, residuals)


def k_smallest_eigenvectors(A, count: int, tol: float = DEFAULT_TOL, max_iter: int | None = None,
                            seed: int = START_SEED) -> EigenResult:
    """Orthonormal eigenvectors for the ``count`` smallest eigenvalues of symmetric ``A``.

    Converged means every returned pair has ``||A x - l x|| <= tol * max(1, ||A||_inf)``.
    On non-convergence the best iterate is returned with ``converged=False``.
    Each vector is sign-normalized with :func:`fix_sign`.
    """
    dim, matmat, norm = _as_operator(A)
    if not 1 <= count <= dim:
        raise ContractError(f"count must be in [1, {dim}], got {count}")
    if tol <= 0:
        raise ContractError("tol must be positive")
    if max_iter is None:
        max_iter = default_max_iter(dim)
    threshold = tol * max(1.0, norm)
    res = _block_iteration(matmat, dim, count, 1.0 + norm, threshold, max_iter, seed)
    vectors = np.column_stack([fix_sign(res.vectors[:, j]) for j in range(count)])
    return EigenResult(res.values, vectors, res.converged, res.n_iter, res.residuals)


def smallest_eigenpair(A, tol: float = DEFAULT_TOL, max_iter: int | None = None,
                       seed: int = START_SEED) -> EigenPair:
    """Minimizer of ``x^T A x`` over unit vectors, with its eigenvalue."""
    res = k_smallest_eigenvectors(A, 1, tol=tol, max_iter=max_iter, seed=seed)
    return EigenPair(float(res.values[0]), res.vectors[:, 0], res.converged, res.n_iter,
                     float(res.residuals[0]))


def spectral_norm(A, tol: float = 1e-6, max_iter: int = 20000, seed: int = START_SEED) -> float:
    """``||A||_2`` of a symmetric matrix via power iteration on ``A^2``.

    Stops when the top Ritz pair of ``A^2`` has residual at most ``tol`` times
    its Ritz value, which bounds the relative error of the norm by about ``tol / 2``.
    """
    dim, matmat, norm = _as_operator(A)
    if norm == 0.0:
        return 0.0

    def square(X):
        return matmat(matmat(X))

    block = min(dim, 1 + _GUARD)
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((dim, block)))
    theta_top = 0.0
    for _ in range(max_iter):
        Z = square(Q)
        T = Q.T @ Z
        theta, W = np.linalg.eigh((T + T.T) / 2)
        theta, W = theta[::-1], W[:, ::-1]
        Q = Q @ W
        Z = Z @ W
        theta_top = max(float(theta[0]), 0.0)
        resid = np.linalg.norm(Z[:, 0] - theta[0] * Q[:, 0])
        if resid <= tol * theta_top:
            break
        Q, _ = np.linalg.qr(Z)
    return math.sqrt(theta_top)
