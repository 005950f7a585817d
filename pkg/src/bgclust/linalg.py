"""Dense/sparse matrix kernels and SVD routines used by the pipelines.

The truncated SVD is a seeded randomized subspace iteration so that runs
are reproducible; oversampling and power-iteration counts are fixed
constants rather than adaptive. Small dense SVDs go straight to LAPACK.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import NumericError, ParameterError

__all__ = [
    "TruncatedSvd",
    "spmm",
    "truncated_svd",
    "full_svd_small",
    "row_normalize_l2",
    "OVERSAMPLING",
    "POWER_ITERATIONS",
]

# Subspace-iteration constants, fixed for reproducible benchmarks.
OVERSAMPLING = 8
POWER_ITERATIONS = 7

ZERO_ROW_EPS = 1e-30


class TruncatedSvd(NamedTuple):
    """Rank-r factors: a ~ u @ diag(sigma) @ v.T.

    ``u`` is n x r and ``v`` is m x r, both with orthonormal columns;
    ``sigma`` is non-increasing and non-negative.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def spmm(a: sp.spmatrix, b: np.ndarray) -> np.ndarray:
    """Sparse times dense product.

    Raises:
        ParameterError: inner dimensions disagree.
    """
    if a.shape[1] != b.shape[0]:
        raise ParameterError(
            f"shape mismatch: {a.shape} @ {b.shape}"
        )
    return a @ b


def _fix_signs(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Make each left singular vector's largest-magnitude entry non-negative.

    The matching right vector is flipped along with it so the factorization
    is preserved. Pure determinism measure; no numerical effect.
    """
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, v * signs


def truncated_svd(a, rank: int, seed: int) -> TruncatedSvd:
    """Randomized rank-``rank`` SVD of a sparse (or dense) matrix.

    Subspace iteration with a seeded Gaussian test matrix, OVERSAMPLING
    extra columns, and POWER_ITERATIONS power steps with QR
    re-orthonormalization after every step. Deterministic for a fixed seed
    in single-threaded mode.

    Raises:
        ParameterError: rank outside [1, min(a.shape)].
    """
    n, m = a.shape
    if rank < 1 or rank > min(n, m):
        raise ParameterError(f"rank {rank} out of range for shape {a.shape}")
    width = min(rank + OVERSAMPLING, min(n, m))
    rng = np.random.default_rng(seed)
    test = rng.standard_normal((m, width))
    basis, _ = np.linalg.qr(a @ test)
    for _ in range(POWER_ITERATIONS):
        z, _ = np.linalg.qr(a.T @ basis)
        basis, _ = np.linalg.qr(a @ z)
    small = basis.T @ a
    if sp.issparse(small):
        small = small.toarray()
    u_small, sigma, vt = np.linalg.svd(small, full_matrices=False)
    u = basis @ u_small[:, :rank]
    v = vt[:rank].T
    u, v = _fix_signs(u, v)
    return TruncatedSvd(u=u, sigma=sigma[:rank].copy(), v=np.ascontiguousarray(v))


def full_svd_small(a: np.ndarray) -> TruncatedSvd:
    """Exact full SVD of a small dense matrix (all min(n, m) triplets).

    Raises:
        NumericError: non-finite input.
    """
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise NumericError("full_svd_small: input contains non-finite values")
    u, sigma, vt = np.linalg.svd(a, full_matrices=False)
    v = vt.T
    u, v = _fix_signs(u, v)
    return TruncatedSvd(u=u, sigma=sigma, v=np.ascontiguousarray(v))


def row_normalize_l2(a: np.ndarray) -> np.ndarray:
    """Scale each row to unit L2 norm; rows with norm <= ZERO_ROW_EPS stay zero."""
    norms = np.linalg.norm(a, axis=1)
    scale = np.where(norms > ZERO_ROW_EPS, norms, 1.0)
    return a / scale[:, None]
