"""High-order perspective (HOP) embeddings of the target vertices.

Each target vertex u is described by the stationary stopping distribution
of a decayed random walk that starts at u, steps into the counterpart set
V, and then diffuses over the implicit projected graph Q Q^T:

    F = sum over path length t of (1 - alpha) * alpha^t * P (Q Q^T)^t

Rows of F, L2-normalized, are the HOP vectors H. The fast path never forms
F: the geometric series collapses onto the singular directions of Q, so a
beta-truncated SVD of Q gives the |U| x beta surrogate

    X_hat = P U diag((1 - alpha) / (1 - alpha * sigma_i^2)),

whose row-normalized form X preserves pairwise distances of H up to a
spectral-tail term. The exact path materializes F densely and is intended
only as a small-instance oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import NumericError, ParameterError
from .linalg import row_normalize_l2, spmm, truncated_svd

__all__ = [
    "HopEmbedding",
    "ExactHop",
    "ApproxErrors",
    "hop_embedding",
    "exact_hop",
    "approximation_errors",
    "DENSE_LIMIT",
]

# Refuse to materialize exact HOP matrices beyond this many entries.
DENSE_LIMIT = 2_000_000


@dataclass(frozen=True)
class HopEmbedding:
    """Low-rank surrogate of the HOP matrix.

    Attributes:
        x: |U| x beta matrix with unit-L2 rows (zero rows stay zero).
        x_raw: the same matrix before row normalization.
        f_row_norms: L2 norm of each row of ``x_raw``; at full rank these
            equal the row norms of the exact HOP matrix F.
        alpha: walk decay factor in (0, 1).
        beta: embedding dimensionality actually used.
    """

    x: np.ndarray
    x_raw: np.ndarray
    f_row_norms: np.ndarray
    alpha: float
    beta: int


@dataclass(frozen=True)
class ExactHop:
    """Densely accumulated HOP matrix (oracle path).

    Attributes:
        f: |U| x |V| stopping-probability matrix.
        h: row-normalized ``f``.
        lambda_max: number of walk-length terms accumulated.
    """

    f: np.ndarray
    h: np.ndarray
    lambda_max: int


class ApproxErrors(NamedTuple):
    """Average pairwise-distance errors of X against H.

    ``relative`` skips pairs whose exact distance is zero;
    ``skipped_pairs`` counts them.
    """

    relative: float
    absolute: float
    skipped_pairs: int


def hop_embedding(
    p: sp.spmatrix,
    q: sp.spmatrix,
    alpha: float,
    beta: int,
    seed: int = 0,
) -> HopEmbedding:
    """Compute the rank-``beta`` HOP surrogate X from P and Q.

    Singular values of Q are clamped to [0, 1] before forming the series
    coefficients: the largest singular value of Q is provably at most 1,
    and the clamp removes tiny numerical excursions that would otherwise
    shrink the (1 - alpha * sigma^2) denominators.

    Raises:
        ParameterError: alpha outside (0, 1) or beta outside
            [1, min(|U|, |V|)].
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must be in (0, 1), got {alpha}")
    max_rank = min(q.shape)
    if beta < 1 or beta > max_rank:
        raise ParameterError(
            f"beta must be in [1, {max_rank}] for a {q.shape} affinity matrix, "
            f"got {beta}"
        )
    svd = truncated_svd(q, rank=beta, seed=seed)
    sigma = np.clip(svd.sigma, 0.0, 1.0)
    coeffs = (1.0 - alpha) / (1.0 - alpha * sigma**2)
    x_raw = spmm(p, svd.u) * coeffs
    norms = np.linalg.norm(x_raw, axis=1)
    x = row_normalize_l2(x_raw)
    return HopEmbedding(x=x, x_raw=x_raw, f_row_norms=norms, alpha=alpha, beta=beta)


def exact_hop(
    p: sp.spmatrix,
    q: sp.spmatrix,
    alpha: float,
    tail_tol: float = 1e-12,
    dense_limit: int = DENSE_LIMIT,
) -> ExactHop:
    """Accumulate the walk series for F directly (small graphs only).

    Terms are generated by the recurrence M <- M (Q Q^T) starting from
    M = P. Every entry of each term is at most 1, so the series tail after
    length L is bounded by alpha^(L+1); accumulation stops once that bound
    drops below ``tail_tol``.

    Raises:
        ParameterError: alpha or tail_tol out of range, or the dense F
            would exceed ``dense_limit`` entries.
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must be in (0, 1), got {alpha}")
    if tail_tol <= 0.0:
        raise ParameterError(f"tail_tol must be positive, got {tail_tol}")
    n_u, n_v = p.shape
    if n_u * n_v > dense_limit:
        raise ParameterError(
            f"exact HOP needs a dense {n_u} x {n_v} matrix, over the "
            f"{dense_limit}-entry limit"
        )
    walk = (q @ q.T).toarray() if sp.issparse(q) else np.asarray(q) @ np.asarray(q).T
    term = p.toarray() if sp.issparse(p) else np.asarray(p, dtype=np.float64).copy()
    f = np.zeros_like(term)
    lam = 0
    while True:
        f += (1.0 - alpha) * alpha**lam * term
        if alpha ** (lam + 1) < tail_tol:
            break
        term = term @ walk
        lam += 1
    return ExactHop(f=f, h=row_normalize_l2(f), lambda_max=lam)


def _pairwise_sq_dists(rows: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", rows, rows)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (rows @ rows.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def approximation_errors(emb: HopEmbedding, exact: ExactHop) -> ApproxErrors:
    """Mean pairwise squared-distance errors of X relative to H.

    Averages run over ordered pairs (i, j) with i != j. The relative error
    skips pairs whose exact distance is zero. Sanity ranges
    relative in [0, 1] and absolute in [0, 2] are enforced with 1e-9 slack.

    Raises:
        ParameterError: embeddings describe different vertex sets.
        NumericError: averages fall outside their sanity ranges.
    """
    if emb.x.shape[0] != exact.h.shape[0]:
        raise ParameterError(
            f"row mismatch: {emb.x.shape[0]} vs {exact.h.shape[0]}"
        )
    n = emb.x.shape[0]
    d2_x = _pairwise_sq_dists(emb.x)
    d2_h = _pairwise_sq_dists(exact.h)
    off = ~np.eye(n, dtype=bool)
    diff = d2_x - d2_h
    absolute = float(diff[off].mean())
    nonzero = off & (d2_h > 0.0)
    skipped = int(off.sum() - nonzero.sum())
    if nonzero.any():
        relative = float((diff[nonzero] / d2_h[nonzero]).mean())
    else:
        relative = 0.0
    if not -1e-9 <= relative <= 1.0 + 1e-9:
        raise NumericError(f"relative error {relative} outside [0, 1]")
    if not -1e-9 <= absolute <= 2.0 + 1e-9:
        raise NumericError(f"absolute error {absolute} outside [0, 2]")
    return ApproxErrors(relative=relative, absolute=absolute, skipped_pairs=skipped)
