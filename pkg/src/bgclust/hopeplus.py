"""HOPE+ pipeline: spectral basis of the embedding plus indicator rounding.

Instead of k-means, HOPE+ takes the top-k left singular vectors L of the
embedding X (equivalently the k largest eigenvectors of X X^T), seeds a
vertex-cluster membership indicator from L's row-wise argmax, and then
alternates between fitting a k x k transform T that maps L toward the
indicator and re-rounding L T back to an indicator. Two transform updates
are supported: ``fnem`` fits the closest orthogonal transform (Frobenius
norm, via the orthogonal Procrustes solution), ``snem`` the unconstrained
spectral-norm minimizer L^T C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graph import BipartiteGraph, affinity_matrix, transition_matrix
from .embedding import HopEmbedding, hop_embedding
from .hope import Clustering, _validate_pipeline_params
from .linalg import full_svd_small

__all__ = [
    "Vcmi",
    "RoundingResult",
    "spectral_basis",
    "greedy_seed",
    "procrustes_transform",
    "spectral_transform",
    "round_basis",
    "hopeplus",
]

MODES = ("fnem", "snem")


@dataclass(frozen=True)
class Vcmi:
    """Vertex-cluster membership indicator, stored as assignments.

    The dense form is |U| x k with entry 1/sqrt(|C_j|) at (i, j) when
    vertex i belongs to cluster j and zero elsewhere, so every non-empty
    column has unit L2 norm and distinct columns are orthogonal.
    """

    assignments: np.ndarray
    k: int

    def __post_init__(self) -> None:
        a = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", a)
        if len(a) and (a.min() < 0 or a.max() >= self.k):
            raise ParameterError("cluster index out of range")

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def dense(self) -> np.ndarray:
        """Materialize the normalized indicator matrix."""
        n = len(self.assignments)
        out = np.zeros((n, self.k))
        # Clusters referenced by any assignment are non-empty, so the
        # max(size, 1) floor only affects unused columns.
        scale = np.sqrt(np.maximum(self.sizes, 1).astype(np.float64))
        out[np.arange(n), self.assignments] = 1.0 / scale[self.assignments]
        return out


@dataclass(frozen=True)
class RoundingResult:
    """Outcome of the alternating rounding loop."""

    vcmi: Vcmi
    converged: bool
    iterations: int
    history: list[Vcmi] | None = None


def spectral_basis(emb: HopEmbedding, k: int) -> np.ndarray:
    """Top-k left singular vectors of the embedding X, shape |U| x k.

    These are the k largest eigenvectors of the Gram matrix X X^T, computed
    without forming it. The thin SVD of the tall |U| x beta matrix is exact
    (LAPACK), so no seed is involved.

    Raises:
        ParameterError: k exceeds the embedding dimensionality.
    """
    if k > emb.beta:
        raise ParameterError(f"k={k} exceeds embedding dimensionality {emb.beta}")
    u, _, _ = np.linalg.svd(emb.x, full_matrices=False)
    basis = u[:, :k].copy()
    idx = np.argmax(np.abs(basis), axis=0)
    signs = np.sign(basis[idx, np.arange(k)])
    signs[signs == 0] = 1.0
    return basis * signs


def greedy_seed(basis: np.ndarray) -> Vcmi:
    """Initial indicator: each vertex joins the column of its largest entry.

    Ties break to the lowest column index.
    """
    return Vcmi(assignments=np.argmax(basis, axis=1), k=basis.shape[1])


def procrustes_transform(basis: np.ndarray, vcmi: Vcmi) -> np.ndarray:
    """Orthogonal transform minimizing the Frobenius distance to the indicator.

    Solves the orthogonal Procrustes problem for ``basis @ T ~ indicator``:
    with Phi, Psi the left/right singular vectors of basis^T C, the
    minimizer is T = Phi Psi^T, always orthogonal.
    """
    svd = full_svd_small(basis.T @ vcmi.dense())
    return svd.u @ svd.v.T


def spectral_transform(basis: np.ndarray, vcmi: Vcmi) -> np.ndarray:
    """Transform minimizing the spectral-norm distance to the indicator.

    For a column-orthonormal basis the minimizer of ||basis @ T - C||_2 is
    simply basis^T C (not orthogonal in general); basis @ T is then the
    orthogonal projection of C onto the basis's column space.
    """
    return basis.T @ vcmi.dense()


def round_basis(
    basis: np.ndarray,
    seed_vcmi: Vcmi,
    mode: str,
    max_iters: int = 100,
    keep_history: bool = False,
) -> RoundingResult:
    """Alternate transform fitting and row-wise re-rounding until stable.

    Each iteration fixes the current indicator C, fits T (per ``mode``),
    then reassigns every vertex to the argmax column of basis @ T (ties to
    the lowest index) and renormalizes columns. Stops when assignments
    repeat or after ``max_iters`` iterations.

    Raises:
        ParameterError: unknown mode, shape mismatch, or max_iters < 1.
    """
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    if max_iters < 1:
        raise ParameterError(f"max_iters must be at least 1, got {max_iters}")
    if basis.shape[0] != len(seed_vcmi.assignments) or basis.shape[1] != seed_vcmi.k:
        raise ParameterError(
            f"basis {basis.shape} incompatible with seed "
            f"({len(seed_vcmi.assignments)}, {seed_vcmi.k})"
        )
    update = procrustes_transform if mode == "fnem" else spectral_transform
    current = seed_vcmi
    history = [seed_vcmi] if keep_history else None
    converged = False
    iterations = 0
    for it in range(1, max_iters + 1):
        iterations = it
        transform = update(basis, current)
        assign = np.argmax(basis @ transform, axis=1)
        if np.array_equal(assign, current.assignments):
            converged = True
            break
        current = Vcmi(assignments=assign, k=current.k)
        if history is not None:
            history.append(current)
    return RoundingResult(
        vcmi=current, converged=converged, iterations=iterations, history=history
    )


def hopeplus(
    graph: BipartiteGraph,
    k: int,
    alpha: float = 0.3,
    beta: int | None = None,
    mode: str = "snem",
    max_iters: int = 100,
    seed: int = 0,
) -> Clustering:
    """Cluster the target side of ``graph`` with spectral rounding.

    Pipeline: HOP embedding -> top-k singular basis -> greedy seed ->
    alternating rounding. ``beta`` defaults to 5 * k and is clamped to
    min(|U|, |V|); after clamping it must still be at least k. Isolated
    target vertices are assigned to cluster 0.

    Raises:
        ParameterError: parameter out of range (see message).
    """
    if beta is None:
        beta = 5 * k
    beta = _validate_pipeline_params(graph, k, alpha, beta)
    if beta < k:
        raise ParameterError(
            f"graph supports at most beta={beta} dimensions, below k={k}"
        )
    p = transition_matrix(graph)
    q = affinity_matrix(graph)
    emb = hop_embedding(p, q, alpha=alpha, beta=beta, seed=seed)
    basis = spectral_basis(emb, k)
    rounding = round_basis(basis, greedy_seed(basis), mode=mode, max_iters=max_iters)
    assign = rounding.vcmi.assignments.copy()
    assign[emb.f_row_norms == 0.0] = 0
    return Clustering(
        assignments=assign,
        k=k,
        converged=rounding.converged,
        iterations=rounding.iterations,
    )
