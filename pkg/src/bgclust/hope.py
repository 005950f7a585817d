"""HOPE pipeline: HOP embedding followed by k-means on the embedding rows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .graph import BipartiteGraph, affinity_matrix, transition_matrix
from .embedding import hop_embedding

__all__ = ["Clustering", "kmeans", "within_cluster_scatter", "hope", "clamp_beta"]


@dataclass(frozen=True)
class Clustering:
    """Assignment of each target vertex to one of k clusters.

    ``objective_value`` is the within-cluster scatter when the producing
    algorithm computed it; ``converged``/``iterations`` describe the
    producing iteration when applicable. Clusters may be empty.
    """

    assignments: np.ndarray
    k: int
    objective_value: float | None = None
    converged: bool | None = None
    iterations: int | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.assignments, dtype=np.int64)
        object.__setattr__(self, "assignments", a)
        if len(a) and (a.min() < 0 or a.max() >= self.k):
            raise ParameterError("cluster index out of range")

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seed centroids with distance-weighted sampling."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = np.einsum("ij,ij->i", points - centers[0], points - centers[0])
    for c in range(1, k):
        total = d2.sum()
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        centers[c] = points[idx]
        np.minimum(
            d2,
            np.einsum("ij,ij->i", points - centers[c], points - centers[c]),
            out=d2,
        )
    return centers


def _sq_dists_to_centers(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    p2 = np.einsum("ij,ij->i", points, points)
    c2 = np.einsum("ij,ij->i", centers, centers)
    d2 = p2[:, None] + c2[None, :] - 2.0 * (points @ centers.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int = 0,
    max_iters: int = 300,
) -> Clustering:
    """Lloyd iterations with seeded distance-weighted initialization.

    Assignments use squared Euclidean distance with ties broken to the
    lowest cluster index. A cluster that empties is reseeded with the point
    currently farthest from its own centroid. Iterations stop when the
    assignment vector stabilizes or ``max_iters`` is reached. The
    assignment objective is checked to be non-increasing every iteration.

    Raises:
        ParameterError: k outside [1, number of points].
        NumericError: objective increased beyond rounding slack.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k < 1 or k > n:
        raise ParameterError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    centers = _plus_plus_init(points, k, rng)
    prev_assign: np.ndarray | None = None
    prev_obj = np.inf
    converged = False
    iterations = 0
    for it in range(1, max_iters + 1):
        iterations = it
        d2 = _sq_dists_to_centers(points, centers)
        assign = np.argmin(d2, axis=1)
        sizes = np.bincount(assign, minlength=k)
        point_d2 = d2[np.arange(n), assign]
        for j in np.flatnonzero(sizes == 0):
            far = int(np.argmax(point_d2))
            centers[j] = points[far]
            assign[far] = j
            sizes = np.bincount(assign, minlength=k)
            d2[:, j] = np.einsum(
                "ij,ij->i", points - centers[j], points - centers[j]
            )
            point_d2 = d2[np.arange(n), assign]
        obj = float(point_d2.sum())
        if obj > prev_obj * (1.0 + 1e-9) + 1e-12:
            raise NumericError(
                f"k-means objective increased: {prev_obj} -> {obj}"
            )
        prev_obj = obj
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            converged = True
            break
        prev_assign = assign
        for j in range(k):
            members = points[assign == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    return Clustering(
        assignments=prev_assign if prev_assign is not None else assign,
        k=k,
        objective_value=prev_obj,
        converged=converged,
        iterations=iterations,
    )


def within_cluster_scatter(points: np.ndarray, clustering: Clustering) -> float:
    """Sum of squared distances from each row to its cluster mean.

    Empty clusters contribute zero.

    Raises:
        ParameterError: assignment length differs from the row count.
    """
    points = np.asarray(points, dtype=np.float64)
    assign = clustering.assignments
    if len(assign) != points.shape[0]:
        raise ParameterError(
            f"{len(assign)} assignments for {points.shape[0]} rows"
        )
    total = 0.0
    for j in range(clustering.k):
        members = points[assign == j]
        if len(members):
            mean = members.mean(axis=0)
            total += float(((members - mean) ** 2).sum())
    return total


def clamp_beta(beta: int, u_count: int, v_count: int) -> int:
    """Cap the embedding dimensionality at the maximal usable rank."""
    return min(beta, u_count, v_count)


def _validate_pipeline_params(
    graph: BipartiteGraph, k: int, alpha: float, beta: int
) -> int:
    if k < 2:
        raise ParameterError(f"k must be at least 2, got {k}")
    if k > graph.u_count:
        raise ParameterError(
            f"k={k} exceeds the {graph.u_count} target vertices"
        )
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must be in (0, 1), got {alpha}")
    if beta < k:
        raise ParameterError(f"beta={beta} must be at least k={k}")
    return clamp_beta(beta, graph.u_count, graph.v_count)


def hope(
    graph: BipartiteGraph,
    k: int,
    alpha: float = 0.3,
    beta: int | None = None,
    seed: int = 0,
    max_iters: int = 300,
) -> Clustering:
    """Cluster the target side of ``graph`` into k groups.

    Builds the rank-beta HOP embedding and runs k-means over its rows.
    ``beta`` defaults to 5 * k and is clamped to min(|U|, |V|). Isolated
    target vertices (all-zero embedding rows) are assigned to cluster 0.

    Raises:
        ParameterError: parameter out of range (see message).
    """
    if beta is None:
        beta = 5 * k
    beta = _validate_pipeline_params(graph, k, alpha, beta)
    p = transition_matrix(graph)
    q = affinity_matrix(graph)
    emb = hop_embedding(p, q, alpha=alpha, beta=beta, seed=seed)
    result = kmeans(emb.x, k=k, seed=seed, max_iters=max_iters)
    assign = result.assignments.copy()
    assign[emb.f_row_norms == 0.0] = 0
    return Clustering(
        assignments=assign,
        k=k,
        objective_value=result.objective_value,
        converged=result.converged,
        iterations=result.iterations,
    )
