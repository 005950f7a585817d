"""Synthetic bipartite graphs for scalability and recovery tests."""

from __future__ import annotations

import os

import numpy as np

from .errors import ParameterError
from .graph import BipartiteGraph
from .metrics import LabelSet

__all__ = ["er_bipartite", "planted_bipartite", "write_labels_tsv"]

# Above this fill fraction, switch from rejection sampling to Floyd's
# subset-sampling algorithm, which stays O(edge_count) near saturation.
_FLOYD_THRESHOLD = 0.5


def _sample_pairs_rejection(
    total: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    seen: set[int] = set()
    order: list[int] = []
    batch = max(1024, count // 4)
    while len(order) < count:
        for key in rng.integers(0, total, size=batch).tolist():
            if key not in seen:
                seen.add(key)
                order.append(key)
                if len(order) == count:
                    break
    return np.asarray(order, dtype=np.int64)


def _sample_pairs_floyd(total: int, count: int, rng: np.random.Generator) -> np.ndarray:
    chosen: set[int] = set()
    order: list[int] = []
    for j in range(total - count, total):
        t = int(rng.integers(0, j + 1))
        pick = t if t not in chosen else j
        chosen.add(pick)
        order.append(pick)
    return np.asarray(order, dtype=np.int64)


def er_bipartite(
    u_count: int, v_count: int, edge_count: int, seed: int = 0
) -> BipartiteGraph:
    """Uniform random bipartite graph with exactly ``edge_count`` edges.

    Samples ``edge_count`` distinct (u, v) pairs uniformly without
    replacement, unit weights. Deterministic for a fixed seed.

    Raises:
        ParameterError: more edges requested than distinct pairs exist,
            or empty vertex sets.
    """
    if u_count < 1 or v_count < 1:
        raise ParameterError("vertex counts must be positive")
    total = u_count * v_count
    if edge_count < 0 or edge_count > total:
        raise ParameterError(
            f"edge_count must be in [0, {total}], got {edge_count}"
        )
    rng = np.random.default_rng(seed)
    if edge_count == 0:
        keys = np.empty(0, dtype=np.int64)
    elif edge_count / total > _FLOYD_THRESHOLD:
        keys = _sample_pairs_floyd(total, edge_count, rng)
    else:
        keys = _sample_pairs_rejection(total, edge_count, rng)
    return BipartiteGraph.from_indices(
        u_count=u_count,
        v_count=v_count,
        edge_u=keys // v_count,
        edge_v=keys % v_count,
        edge_w=np.ones(edge_count),
    )


def planted_bipartite(
    blocks: int,
    u_per_block: int,
    v_per_block: int,
    p_in: float,
    p_out: float,
    seed: int = 0,
) -> tuple[BipartiteGraph, LabelSet]:
    """Block-structured random graph with known target-side labels.

    Every within-block (u, v) pair is an edge with probability ``p_in``,
    every cross-block pair with ``p_out``; weights are 1. Returns the graph
    and the block index of each u-vertex as ground truth.

    Raises:
        ParameterError: probabilities outside 0 <= p_out < p_in <= 1 or
            non-positive sizes.
    """
    if blocks < 1 or u_per_block < 1 or v_per_block < 1:
        raise ParameterError("block counts and sizes must be positive")
    if not 0.0 <= p_out < p_in <= 1.0:
        raise ParameterError(
            f"need 0 <= p_out < p_in <= 1, got p_in={p_in}, p_out={p_out}"
        )
    rng = np.random.default_rng(seed)
    n_u = blocks * u_per_block
    n_v = blocks * v_per_block
    u_block = np.arange(n_u) // u_per_block
    v_block = np.arange(n_v) // v_per_block
    prob = np.where(u_block[:, None] == v_block[None, :], p_in, p_out)
    adj = rng.random((n_u, n_v)) < prob
    eu, ev = np.nonzero(adj)
    graph = BipartiteGraph.from_indices(
        u_count=n_u,
        v_count=n_v,
        edge_u=eu,
        edge_v=ev,
        edge_w=np.ones(len(eu)),
    )
    labels = LabelSet(labels=u_block, class_count=blocks,
                      class_names=[f"block{b}" for b in range(blocks)])
    return graph, labels


def write_labels_tsv(
    graph: BipartiteGraph, labels: LabelSet, path: str | os.PathLike
) -> None:
    """Write ``u_id <TAB> label`` lines matching the graph's id universe."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, uid in enumerate(graph.u_ids):
            cls = labels.labels[i]
            if cls < 0:
                continue
            name = (
                labels.class_names[cls]
                if cls < len(labels.class_names)
                else str(cls)
            )
            fh.write(f"{uid}\t{name}\n")
