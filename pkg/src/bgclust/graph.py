"""Weighted bipartite graph loading, validation, and walk matrices.

A graph connects a *target* vertex set U (the side being clustered) to a
counterpart set V. External string ids are mapped to dense 0-based indices
in first-appearance order so that results are reproducible regardless of
hash seeds. Duplicate (u, v) edges are summed; zero or negative weights are
rejected. Isolated vertices on either side are kept and yield all-zero
matrix rows/columns.

Two sparse matrices are derived from a graph:

* ``transition_matrix`` P (|U| x |V|): one-hop walk probabilities from each
  u to its neighbors, i.e. edge weight over the total weight at u.
* ``affinity_matrix`` Q (|V| x |U|): per-edge geometric mean of the two
  directed one-hop probabilities, sqrt(p(v,u) * p(u,v)). The implicit
  projected graph over V has edge weights Q_j . Q_l and is never
  materialized here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ParseError, ValidationError

__all__ = [
    "BipartiteGraph",
    "load_graph",
    "transition_matrix",
    "affinity_matrix",
    "projected_edge_weight",
    "write_edge_tsv",
]


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable weighted bipartite graph with dense index maps.

    Attributes:
        u_ids: External id of each u-vertex, indexed by dense u-index.
        v_ids: External id of each v-vertex, indexed by dense v-index.
        edge_u: Dense u-index of each edge.
        edge_v: Dense v-index of each edge.
        edge_w: Positive weight of each edge (duplicates already summed).
        u_weight_sums: Total incident edge weight per u-vertex.
        v_weight_sums: Total incident edge weight per v-vertex.
    """

    u_ids: list[str]
    v_ids: list[str]
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    u_weight_sums: np.ndarray = field(init=False)
    v_weight_sums: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if len(self.edge_u) != len(self.edge_v) or len(self.edge_u) != len(self.edge_w):
            raise ValidationError("edge arrays must have equal length")
        if len(self.edge_w) and not np.all(np.isfinite(self.edge_w)):
            raise ValidationError("edge weights must be finite")
        if len(self.edge_w) and self.edge_w.min() <= 0.0:
            raise ValidationError("edge weights must be positive")
        u_sums = np.zeros(len(self.u_ids))
        v_sums = np.zeros(len(self.v_ids))
        # np.add.at accumulates in edge order, keeping sums reproducible.
        np.add.at(u_sums, self.edge_u, self.edge_w)
        np.add.at(v_sums, self.edge_v, self.edge_w)
        object.__setattr__(self, "u_weight_sums", u_sums)
        object.__setattr__(self, "v_weight_sums", v_sums)

    @property
    def u_count(self) -> int:
        return len(self.u_ids)

    @property
    def v_count(self) -> int:
        return len(self.v_ids)

    @property
    def edge_count(self) -> int:
        return len(self.edge_w)

    @property
    def u_index(self) -> dict[str, int]:
        """Map from external u-id to dense index."""
        return {uid: i for i, uid in enumerate(self.u_ids)}

    @property
    def v_index(self) -> dict[str, int]:
        return {vid: i for i, vid in enumerate(self.v_ids)}

    @classmethod
    def from_edge_list(
        cls, edges: list[tuple[str, str, float]]
    ) -> "BipartiteGraph":
        """Build a graph from (u_id, v_id, weight) triples.

        Ids get dense indices in first-appearance order; duplicate (u, v)
        pairs are summed into a single edge at the position of the first
        occurrence.
        """
        if not edges:
            raise ValidationError("edge list is empty")
        u_ids: list[str] = []
        v_ids: list[str] = []
        u_map: dict[str, int] = {}
        v_map: dict[str, int] = {}
        pair_slot: dict[tuple[int, int], int] = {}
        eu: list[int] = []
        ev: list[int] = []
        ew: list[float] = []
        for uid, vid, w in edges:
            ui = u_map.get(uid)
            if ui is None:
                ui = u_map[uid] = len(u_ids)
                u_ids.append(uid)
            vi = v_map.get(vid)
            if vi is None:
                vi = v_map[vid] = len(v_ids)
                v_ids.append(vid)
            slot = pair_slot.get((ui, vi))
            if slot is None:
                pair_slot[(ui, vi)] = len(ew)
                eu.append(ui)
                ev.append(vi)
                ew.append(float(w))
            else:
                ew[slot] += float(w)
        return cls(
            u_ids=u_ids,
            v_ids=v_ids,
            edge_u=np.asarray(eu, dtype=np.int64),
            edge_v=np.asarray(ev, dtype=np.int64),
            edge_w=np.asarray(ew, dtype=np.float64),
        )

    @classmethod
    def from_indices(
        cls,
        u_count: int,
        v_count: int,
        edge_u: np.ndarray,
        edge_v: np.ndarray,
        edge_w: np.ndarray,
        u_prefix: str = "u",
        v_prefix: str = "v",
    ) -> "BipartiteGraph":
        """Build a graph from pre-indexed edges (generator path).

        Edges must already be distinct (u, v) pairs.
        """
        edge_u = np.asarray(edge_u, dtype=np.int64)
        edge_v = np.asarray(edge_v, dtype=np.int64)
        if len(edge_u) and (edge_u.min() < 0 or edge_u.max() >= u_count):
            raise ValidationError("u index out of range")
        if len(edge_v) and (edge_v.min() < 0 or edge_v.max() >= v_count):
            raise ValidationError("v index out of range")
        keys = edge_u * np.int64(v_count) + edge_v
        if len(np.unique(keys)) != len(keys):
            raise ValidationError("duplicate (u, v) pairs in indexed edges")
        return cls(
            u_ids=[f"{u_prefix}{i}" for i in range(u_count)],
            v_ids=[f"{v_prefix}{j}" for j in range(v_count)],
            edge_u=edge_u,
            edge_v=edge_v,
            edge_w=np.asarray(edge_w, dtype=np.float64),
        )

    def transpose(self) -> "BipartiteGraph":
        """Swap the two sides, making V the target set."""
        return BipartiteGraph(
            u_ids=list(self.v_ids),
            v_ids=list(self.u_ids),
            edge_u=self.edge_v.copy(),
            edge_v=self.edge_u.copy(),
            edge_w=self.edge_w.copy(),
        )


def load_graph(path: str | os.PathLike, default_weight: float = 1.0) -> BipartiteGraph:
    """Load a graph from a tab-separated edge file.

    Each data line is ``u_id <TAB> v_id [<TAB> weight]``; a missing weight
    defaults to ``default_weight``. Lines starting with ``#`` and blank
    lines are skipped. Duplicate (u, v) pairs are summed.

    Raises:
        ParseError: malformed line (wrong column count, non-numeric weight),
            with the 1-based line number.
        ValidationError: non-positive or non-finite weight, or no data lines.
    """
    edges: list[tuple[str, str, float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) == 2:
                uid, vid = parts
                w = default_weight
            elif len(parts) == 3:
                uid, vid, w_str = parts
                try:
                    w = float(w_str)
                except ValueError:
                    raise ParseError(
                        f"{path}:{lineno}: weight {w_str!r} is not a number"
                    ) from None
            else:
                raise ParseError(
                    f"{path}:{lineno}: expected 2 or 3 tab-separated columns, "
                    f"got {len(parts)}"
                )
            if not uid or not vid:
                raise ParseError(f"{path}:{lineno}: empty vertex id")
            if not np.isfinite(w):
                raise ValidationError(f"{path}:{lineno}: weight must be finite")
            if w <= 0.0:
                raise ValidationError(
                    f"{path}:{lineno}: weight must be positive, got {w}"
                )
            edges.append((uid, vid, w))
    if not edges:
        raise ValidationError(f"{path}: no edges found")
    return BipartiteGraph.from_edge_list(edges)


def write_edge_tsv(graph: BipartiteGraph, path: str | os.PathLike) -> None:
    """Write the graph back out in the standard edge TSV format."""
    with open(path, "w", encoding="utf-8") as fh:
        for ui, vi, w in zip(graph.edge_u, graph.edge_v, graph.edge_w):
            fh.write(f"{graph.u_ids[ui]}\t{graph.v_ids[vi]}\t{w:.17g}\n")


def transition_matrix(graph: BipartiteGraph) -> sp.csr_matrix:
    """One-hop walk probabilities P from U to V, shape |U| x |V|.

    P[i, j] = w(u_i, v_j) / (total weight at u_i). Rows of non-isolated
    vertices sum to 1; isolated u-vertices give all-zero rows.
    """
    probs = graph.edge_w / graph.u_weight_sums[graph.edge_u]
    mat = sp.csr_matrix(
        (probs, (graph.edge_u, graph.edge_v)),
        shape=(graph.u_count, graph.v_count),
    )
    mat.sort_indices()
    return mat


def affinity_matrix(graph: BipartiteGraph) -> sp.csr_matrix:
    """Symmetric walk affinities Q, shape |V| x |U|.

    Q[j, i] = sqrt(p(v_j, u_i) * p(u_i, v_j)) for each edge, which works out
    to w / sqrt(weight_sum(u_i) * weight_sum(v_j)); zero elsewhere. The
    projected graph over V has weight matrix Q Q^T.
    """
    vals = graph.edge_w / np.sqrt(
        graph.u_weight_sums[graph.edge_u] * graph.v_weight_sums[graph.edge_v]
    )
    mat = sp.csr_matrix(
        (vals, (graph.edge_v, graph.edge_u)),
        shape=(graph.v_count, graph.u_count),
    )
    mat.sort_indices()
    return mat


def projected_edge_weight(graph: BipartiteGraph, j: int, l: int) -> float:
    """Weight of edge (v_j, v_l) in the implicit projected graph over V.

    Computed by direct summation over the common neighbors u of v_j and
    v_l: sum of sqrt(p(v_j,u) p(u,v_l)) * sqrt(p(v_l,u) p(u,v_j)). Serves
    as a small-instance oracle; equals the dot product of rows j and l of
    the affinity matrix.

    Raises:
        IndexError: j or l out of range.
    """
    if not (0 <= j < graph.v_count) or not (0 <= l < graph.v_count):
        raise IndexError(f"v-index out of range: {j}, {l}")
    nbr_j: dict[int, float] = {}
    nbr_l: dict[int, float] = {}
    for ui, vi, w in zip(graph.edge_u, graph.edge_v, graph.edge_w):
        if vi == j:
            nbr_j[int(ui)] = w
        if vi == l:
            nbr_l[int(ui)] = w
    total = 0.0
    for ui, w_ij in nbr_j.items():
        w_il = nbr_l.get(ui)
        if w_il is None:
            continue
        p_vj_u = w_ij / graph.v_weight_sums[j]
        p_u_vl = w_il / graph.u_weight_sums[ui]
        p_vl_u = w_il / graph.v_weight_sums[l]
        p_u_vj = w_ij / graph.u_weight_sums[ui]
        total += np.sqrt(p_vj_u * p_u_vl) * np.sqrt(p_vl_u * p_u_vj)
    return float(total)
