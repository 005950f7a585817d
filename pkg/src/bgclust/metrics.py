"""Clustering quality metrics against ground-truth labels.

All four scores are computed from the contingency table between predicted
clusters and truth classes and are invariant to permutations of the
predicted cluster ids:

* ``accuracy``: best fraction of agreeing vertices over injective
  cluster-to-class matchings (optimal assignment on the padded table).
* ``f1_macro``: per-class F1 under that same matching, averaged unweighted
  over truth classes.
* ``nmi``: mutual information normalized by the geometric mean of the two
  partition entropies.
* ``ari``: Rand index adjusted for chance; ranges over [-0.5, 1].
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ParameterError, ParseError, ValidationError
from .hope import Clustering

__all__ = [
    "LabelSet",
    "load_labels",
    "contingency_table",
    "accuracy",
    "f1_macro",
    "nmi",
    "ari",
    "MetricsReport",
]


@dataclass(frozen=True)
class LabelSet:
    """Ground-truth class index per target vertex; -1 marks unlabeled.

    Unlabeled vertices are excluded from every metric and surfaced through
    ``missing_count``.
    """

    labels: np.ndarray
    class_count: int
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        a = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", a)
        if len(a) and a.max() >= self.class_count:
            raise ParameterError("class index out of range")

    @property
    def covered(self) -> np.ndarray:
        return self.labels >= 0

    @property
    def missing_count(self) -> int:
        return int((~self.covered).sum())


def load_labels(path: str | os.PathLike, u_index: dict[str, int]) -> LabelSet:
    """Read a ``u_id <TAB> label`` file aligned to the graph's target side.

    Label strings become class indices in first-appearance order. Vertices
    absent from the file stay unlabeled; file entries whose id is not in
    the graph are ignored.

    Raises:
        ParseError: malformed line, with line number.
        ValidationError: duplicate conflicting labels for one vertex.
    """
    labels = np.full(len(u_index), -1, dtype=np.int64)
    class_names: list[str] = []
    class_map: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(
                    f"{path}:{lineno}: expected 2 tab-separated columns, "
                    f"got {len(parts)}"
                )
            uid, name = parts
            idx = u_index.get(uid)
            if idx is None:
                continue
            cls = class_map.get(name)
            if cls is None:
                cls = class_map[name] = len(class_names)
                class_names.append(name)
            if labels[idx] != -1 and labels[idx] != cls:
                raise ValidationError(
                    f"{path}:{lineno}: conflicting label for {uid!r}"
                )
            labels[idx] = cls
    return LabelSet(labels=labels, class_count=max(len(class_names), 1),
                    class_names=class_names)


def contingency_table(pred: Clustering, truth: LabelSet) -> np.ndarray:
    """Counts of labeled vertices per (predicted cluster, truth class) cell.

    Raises:
        ParameterError: vertex universes differ or nothing is labeled.
    """
    if len(pred.assignments) != len(truth.labels):
        raise ParameterError(
            f"{len(pred.assignments)} predictions vs {len(truth.labels)} labels"
        )
    mask = truth.covered
    if not mask.any():
        raise ParameterError("no labeled vertices to evaluate")
    table = np.zeros((pred.k, truth.class_count), dtype=np.int64)
    np.add.at(table, (pred.assignments[mask], truth.labels[mask]), 1)
    return table


def _optimal_matching(
    table: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Injective matching maximizing the agreement count, on a padded square."""
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return rows, cols, padded


def accuracy(pred: Clustering, truth: LabelSet) -> float:
    """Best agreement fraction over cluster-to-class matchings, in [0, 1]."""
    table = contingency_table(pred, truth)
    rows, cols, padded = _optimal_matching(table)
    return float(padded[rows, cols].sum() / table.sum())


def f1_macro(pred: Clustering, truth: LabelSet) -> float:
    """Unweighted mean per-class F1 under the optimal matching.

    A truth class left without a matched non-empty cluster scores zero.
    """
    table = contingency_table(pred, truth)
    rows, cols, _ = _optimal_matching(table)
    cluster_of_class = {int(c): int(r) for r, c in zip(rows, cols)}
    cluster_sizes = table.sum(axis=1)
    class_sizes = table.sum(axis=0)
    scores = []
    for c in range(table.shape[1]):
        r = cluster_of_class[c]
        tp = table[r, c] if r < table.shape[0] else 0
        if tp == 0:
            scores.append(0.0)
            continue
        precision = tp / cluster_sizes[r]
        recall = tp / class_sizes[c]
        scores.append(2.0 * precision * recall / (precision + recall))
    return float(np.mean(scores))


def nmi(pred: Clustering, truth: LabelSet) -> float:
    """Mutual information over the geometric mean of partition entropies.

    Defined as 1 when both sides are the same single cluster and 0 when
    either partition carries no information while the partitions differ.
    """
    table = contingency_table(pred, truth).astype(np.float64)
    n = table.sum()
    p_row = table.sum(axis=1) / n
    p_col = table.sum(axis=0) / n
    h_row = -np.sum(p_row[p_row > 0] * np.log(p_row[p_row > 0]))
    h_col = -np.sum(p_col[p_col > 0] * np.log(p_col[p_col > 0]))
    if h_row <= 0.0 and h_col <= 0.0:
        return 1.0
    if h_row <= 0.0 or h_col <= 0.0:
        return 0.0
    p_joint = table / n
    nz = p_joint > 0
    outer = np.outer(p_row, p_col)
    mi = float(np.sum(p_joint[nz] * np.log(p_joint[nz] / outer[nz])))
    return float(mi / np.sqrt(h_row * h_col))


def ari(pred: Clustering, truth: LabelSet) -> float:
    """Chance-adjusted pair-counting agreement in [-0.5, 1].

    Computed with exact integer pair counts; returns 1.0 in the degenerate
    case where both partitions are trivial (identical by construction).
    """
    table = contingency_table(pred, truth)

    def pairs(x: np.ndarray) -> int:
        x = x.astype(object)
        return int((x * (x - 1) // 2).sum())

    n = int(table.sum())
    total = n * (n - 1) // 2
    if total == 0:
        return 1.0
    sum_cells = pairs(table.ravel())
    sum_rows = pairs(table.sum(axis=1))
    sum_cols = pairs(table.sum(axis=0))
    expected = sum_rows * sum_cols / total
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


@dataclass(frozen=True)
class MetricsReport:
    """Quality scores plus run metadata, serialized as a JSON document.

    Field names are part of the stable CLI interface: acc, f1, nmi, ari,
    runtime_seconds, parameters, convergence, labels_missing.
    """

    acc: float | None
    f1: float | None
    nmi: float | None
    ari: float | None
    runtime_seconds: float
    parameters: dict[str, Any]
    convergence: dict[str, Any]
    labels_missing: int | None = None

    @classmethod
    def build(
        cls,
        pred: Clustering,
        truth: LabelSet | None,
        runtime_seconds: float,
        parameters: dict[str, Any],
    ) -> "MetricsReport":
        return cls(
            acc=accuracy(pred, truth) if truth is not None else None,
            f1=f1_macro(pred, truth) if truth is not None else None,
            nmi=nmi(pred, truth) if truth is not None else None,
            ari=ari(pred, truth) if truth is not None else None,
            runtime_seconds=runtime_seconds,
            parameters=parameters,
            convergence={
                "converged": pred.converged,
                "iterations": pred.iterations,
                "objective_value": pred.objective_value,
            },
            labels_missing=truth.missing_count if truth is not None else None,
        )

    def to_json(self) -> str:
        doc = {
            "acc": self.acc,
            "f1": self.f1,
            "nmi": self.nmi,
            "ari": self.ari,
            "runtime_seconds": self.runtime_seconds,
            "parameters": self.parameters,
            "convergence": self.convergence,
            "labels_missing": self.labels_missing,
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
