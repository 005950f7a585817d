"""Bipartite graph clustering via high-order walk embeddings.

Clusters the target side of a weighted bipartite graph into k groups.
``hope`` runs k-means over a low-rank embedding of decayed random-walk
stopping distributions; ``hopeplus`` rounds the embedding's top-k spectral
basis into cluster indicators directly (Frobenius- or spectral-norm
variants). Includes exact small-instance oracles, quality metrics, and
synthetic graph generators.
"""

from .errors import (
    DataError,
    NumericError,
    ParameterError,
    ParseError,
    ValidationError,
)
from .graph import (
    BipartiteGraph,
    affinity_matrix,
    load_graph,
    projected_edge_weight,
    transition_matrix,
    write_edge_tsv,
)
from .linalg import TruncatedSvd, full_svd_small, row_normalize_l2, spmm, truncated_svd
from .embedding import (
    ApproxErrors,
    ExactHop,
    HopEmbedding,
    approximation_errors,
    exact_hop,
    hop_embedding,
)
from .hope import Clustering, hope, kmeans, within_cluster_scatter
from .hopeplus import (
    RoundingResult,
    Vcmi,
    greedy_seed,
    hopeplus,
    procrustes_transform,
    round_basis,
    spectral_basis,
    spectral_transform,
)
from .metrics import (
    LabelSet,
    MetricsReport,
    accuracy,
    ari,
    contingency_table,
    f1_macro,
    load_labels,
    nmi,
)
from .datagen import er_bipartite, planted_bipartite, write_labels_tsv

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "load_graph",
    "transition_matrix",
    "affinity_matrix",
    "projected_edge_weight",
    "write_edge_tsv",
    "TruncatedSvd",
    "truncated_svd",
    "full_svd_small",
    "row_normalize_l2",
    "spmm",
    "HopEmbedding",
    "ExactHop",
    "ApproxErrors",
    "hop_embedding",
    "exact_hop",
    "approximation_errors",
    "Clustering",
    "kmeans",
    "hope",
    "within_cluster_scatter",
    "Vcmi",
    "RoundingResult",
    "spectral_basis",
    "greedy_seed",
    "procrustes_transform",
    "spectral_transform",
    "round_basis",
    "hopeplus",
    "LabelSet",
    "MetricsReport",
    "load_labels",
    "contingency_table",
    "accuracy",
    "f1_macro",
    "nmi",
    "ari",
    "er_bipartite",
    "planted_bipartite",
    "write_labels_tsv",
    "DataError",
    "ParseError",
    "ValidationError",
    "ParameterError",
    "NumericError",
    "__version__",
]
