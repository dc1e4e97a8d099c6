"""Correlation clustering of embedding spaces via minimum cost multicut.

Pipeline: load embeddings, compute pairwise cosine similarities, transform
them into a complete weighted graph with calibrated log-odds edge weights,
and decompose the graph with greedy edge contraction plus Kernighan-Lin
refinement. Ships a variation-of-information evaluation toolkit and a
calibration-sweep harness.
"""

from .embedspace import (
    DistributionStats,
    EmbeddingMatrix,
    SimilarityMatrix,
    cosine_similarities,
    distribution_stats,
    load_embeddings,
    write_emb1,
)
from .graphbuild import (
    CalibrationTerm,
    SimilarityGraph,
    build_graph,
    load_edge_list,
    minmax_normalize,
)
from .multicut import (
    Partition,
    SolveReport,
    cost,
    read_clustering_csv,
    solve,
    solve_exact,
    solve_gaec,
    solve_klj,
    write_clustering_csv,
)
from .metrics import (
    ClusterStats,
    OverlapReport,
    VIReport,
    cluster_stats,
    conditional_entropy,
    overlap_analysis,
    variation_of_information,
    vi_matrix,
)
from .calibrate import (
    CalibrationRun,
    LabeledDataset,
    ablate,
    select_cal,
    validate_cal,
)
from .synthetic import make_blobs
from .errors import InputError

__all__ = [
    "DistributionStats",
    "EmbeddingMatrix",
    "SimilarityMatrix",
    "cosine_similarities",
    "distribution_stats",
    "load_embeddings",
    "write_emb1",
    "CalibrationTerm",
    "SimilarityGraph",
    "build_graph",
    "load_edge_list",
    "minmax_normalize",
    "Partition",
    "SolveReport",
    "cost",
    "read_clustering_csv",
    "solve",
    "solve_exact",
    "solve_gaec",
    "solve_klj",
    "write_clustering_csv",
    "ClusterStats",
    "OverlapReport",
    "VIReport",
    "cluster_stats",
    "conditional_entropy",
    "overlap_analysis",
    "variation_of_information",
    "vi_matrix",
    "CalibrationRun",
    "LabeledDataset",
    "ablate",
    "select_cal",
    "validate_cal",
    "make_blobs",
    "InputError",
]

__version__ = "0.1.0"
