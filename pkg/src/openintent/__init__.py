"""Unsupervised intent discovery over precomputed sentence embeddings.

Pipeline: ingest corpus/embeddings/parses, cluster with restarts-based
k-means, pick K with the balanced score (silhouette minus a cluster-size
imbalance penalty), generate ACTION-OBJECT labels from dependency parses,
and evaluate against optional gold intents.
"""

__version__ = "0.1.0"

from .clustering import Clustering, KMeansConfig, kmeans_fit
from .data_io import Corpus, EmbeddingMatrix, ParseTable, read_conllu, read_corpus, read_embeddings, write_report
from .evaluation import EvalReport, evaluate
from .labeling import LabelSet, cluster_pair_counts, extract_pair, generate_labels
from .model_selection import ScoreCurve, SelectionConfig, balanced_score, select_k

__all__ = [
    "Clustering",
    "Corpus",
    "EmbeddingMatrix",
    "EvalReport",
    "KMeansConfig",
    "LabelSet",
    "ParseTable",
    "ScoreCurve",
    "SelectionConfig",
    "balanced_score",
    "cluster_pair_counts",
    "evaluate",
    "extract_pair",
    "generate_labels",
    "kmeans_fit",
    "read_conllu",
    "read_corpus",
    "read_embeddings",
    "select_k",
    "write_report",
]
