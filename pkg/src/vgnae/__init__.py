"""Graph (normalized) autoencoders for link prediction.

Four models over one small numpy autodiff kernel:

- gae / vgae: two-layer GCN encoder
- gnae / vgnae: single-layer encoder that L2-normalizes transformed
  features to a fixed norm before propagation, which keeps embeddings of
  isolated nodes away from zero
"""

from .datasplit import EdgeSplit, sample_negative_edges, split_edges
from .dataio import load_dataset, write_dataset
from .graph import Graph, NormalizedAdjacency, build_normalized_adjacency, spmm
from .metrics import (MetricsReport, NormDegreeTable, average_precision,
                      norm_by_degree, roc_auc, stratified_report)
from .models import (LinkPredictionModel, ModelConfig, decode_pairs, evaluate,
                     kl_divergence, reconstruction_loss, reparameterize, train)

__all__ = [
    "EdgeSplit", "Graph", "LinkPredictionModel", "MetricsReport",
    "ModelConfig", "NormDegreeTable", "NormalizedAdjacency",
    "average_precision", "build_normalized_adjacency", "decode_pairs",
    "evaluate", "kl_divergence", "load_dataset", "norm_by_degree",
    "reconstruction_loss", "reparameterize", "roc_auc",
    "sample_negative_edges", "split_edges", "spmm", "stratified_report",
    "train", "write_dataset",
]

__version__ = "0.1.0"
