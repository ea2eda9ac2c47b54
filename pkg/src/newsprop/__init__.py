"""Dynamic random-walk propagation over news-author graphs.

Sparse column-stochastic operators, exact push-out repair of restart
distributions under edge edits, and a propagation-decoupled classifier
with cross-validated evaluation.
"""

__version__ = "0.1.0"

from .errors import DataError, NonConvergenceError
from .graph import (
    AuthorRecord,
    HeteroGraph,
    NewsRecord,
    apply_update,
    build_mappings,
    derive_author_labels,
    load_graph,
    relation_adjacency,
)
from .model import (
    Classifier,
    MetricsReport,
    TrainConfig,
    evaluate,
    forward,
    init_classifier,
    kfold_split,
    predict,
    train,
)
from .propagate import (
    MixedWeights,
    PropagationMatrix,
    bipartite_two_hop_propagation,
    full_propagation,
    mixed_propagation,
    pushout_update,
    rwr_row,
)
from .sparse import (
    SparseMatrix,
    StochasticMatrix,
    column_normalize,
    from_coordinates,
    matvec,
    two_hop,
)
from .textgraph import (
    FeatureTable,
    aggregate_embedding,
    build_word_graph,
    document_vector,
    pagerank_weights,
)

__all__ = [
    "AuthorRecord",
    "Classifier",
    "DataError",
    "FeatureTable",
    "HeteroGraph",
    "MetricsReport",
    "MixedWeights",
    "NewsRecord",
    "NonConvergenceError",
    "PropagationMatrix",
    "SparseMatrix",
    "StochasticMatrix",
    "TrainConfig",
    "aggregate_embedding",
    "apply_update",
    "bipartite_two_hop_propagation",
    "build_mappings",
    "build_word_graph",
    "column_normalize",
    "derive_author_labels",
    "document_vector",
    "evaluate",
    "forward",
    "from_coordinates",
    "full_propagation",
    "init_classifier",
    "kfold_split",
    "load_graph",
    "matvec",
    "mixed_propagation",
    "pagerank_weights",
    "predict",
    "pushout_update",
    "relation_adjacency",
    "rwr_row",
    "train",
    "two_hop",
]
