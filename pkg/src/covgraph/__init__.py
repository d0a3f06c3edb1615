"""Graph covariance descriptors and the Bhattacharyya graph kernel."""

from ._backend import BACKEND
from .embedding import (
    CovarianceDescriptor,
    EmbeddingMatrix,
    covariance_descriptor,
    embed_graph,
    power_embed,
)
from .graph import (
    Graph,
    GraphError,
    GraphStats,
    apply_permutation,
    compute_stats,
    extract_ego_network,
    generate_matched_random,
    parse_edge_list,
    serialize_edge_list,
)
from .kernel import (
    GramMatrix,
    bhattacharyya_distance,
    bhattacharyya_similarity,
    build_gram,
    export_gram,
    similarity_between_graphs,
)

__version__ = "0.1.0"
