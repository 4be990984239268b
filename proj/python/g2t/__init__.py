"""Topics from document embeddings via similarity graphs and community detection."""

from ._core import (
    ConfigError,
    Corpus,
    DegenerateError,
    Document,
    EmbeddingMatrix,
    G2TError,
    InputError,
    SemanticGraph,
    build_semantic_graph,
    cosine_similarity,
    detect,
    evaluate,
    fit,
    keep_count,
    load_corpus,
    load_embeddings,
    max_connected_subgraph,
    modularity,
    preprocess,
    prune_top_p,
    reduce_dimensions,
    save_embeddings,
    tokenize,
    topic_diversity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
