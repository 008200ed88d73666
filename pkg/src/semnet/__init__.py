"""Semantic co-occurrence network analysis of game-review corpora.

Pipeline: fetch reviews -> clean text -> build a weighted co-occurrence
graph -> topology and sentiment metrics -> comparable reports and graph
exports.
"""

__version__ = "0.1.0"

from semnet.cooccur import (
    CooccurrenceCounts,
    GraphBuildConfig,
    SemanticGraph,
    build_graph,
    count_cooccurrences,
    windows,
)
from semnet.ingest import (
    CorpusManifest,
    RawReview,
    fetch_reviews,
    filter_substantive,
    load_corpus,
    persist_corpus,
)
from semnet.metrics import (
    CentralityTable,
    CommunityPartition,
    average_path_length,
    betweenness_centrality,
    bridging_concepts,
    degree_centrality,
    density,
    louvain,
    modularity_of,
)
from semnet.sentiment import (
    IdentityTermSet,
    SentimentLexicon,
    community_sentiment,
    identity_alignment,
    score_document,
)
from semnet.textpipe import (
    Document,
    PipelineConfig,
    apply_stoplists,
    clean_document,
    lemmatize,
    segment_sentences,
    tokenize,
)

__all__ = [
    "__version__",
    "CooccurrenceCounts",
    "GraphBuildConfig",
    "SemanticGraph",
    "build_graph",
    "count_cooccurrences",
    "windows",
    "CorpusManifest",
    "RawReview",
    "fetch_reviews",
    "filter_substantive",
    "load_corpus",
    "persist_corpus",
    "CentralityTable",
    "CommunityPartition",
    "average_path_length",
    "betweenness_centrality",
    "bridging_concepts",
    "degree_centrality",
    "density",
    "louvain",
    "modularity_of",
    "IdentityTermSet",
    "SentimentLexicon",
    "community_sentiment",
    "identity_alignment",
    "score_document",
    "Document",
    "PipelineConfig",
    "apply_stoplists",
    "clean_document",
    "lemmatize",
    "segment_sentences",
    "tokenize",
]
