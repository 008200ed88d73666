"""Weighted co-occurrence graph built from cleaned documents.

Edges come from a sliding window of consecutive sentences (default 3)
that never crosses a review boundary.  A pair of distinct lemmas gains
exactly 1 per window it shares, regardless of token multiplicity, so
long sentences cannot dominate edge weights.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from semnet.errors import CorpusCorruptionError, IntegrityError
from semnet.textpipe import Document

GRAPH_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GraphBuildConfig:
    window_sentences: int = 3
    min_node_freq: int = 5
    min_edge_weight: int = 2

    def __post_init__(self):
        if self.window_sentences < 1:
            raise ValueError(f"window_sentences must be >= 1, got {self.window_sentences}")
        if self.min_node_freq < 1 or self.min_edge_weight < 1:
            raise ValueError("pruning thresholds must be >= 1")


class CooccurrenceCounts(NamedTuple):
    frequencies: dict[str, int]
    edge_weights: dict[tuple[str, str], int]  # keys (a, b) with a < b


def windows(doc: Document, w: int) -> list[list[str]]:
    """Pooled lemma lists for each stride-1 window of `w` sentences.

    A document shorter than the window yields a single window covering
    everything; an empty document yields none.  Windows never cross
    document boundaries.
    """
    if w < 1:
        raise ValueError(f"window size must be >= 1, got {w}")
    sentences = doc.sentences
    if not sentences:
        return []
    if len(sentences) < w:
        return [[lemma for sentence in sentences for lemma in sentence]]
    return [
        [lemma for sentence in sentences[i : i + w] for lemma in sentence]
        for i in range(len(sentences) - w + 1)
    ]


def count_cooccurrences(docs: Iterable[Document], w: int) -> CooccurrenceCounts:
    """Accumulate node frequencies and binary-per-window pair weights.

    Node frequency counts token occurrences over sentences (not
    windows) so window overlap cannot double-count tokens.
    """
    frequencies: Counter[str] = Counter()
    edge_weights: Counter[tuple[str, str]] = Counter()
    for doc in docs:
        for sentence in doc.sentences:
            frequencies.update(sentence)
        for window in windows(doc, w):
            for a, b in combinations(sorted(set(window)), 2):
                edge_weights[(a, b)] += 1
    return CooccurrenceCounts(dict(frequencies), dict(edge_weights))


@dataclass
class SemanticGraph:
    """Undirected weighted lemma graph with dense integer node ids.

    Node id i maps to `lemmas[i]`; `frequencies[i]` is that lemma's
    corpus frequency.  Edges are keyed (a, b) with a < b.
    """

    lemmas: tuple[str, ...]
    frequencies: tuple[int, ...]
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        v = len(self.lemmas)
        if len(set(self.lemmas)) != v:
            raise IntegrityError("duplicate lemmas")
        if len(self.frequencies) != v:
            raise IntegrityError("frequencies do not cover nodes")
        if any(f < 1 for f in self.frequencies):
            raise IntegrityError("all node frequencies must be >= 1")
        for (a, b), weight in self.edges.items():
            if not (0 <= a < b < v):
                raise IntegrityError(f"bad edge key ({a}, {b}) for {v} nodes")
            if weight < 1:
                raise IntegrityError(f"edge ({a}, {b}) has weight {weight} < 1")

    @property
    def vertex_count(self) -> int:
        return len(self.lemmas)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def _ids(self) -> dict[str, int]:
        return {lemma: i for i, lemma in enumerate(self.lemmas)}

    def node_id(self, lemma: str) -> int | None:
        return self._ids.get(lemma)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor ids per node, sorted for deterministic traversal."""
        neighbors: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            neighbors[a].append(b)
            neighbors[b].append(a)
        return tuple(tuple(sorted(n)) for n in neighbors)

    def weight(self, a: int, b: int) -> int:
        """Symmetric edge-weight lookup; 0 when the edge is absent."""
        if a == b:
            return 0
        key = (a, b) if a < b else (b, a)
        return self.edges.get(key, 0)

    @classmethod
    def from_lemma_edges(
        cls,
        edges: Mapping[tuple[str, str], int] | Iterable[tuple[str, str, int]],
        frequencies: Mapping[str, int] | None = None,
        isolated: Sequence[str] = (),
    ) -> "SemanticGraph":
        """Build a graph from lemma-keyed edges (ids become lexicographic).

        Handy for fixtures and for rebuilding a graph from exported
        tables.  Frequencies default to 1.
        """
        if isinstance(edges, Mapping):
            triples = [(a, b, w) for (a, b), w in edges.items()]
        else:
            triples = list(edges)
        lemma_set = set(isolated)
        for a, b, _ in triples:
            if a == b:
                raise IntegrityError(f"self-loop on {a!r}")
            lemma_set.update((a, b))
        lemmas = tuple(sorted(lemma_set))
        ids = {lemma: i for i, lemma in enumerate(lemmas)}
        edge_map: dict[tuple[int, int], int] = {}
        for a, b, w in triples:
            key = (ids[a], ids[b]) if ids[a] < ids[b] else (ids[b], ids[a])
            if key in edge_map:
                raise IntegrityError(f"duplicate edge {a!r}-{b!r}")
            edge_map[key] = w
        freqs = tuple((frequencies or {}).get(lemma, 1) for lemma in lemmas)
        return cls(lemmas=lemmas, frequencies=freqs, edges=edge_map)


def build_graph(counts: CooccurrenceCounts, config: GraphBuildConfig) -> SemanticGraph:
    """Prune raw counts into a SemanticGraph.

    Nodes below min_node_freq go first, then edges below
    min_edge_weight or touching a dropped node, then nodes left
    isolated.  Ids are dense, in lexicographic lemma order.
    """
    frequencies, edge_weights = counts
    for (a, b), weight in edge_weights.items():
        if a == b:
            raise IntegrityError(f"self-loop on {a!r} in counts")
        if a > b:
            raise IntegrityError(f"edge key ({a!r}, {b!r}) not sorted")
        if a not in frequencies or b not in frequencies:
            raise IntegrityError(f"edge ({a!r}, {b!r}) references unknown lemma")
        if weight < 1:
            raise IntegrityError(f"edge ({a!r}, {b!r}) has weight {weight} < 1")

    kept_nodes = {lemma for lemma, f in frequencies.items() if f >= config.min_node_freq}
    kept_edges = {
        pair: weight
        for pair, weight in edge_weights.items()
        if weight >= config.min_edge_weight and pair[0] in kept_nodes and pair[1] in kept_nodes
    }
    connected = sorted({lemma for pair in kept_edges for lemma in pair})
    ids = {lemma: i for i, lemma in enumerate(connected)}
    edges = {(ids[a], ids[b]): weight for (a, b), weight in kept_edges.items()}
    return SemanticGraph(
        lemmas=tuple(connected),
        frequencies=tuple(frequencies[lemma] for lemma in connected),
        edges=edges,
    )


def graph_to_dict(graph: SemanticGraph, provenance: dict | None = None) -> dict:
    return {
        "schema_version": GRAPH_SCHEMA_VERSION,
        "provenance": provenance or {},
        "nodes": [
            {"id": i, "lemma": graph.lemmas[i], "frequency": graph.frequencies[i]}
            for i in range(graph.vertex_count)
        ],
        "edges": [[a, b, w] for (a, b), w in sorted(graph.edges.items())],
    }


def graph_from_dict(doc: dict) -> SemanticGraph:
    if not isinstance(doc, dict) or "nodes" not in doc or "edges" not in doc:
        raise CorpusCorruptionError("not a graph document")
    nodes = sorted(doc["nodes"], key=lambda n: n["id"])
    if [n["id"] for n in nodes] != list(range(len(nodes))):
        raise CorpusCorruptionError("graph node ids are not dense")
    return SemanticGraph(
        lemmas=tuple(n["lemma"] for n in nodes),
        frequencies=tuple(n["frequency"] for n in nodes),
        edges={(a, b): w for a, b, w in doc["edges"]},
    )


def write_graph(graph: SemanticGraph, path, provenance: dict | None = None) -> None:
    doc = graph_to_dict(graph, provenance)
    Path(path).write_text(
        json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def read_graph(path) -> SemanticGraph:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise CorpusCorruptionError(f"{path}: bad graph JSON ({exc})")
    return graph_from_dict(doc)
