import random

import pytest

from semnet.cooccur import SemanticGraph
from semnet.textpipe import PipelineConfig


@pytest.fixture(scope="session")
def default_config():
    return PipelineConfig.default()


@pytest.fixture
def two_triangle_graph():
    """Two unit-weight triangles joined by one bridge edge (6 nodes, 7 edges)."""
    edges = [
        ("a", "b", 1),
        ("a", "c", 1),
        ("b", "c", 1),
        ("d", "e", 1),
        ("d", "f", 1),
        ("e", "f", 1),
        ("c", "d", 1),  # the bridge
    ]
    return SemanticGraph.from_lemma_edges(edges)


def random_graph(n, p, rng: random.Random, max_weight=1):
    """Seeded G(n, p) as a SemanticGraph with letter-coded lemmas."""
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                weight = 1 if max_weight == 1 else rng.randint(1, max_weight)
                edges.append((lemma_for(a), lemma_for(b), weight))
    isolated = [lemma_for(v) for v in range(n)]
    return SemanticGraph.from_lemma_edges(edges, isolated=isolated)


def lemma_for(i):
    """Alphabetic id that sorts in numeric order (aa, ab, ... zz, then longer)."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    out = letters[i % 26]
    i //= 26
    while i:
        out = letters[i % 26] + out
        i //= 26
    return out.rjust(2, "a")
