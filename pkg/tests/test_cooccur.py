import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import corpus_pair_counts
from semnet.cooccur import (
    CooccurrenceCounts,
    GraphBuildConfig,
    SemanticGraph,
    build_graph,
    count_cooccurrences,
    graph_from_dict,
    graph_to_dict,
    read_graph,
    windows,
    write_graph,
)
from semnet.errors import IntegrityError
from semnet.textpipe import Document


def doc(*sentences, review_id="r0"):
    return Document(review_id=review_id, sentences=tuple(tuple(s) for s in sentences))


VOCAB = ["va", "vb", "vc", "vd", "ve", "vf", "vg", "vh", "vi", "vj", "vk", "vl"]

mini_corpus = st.lists(
    st.lists(
        st.lists(st.sampled_from(VOCAB), min_size=1, max_size=5),
        min_size=0,
        max_size=6,
    ),
    min_size=0,
    max_size=10,
)


# ------------------------------------------------------------------ windows


def test_windows_stride_one():
    d = doc(["s1"], ["s2"], ["s3"], ["s4"], ["s5"])
    assert windows(d, 3) == [["s1", "s2", "s3"], ["s2", "s3", "s4"], ["s3", "s4", "s5"]]


def test_windows_truncation_below_size():
    d = doc(["s1"], ["s2"])
    assert windows(d, 3) == [["s1", "s2"]]


def test_windows_empty_document():
    assert windows(doc(), 3) == []


def test_windows_rejects_bad_size():
    with pytest.raises(ValueError):
        windows(doc(["x"]), 0)


@given(st.integers(min_value=0, max_value=50), st.integers(min_value=1, max_value=10))
@settings(max_examples=300, deadline=None)
def test_window_count_closed_form(s, w):
    d = doc(*[[f"w{i}"] for i in range(s)])
    count = len(windows(d, w))
    if s == 0:
        assert count == 0
    elif s < w:
        assert count == 1
    else:
        assert count == s - w + 1


# ----------------------------------------------------------------- counting


def test_single_sentence_pair():
    counts = count_cooccurrences([doc(["wolf", "hunt"])], 3)
    assert counts.edge_weights == {("hunt", "wolf"): 1}
    assert counts.frequencies == {"wolf": 1, "hunt": 1}


def test_chain_example_matches_enumeration():
    sentences = [["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"]]
    counts = count_cooccurrences([doc(*sentences)], 3)
    oracle_freq, oracle_edges = corpus_pair_counts([sentences], 3)
    assert counts.frequencies == oracle_freq
    assert counts.edge_weights == oracle_edges
    # frozen expectations from the exhaustive enumeration
    assert counts.edge_weights == {
        ("a", "b"): 1,
        ("a", "c"): 1,
        ("a", "d"): 1,
        ("b", "c"): 2,
        ("b", "d"): 2,
        ("b", "e"): 1,
        ("c", "d"): 2,
        ("c", "e"): 1,
        ("d", "e"): 1,
    }
    assert counts.edge_weights[("a", "c")] == 1
    assert counts.edge_weights[("c", "e")] == 1
    assert counts.edge_weights[("b", "d")] == 2


def test_repeated_lemma_binary_per_window():
    counts = count_cooccurrences([doc(["x", "x", "y"])], 1)
    assert counts.edge_weights == {("x", "y"): 1}  # no self edge, pair counted once
    assert counts.frequencies == {"x": 2, "y": 1}


def test_windows_never_cross_documents():
    docs = [doc(["a"], review_id="r0"), doc(["b"], review_id="r1")]
    counts = count_cooccurrences(docs, 3)
    assert counts.edge_weights == {}


@given(mini_corpus, st.sampled_from([1, 2, 3]))
@settings(max_examples=300, deadline=None)
def test_counts_match_exhaustive_oracle(corpus, w):
    docs = [doc(*sentences, review_id=f"r{i}") for i, sentences in enumerate(corpus)]
    counts = count_cooccurrences(docs, w)
    oracle_freq, oracle_edges = corpus_pair_counts(corpus, w)
    assert counts.frequencies == oracle_freq
    assert counts.edge_weights == oracle_edges


@given(mini_corpus, st.sampled_from([1, 2, 3]), st.randoms(use_true_random=False))
@settings(max_examples=150, deadline=None)
def test_document_order_does_not_matter(corpus, w, rng):
    docs = [doc(*sentences, review_id=f"r{i}") for i, sentences in enumerate(corpus)]
    shuffled = list(docs)
    rng.shuffle(shuffled)
    assert count_cooccurrences(docs, w) == count_cooccurrences(shuffled, w)


# ------------------------------------------------------------- graph builds


def naive_build(counts, config):
    """Reference filter-then-prune, written independently."""
    freq, weights = counts
    nodes = {n for n, f in freq.items() if f >= config.min_node_freq}
    edges = {}
    for (a, b), w in weights.items():
        if w >= config.min_edge_weight and a in nodes and b in nodes:
            edges[(a, b)] = w
    keep = sorted({x for pair in edges for x in pair})
    ids = {x: i for i, x in enumerate(keep)}
    return (
        tuple(keep),
        tuple(freq[x] for x in keep),
        {(ids[a], ids[b]): w for (a, b), w in edges.items()},
    )


def test_identity_thresholds_keep_everything_but_isolates():
    counts = CooccurrenceCounts(
        frequencies={"a": 1, "b": 2, "c": 1, "lonely": 9},
        edge_weights={("a", "b"): 1, ("b", "c"): 1},
    )
    graph = build_graph(counts, GraphBuildConfig(window_sentences=3, min_node_freq=1, min_edge_weight=1))
    assert graph.lemmas == ("a", "b", "c")  # 'lonely' had no edges
    assert graph.edges == {(0, 1): 1, (1, 2): 1}
    assert graph.frequencies == (1, 2, 1)


def test_low_frequency_node_dropped_with_edges():
    counts = CooccurrenceCounts(
        frequencies={"a": 4, "b": 9, "c": 9},
        edge_weights={("a", "b"): 7, ("b", "c"): 7},
    )
    graph = build_graph(counts, GraphBuildConfig(min_node_freq=5, min_edge_weight=2))
    assert graph.lemmas == ("b", "c")
    assert graph.edges == {(0, 1): 7}


@given(
    st.dictionaries(st.sampled_from(VOCAB), st.integers(1, 10), max_size=12),
    st.integers(1, 6),
    st.integers(1, 4),
    st.randoms(use_true_random=False),
)
@settings(max_examples=200, deadline=None)
def test_build_graph_matches_naive_reference(freqs, min_node_freq, min_edge_weight, rng):
    lemmas = sorted(freqs)
    weights = {}
    for i in range(len(lemmas)):
        for j in range(i + 1, len(lemmas)):
            if rng.random() < 0.4:
                weights[(lemmas[i], lemmas[j])] = rng.randint(1, 5)
    counts = CooccurrenceCounts(freqs, weights)
    config = GraphBuildConfig(min_node_freq=min_node_freq, min_edge_weight=min_edge_weight)
    graph = build_graph(counts, config)
    assert (graph.lemmas, graph.frequencies, graph.edges) == naive_build(counts, config)


def test_build_graph_rejects_unknown_endpoint():
    counts = CooccurrenceCounts({"a": 1}, {("a", "ghost"): 1})
    with pytest.raises(IntegrityError):
        build_graph(counts, GraphBuildConfig(min_node_freq=1, min_edge_weight=1))


def test_build_graph_rejects_self_loop():
    counts = CooccurrenceCounts({"a": 1}, {("a", "a"): 1})
    with pytest.raises(IntegrityError):
        build_graph(counts, GraphBuildConfig(min_node_freq=1, min_edge_weight=1))


def test_ids_are_dense_lexicographic():
    counts = CooccurrenceCounts(
        frequencies={"zebra": 5, "apple": 5, "mango": 5},
        edge_weights={("apple", "zebra"): 2, ("apple", "mango"): 2},
    )
    graph = build_graph(counts, GraphBuildConfig(min_node_freq=1, min_edge_weight=1))
    assert graph.lemmas == ("apple", "mango", "zebra")
    assert sorted(graph.node_id(l) for l in graph.lemmas) == [0, 1, 2]


def test_weight_lookup_is_symmetric(two_triangle_graph):
    g = two_triangle_graph
    for (a, b), w in g.edges.items():
        assert g.weight(a, b) == w
        assert g.weight(b, a) == w
    assert g.weight(0, 0) == 0
    assert g.weight(0, 5) == 0


def test_graph_validates_invariants():
    with pytest.raises(IntegrityError):
        SemanticGraph(lemmas=("a", "b"), frequencies=(1, 1), edges={(1, 0): 1})
    with pytest.raises(IntegrityError):
        SemanticGraph(lemmas=("a", "b"), frequencies=(1, 0), edges={})
    with pytest.raises(IntegrityError):
        SemanticGraph(lemmas=("a", "a"), frequencies=(1, 1), edges={})
    with pytest.raises(IntegrityError):
        SemanticGraph(lemmas=("a", "b"), frequencies=(1, 1), edges={(0, 1): 0})


def test_graph_file_round_trip(tmp_path, two_triangle_graph):
    path = tmp_path / "graph.json"
    write_graph(two_triangle_graph, path, provenance={"seed": 0})
    loaded = read_graph(path)
    assert loaded == two_triangle_graph
    assert graph_from_dict(graph_to_dict(two_triangle_graph)) == two_triangle_graph
