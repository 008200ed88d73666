import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semnet.cooccur import SemanticGraph
from semnet.errors import LexiconFormatError
from semnet.metrics import CommunityPartition
from semnet.sentiment import (
    AlignmentRow,
    IdentityTermSet,
    SentimentLexicon,
    community_sentiment,
    default_identity_sets,
    identity_alignment,
    load_identity_sets,
    score_document,
)
from semnet.textpipe import Document, PipelineConfig, lemmatize


def doc(*sentences, review_id="r0"):
    return Document(review_id=review_id, sentences=tuple(tuple(s) for s in sentences))


MINI_LEX = SentimentLexicon(entries={"love": 0.8, "cruel": -0.7, "good": 1.0, "bad": -1.0})


# ------------------------------------------------------------ document score


def test_score_love_cruel_mean():
    assert score_document(doc(["love", "cruel"]), MINI_LEX) == pytest.approx(0.05, abs=1e-12)


def test_score_uses_shipped_values():
    shipped = SentimentLexicon.default()
    assert shipped.entries["love"] == pytest.approx(0.8)
    assert shipped.entries["cruel"] == pytest.approx(-0.7)
    assert score_document(doc(["love", "cruel"]), shipped) == pytest.approx(0.05, abs=1e-12)


def test_score_no_hits_is_absent():
    assert score_document(doc(["wolf", "hunt"]), MINI_LEX) is None


def test_score_counts_occurrences():
    assert score_document(doc(["love", "love", "cruel"]), MINI_LEX) == pytest.approx(
        (0.8 + 0.8 - 0.7) / 3, abs=1e-12
    )


@given(
    st.lists(
        st.lists(st.sampled_from(["love", "cruel", "good", "bad", "wolf", "elk"]), max_size=6),
        max_size=5,
    )
)
@settings(max_examples=200, deadline=None)
def test_score_matches_brute_force(sentences):
    document = doc(*sentences)
    total = 0.0
    hits = 0
    for sentence in sentences:
        for lemma in sentence:
            if lemma in MINI_LEX.entries:
                total += MINI_LEX.entries[lemma]
                hits += 1
    score = score_document(document, MINI_LEX)
    if hits == 0:
        assert score is None
    else:
        assert score == pytest.approx(total / hits, abs=1e-12)
        assert -1.0 <= score <= 1.0


# ------------------------------------------------------- community sentiment


@pytest.fixture
def planted():
    graph = SemanticGraph.from_lemma_edges([("engine", "mech", 1), ("plot", "story", 1)])
    # ids are lexicographic: engine=0, mech=1, plot=2, story=3
    partition = CommunityPartition(assignment={0: 0, 1: 0, 2: 1, 3: 1}, modularity=0.5)
    return graph, partition


def test_community_sentiment_hand_trace(planted):
    graph, partition = planted
    docs = [
        doc(["good", "mech", "engine"], review_id="d1"),
        doc(["bad", "story"], review_id="d2"),
        doc(["good", "bad", "mech", "story"], review_id="d3"),
    ]
    out = community_sentiment(docs, graph, partition, MINI_LEX)
    # d1 -> c0 fully (+1.0); d2 -> c1 fully (-1.0); d3 splits 50/50 with score 0
    assert out[0] == (pytest.approx(2 / 3, abs=1e-12), 2)
    assert out[1] == (pytest.approx(-2 / 3, abs=1e-12), 2)


def test_community_sentiment_degenerate_single_community(planted):
    graph, _ = planted
    partition = CommunityPartition(assignment={v: 0 for v in range(4)}, modularity=0.0)
    docs = [
        doc(["good", "mech"], review_id="d1"),
        doc(["bad", "story", "plot"], review_id="d2"),
    ]
    out = community_sentiment(docs, graph, partition, MINI_LEX)
    corpus_mean = (1.0 + -1.0) / 2
    assert out == {0: (pytest.approx(corpus_mean, abs=1e-12), 2)}


def test_community_sentiment_no_scorable_docs(planted):
    graph, partition = planted
    docs = [doc(["mech", "story"])]
    assert community_sentiment(docs, graph, partition, MINI_LEX) == {}


def test_community_sentiment_skips_unlocatable_docs(planted):
    graph, partition = planted
    # scorable but no graph lemma to place it on: contributes nothing
    docs = [doc(["good"]), doc(["good", "mech"])]
    out = community_sentiment(docs, graph, partition, MINI_LEX)
    assert out == {0: (pytest.approx(1.0, abs=1e-12), 1)}


def test_community_sentiment_zero_support_absent(planted):
    graph, partition = planted
    docs = [doc(["good", "mech"])]
    out = community_sentiment(docs, graph, partition, MINI_LEX)
    assert 1 not in out


# --------------------------------------------------------- identity alignment


def test_alignment_negative_grind_row():
    term_set = IdentityTermSet(name="Laborer", terms=frozenset({"work", "grind"}))
    docs = [doc(["grind", "bad"]), doc(["wolf"])]
    rows = identity_alignment(docs, [term_set], MINI_LEX)
    assert rows == [AlignmentRow(name="Laborer", matching_docs=1, mean_valence=-1.0)]


def test_alignment_empty_set_row():
    term_set = IdentityTermSet(name="Ghost", terms=frozenset({"phantom"}))
    rows = identity_alignment([doc(["wolf"])], [term_set], MINI_LEX)
    assert rows == [AlignmentRow(name="Ghost", matching_docs=0, mean_valence=None)]


def test_alignment_match_without_score():
    term_set = IdentityTermSet(name="Wolf", terms=frozenset({"pack"}))
    rows = identity_alignment([doc(["pack"])], [term_set], MINI_LEX)
    assert rows == [AlignmentRow(name="Wolf", matching_docs=1, mean_valence=None)]


def test_alignment_sets_may_overlap():
    sets = [
        IdentityTermSet(name="A", terms=frozenset({"wolf"})),
        IdentityTermSet(name="B", terms=frozenset({"wolf", "pack"})),
    ]
    docs = [doc(["wolf", "good"])]
    rows = identity_alignment(docs, sets, MINI_LEX)
    assert [r.matching_docs for r in rows] == [1, 1]


@given(
    st.lists(
        st.lists(st.sampled_from(["work", "grind", "wolf", "pack", "good", "bad"]), max_size=5),
        max_size=8,
    )
)
@settings(max_examples=200, deadline=None)
def test_alignment_counts_match_membership_scan(sentences_list):
    docs = [doc(sentence, review_id=f"r{i}") for i, sentence in enumerate(sentences_list)]
    term_set = IdentityTermSet(name="Laborer", terms=frozenset({"work", "grind"}))
    rows = identity_alignment(docs, [term_set], MINI_LEX)
    expected = sum(1 for s in sentences_list if {"work", "grind"} & set(s))
    assert rows[0].matching_docs == expected


@given(
    st.lists(
        st.lists(st.sampled_from(["work", "grind", "shift", "wolf", "good"]), max_size=5),
        max_size=8,
    )
)
@settings(max_examples=100, deadline=None)
def test_alignment_count_monotone_in_terms(sentences_list):
    docs = [doc(sentence, review_id=f"r{i}") for i, sentence in enumerate(sentences_list)]
    small = IdentityTermSet(name="S", terms=frozenset({"work"}))
    grown = IdentityTermSet(name="S", terms=frozenset({"work", "grind"}))
    count_small = identity_alignment(docs, [small], MINI_LEX)[0].matching_docs
    count_grown = identity_alignment(docs, [grown], MINI_LEX)[0].matching_docs
    assert count_grown >= count_small


def test_inert_document_changes_nothing(planted):
    graph, partition = planted
    sets = [IdentityTermSet(name="Wolf", terms=frozenset({"pack"}))]
    docs = [doc(["good", "mech"]), doc(["pack", "bad"])]
    inert = doc(["elk", "snow"], review_id="inert")  # no lexicon terms, no identity terms
    assert identity_alignment(docs, sets, MINI_LEX) == identity_alignment(docs + [inert], sets, MINI_LEX)
    assert community_sentiment(docs, graph, partition, MINI_LEX) == community_sentiment(
        docs + [inert], graph, partition, MINI_LEX
    )


# ----------------------------------------------------------------- data files


def test_lexicon_load_and_validation(tmp_path):
    path = tmp_path / "lex.tsv"
    path.write_text("wolf\t0.5\nhunt\t-0.25\n# comment\n")
    lex = SentimentLexicon.load(path)
    assert lex.entries == {"wolf": 0.5, "hunt": -0.25}
    path.write_text("wolf\t2.0\n")
    with pytest.raises(LexiconFormatError):
        SentimentLexicon.load(path)
    path.write_text("wolf 0.5\n")  # no tab
    with pytest.raises(LexiconFormatError):
        SentimentLexicon.load(path)


def test_shipped_lexicon_is_well_formed(default_config):
    shipped = SentimentLexicon.default()
    assert len(shipped.entries) >= 500
    for lemma, valence in shipped.entries.items():
        assert -1.0 <= valence <= 1.0
        assert lemma.isalpha() and lemma == lemma.lower()
        # keys are lemmatizer fixpoints, so they match pipeline output
        assert lemmatize(lemma, default_config.conflation_lexicon) == lemma


def test_identity_sets_parse(tmp_path):
    path = tmp_path / "sets.txt"
    path.write_text("Laborer: work, grind\nWolf: parent, pack, pup, safe\n")
    sets = load_identity_sets(path)
    assert sets[0] == IdentityTermSet(name="Laborer", terms=frozenset({"work", "grind"}))
    assert sets[1].name == "Wolf"
    path.write_text("NoColonHere\n")
    with pytest.raises(LexiconFormatError):
        load_identity_sets(path)
    path.write_text("Empty:\n")
    with pytest.raises(LexiconFormatError):
        load_identity_sets(path)


def test_default_identity_sets_match_shipped_defaults():
    sets = default_identity_sets()
    by_name = {s.name: s.terms for s in sets}
    assert by_name["Laborer"] == frozenset({"work", "grind", "job", "shift"})
    assert by_name["Wolf"] == frozenset({"parent", "pack", "pup", "safe"})


def test_identity_set_requires_terms():
    with pytest.raises(LexiconFormatError):
        IdentityTermSet(name="empty", terms=frozenset())
