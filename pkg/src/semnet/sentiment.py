"""Lexicon-based valence scoring over cleaned documents.

A transparent average of per-lemma valences, deliberately simple: no
negation handling, no trained models.  Community- and identity-level
aggregations sit on top of the per-document score.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from semnet.cooccur import SemanticGraph
from semnet.errors import LexiconFormatError
from semnet.metrics import CommunityPartition
from semnet.textpipe import Document, builtin_data_path


@dataclass(frozen=True)
class SentimentLexicon:
    """Lemma -> valence in [-1, +1]."""

    entries: dict[str, float]

    def __post_init__(self):
        for lemma, valence in self.entries.items():
            if not lemma.isalpha() or lemma != lemma.lower():
                raise LexiconFormatError(f"lexicon lemma {lemma!r} must be lowercase alphabetic")
            if not -1.0 <= valence <= 1.0:
                raise LexiconFormatError(f"valence for {lemma!r} out of [-1, 1]: {valence}")

    @classmethod
    def load(cls, path) -> "SentimentLexicon":
        """Read 'lemma<TAB>valence' lines; '#' starts a comment."""
        entries = {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconFormatError(f"{path}:{lineno}: expected 'lemma<TAB>valence'")
            lemma = parts[0].strip().lower()
            try:
                valence = float(parts[1])
            except ValueError:
                raise LexiconFormatError(f"{path}:{lineno}: bad valence {parts[1]!r}")
            entries[lemma] = valence
        return cls(entries=entries)

    @classmethod
    def default(cls) -> "SentimentLexicon":
        return cls.load(builtin_data_path("sentiment_lexicon.tsv"))


@dataclass(frozen=True)
class IdentityTermSet:
    name: str
    terms: frozenset[str]

    def __post_init__(self):
        if not self.terms:
            raise LexiconFormatError(f"identity set {self.name!r} has no terms")


@dataclass(frozen=True)
class AlignmentRow:
    name: str
    matching_docs: int
    mean_valence: float | None


def load_identity_sets(path) -> list[IdentityTermSet]:
    """'name: term, term, ...' per line; '#' starts a comment."""
    sets = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise LexiconFormatError(f"{path}:{lineno}: expected 'name: term, term, ...'")
        name, _, terms_part = line.partition(":")
        terms = frozenset(t.strip().lower() for t in terms_part.split(",") if t.strip())
        if not name.strip() or not terms:
            raise LexiconFormatError(f"{path}:{lineno}: empty name or term list")
        sets.append(IdentityTermSet(name=name.strip(), terms=terms))
    return sets


def default_identity_sets() -> list[IdentityTermSet]:
    return load_identity_sets(builtin_data_path("identity_sets.txt"))


def score_document(doc: Document, lexicon: SentimentLexicon) -> float | None:
    """Mean valence over lemma occurrences found in the lexicon.

    None when no lemma matches — an unscorable document, not a zero.
    """
    total = 0.0
    hits = 0
    for sentence in doc.sentences:
        for lemma in sentence:
            valence = lexicon.entries.get(lemma)
            if valence is not None:
                total += valence
                hits += 1
    if hits == 0:
        return None
    return total / hits


def community_sentiment(
    docs: Iterable[Document],
    graph: SemanticGraph,
    partition: CommunityPartition,
    lexicon: SentimentLexicon,
) -> dict[int, tuple[float, int]]:
    """Per-community weighted mean of document scores.

    A document's score lands on communities in proportion to where its
    non-lexicon content lemmas sit in the graph; documents with no
    score or no locatable content lemmas contribute nothing.  Returns
    community -> (mean valence, number of contributing documents);
    communities with zero support are absent.
    """
    weighted_sum: defaultdict[int, float] = defaultdict(float)
    weight_total: defaultdict[int, float] = defaultdict(float)
    support: Counter[int] = Counter()
    for doc in docs:
        score = score_document(doc, lexicon)
        if score is None:
            continue
        placement: Counter[int] = Counter()
        located = 0
        for sentence in doc.sentences:
            for lemma in sentence:
                if lemma in lexicon.entries:
                    continue
                node = graph.node_id(lemma)
                if node is None:
                    continue
                placement[partition.assignment[node]] += 1
                located += 1
        if located == 0:
            continue
        for community, count in placement.items():
            fraction = count / located
            weighted_sum[community] += fraction * score
            weight_total[community] += fraction
            support[community] += 1
    return {
        community: (weighted_sum[community] / weight_total[community], support[community])
        for community in sorted(weight_total)
    }


def identity_alignment(
    docs: Sequence[Document],
    sets: Sequence[IdentityTermSet],
    lexicon: SentimentLexicon,
) -> list[AlignmentRow]:
    """Per identity set: matching-document count and their mean valence.

    A document matches a set iff it contains at least one of the set's
    terms; sets may overlap.  The mean is taken over matching documents
    that are scorable; None when none are.
    """
    rows = []
    for term_set in sets:
        matching = [
            doc
            for doc in docs
            if any(lemma in term_set.terms for sentence in doc.sentences for lemma in sentence)
        ]
        scores = [s for doc in matching if (s := score_document(doc, lexicon)) is not None]
        mean = sum(scores) / len(scores) if scores else None
        rows.append(AlignmentRow(name=term_set.name, matching_docs=len(matching), mean_valence=mean))
    return rows
