"""Text cleaning pipeline: sentences -> tokens -> lemmas -> stop-filtered lemmas.

Stop-list filtering runs AFTER lemmatization, so one stop-list entry
("crash") covers the whole inflection family.  All operations are pure
functions of (input, config) and deterministic across platforms.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from semnet.errors import CorpusCorruptionError, LexiconFormatError
from semnet.ingest import RawReview

_SENTENCE_SEP = re.compile(r"[.!?]|\n+")
_WORD = re.compile(r"[^\W\d_]+")  # maximal runs of Unicode letters

# 'y' counts as a vowel for the has-a-vowel and CVC checks below
_VOWELS = frozenset("aeiouy")

DOCUMENTS_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Document:
    """A cleaned review: ordered sentences of ordered lemma strings."""

    review_id: str
    sentences: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class PipelineConfig:
    standard_stoplist: frozenset[str]
    technical_stoplist: frozenset[str]
    conflation_lexicon: Mapping[str, str]
    min_token_len: int = 3

    @classmethod
    def default(cls) -> "PipelineConfig":
        """Config backed by the data files shipped with the package."""
        return cls(
            standard_stoplist=load_stoplist(builtin_data_path("standard_stopwords.txt")),
            technical_stoplist=load_stoplist(builtin_data_path("technical_stopwords.txt")),
            conflation_lexicon=load_conflation_lexicon(builtin_data_path("conflation_lexicon.txt")),
        )


def builtin_data_path(name: str) -> Path:
    return Path(str(resources.files("semnet.data").joinpath(name)))


def _data_lines(path) -> Iterable[tuple[int, str]]:
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_stoplist(path) -> frozenset[str]:
    """One entry per line, '#' comments allowed.  Entries are lemma-level."""
    entries = set()
    for lineno, line in _data_lines(path):
        if len(line.split()) != 1:
            raise LexiconFormatError(f"{path}:{lineno}: expected one token per line, got {line!r}")
        entries.add(line.lower())
    return frozenset(entries)


def load_conflation_lexicon(path) -> dict[str, str]:
    """'token lemma' pairs, one per line, '#' comments allowed."""
    lexicon = {}
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise LexiconFormatError(f"{path}:{lineno}: expected 'token lemma', got {line!r}")
        token, lemma = (p.lower() for p in parts)
        if not token.isalpha() or not lemma.isalpha():
            raise LexiconFormatError(f"{path}:{lineno}: entries must be alphabetic")
        lexicon[token] = lemma
    return lexicon


def segment_sentences(text: str) -> list[str]:
    """Split on '.', '!', '?', and newline runs; drop empty segments."""
    return [segment for segment in _SENTENCE_SEP.split(text) if segment != ""]


def tokenize(sentence: str, min_token_len: int = 3) -> list[str]:
    """Lowercase maximal letter runs at least `min_token_len` long.

    Digits and punctuation are separators, so score patterns like
    "10/10" and the short residue of "CO2" never survive.
    """
    return [t for t in _WORD.findall(sentence.lower()) if len(t) >= min_token_len]


def lemmatize(token: str, lexicon: Mapping[str, str]) -> str:
    """Reduce a lowercase alphabetic token to its base form.

    Exact lexicon matches win (that is how derivational merges such as
    pollution -> pollute happen); otherwise the ordered suffix rules run
    to a fixed point.  Every rule strictly shortens the token, so the
    loop terminates and the function is idempotent.
    """
    current = token
    while True:
        if current in lexicon:
            return lexicon[current]
        reduced = _suffix_pass(current)
        if reduced == current:
            return current
        current = reduced


def _suffix_pass(t: str) -> str:
    n = len(t)
    if t.endswith("ies") and n >= 5:
        return t[:-3] + "y"
    if t.endswith("sses") and n >= 5:
        return t[:-2]
    if t.endswith("es") and n >= 4:
        stem = t[:-2]
        if stem.endswith(("s", "x", "z", "ch", "sh")):
            return stem  # boxes -> box, crashes -> crash
        return t[:-1]  # trees -> tree, makes -> make
    if t.endswith("s") and n >= 4 and not t.endswith(("ss", "us", "is")):
        return t[:-1]
    if t.endswith("ing") and n >= 5 and _has_vowel(t[:-3]):
        return _restore(t[:-3])
    if t.endswith("ed") and n >= 5 and _has_vowel(t[:-2]):
        return _restore(t[:-2])
    return t


def _has_vowel(stem: str) -> bool:
    return any(ch in _VOWELS for ch in stem)


def _restore(stem: str) -> str:
    """Undo spelling changes left by -ing/-ed removal."""
    if (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and stem[-1] not in "lsz"
    ):
        return stem[:-1]  # running -> run (but falling -> fall)
    if (
        3 <= len(stem) <= 4
        and stem[-1] not in _VOWELS
        and stem[-1] not in "wxy"
        and stem[-2] in _VOWELS
        and stem[-3] not in _VOWELS
    ):
        return stem + "e"  # making -> make, mined -> mine
    return stem


def apply_stoplists(lemmas: Iterable[str], config: PipelineConfig) -> list[str]:
    """Order-preserving removal of lemmas on either active stop-list."""
    return [
        lemma
        for lemma in lemmas
        if lemma not in config.standard_stoplist and lemma not in config.technical_stoplist
    ]


def clean_document(review: RawReview, config: PipelineConfig) -> Document:
    """Run the full pipeline on one review, keeping sentence boundaries.

    Sentences emptied by filtering are dropped, so a fully stop-listed
    review yields a Document with no sentences.
    """
    sentences = []
    for segment in segment_sentences(review.text):
        tokens = tokenize(segment, config.min_token_len)
        lemmas = [lemmatize(token, config.conflation_lexicon) for token in tokens]
        kept = apply_stoplists(lemmas, config)
        if kept:
            sentences.append(tuple(kept))
    return Document(review_id=review.review_id, sentences=tuple(sentences))


def write_documents(documents: Iterable[Document], path, provenance: dict | None = None) -> None:
    """Persist cleaned documents as a single JSON file."""
    doc = {
        "schema_version": DOCUMENTS_SCHEMA_VERSION,
        "provenance": provenance or {},
        "documents": [
            {"review_id": d.review_id, "sentences": [list(s) for s in d.sentences]}
            for d in documents
        ],
    }
    Path(path).write_text(
        json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def read_documents(path) -> list[Document]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise CorpusCorruptionError(f"{path}: bad document store JSON ({exc})")
    if not isinstance(doc, dict) or "documents" not in doc:
        raise CorpusCorruptionError(f"{path}: not a document store")
    documents = []
    for entry in doc["documents"]:
        documents.append(
            Document(
                review_id=entry["review_id"],
                sentences=tuple(tuple(s) for s in entry["sentences"]),
            )
        )
    return documents
