"""Synthetic review corpora with planted topic structure.

Two disjoint made-up vocabularies stand in for thematic clusters; each
generated review writes about one of them, with a small chance of
borrowing a word from the other.  Useful for pipeline smoke tests and
for checking that community detection recovers planted structure.
"""

from __future__ import annotations

import random
from itertools import product

from semnet.ingest import CorpusManifest, RawReview

# consonants only: the resulting words are stable under the lemmatizer's
# suffix rules (no -s/-es/-ed/-ing endings can arise)
_SUFFIX_LETTERS = "bdfgklmnprtv"

_WINDOW_START = 1_514_764_800  # 2018-01-01T00:00:00Z
_WINDOW_END = 1_767_225_600  # 2026-01-01T00:00:00Z


def topic_vocabulary(prefix: str, size: int) -> list[str]:
    """`size` distinct alphabetic pseudo-lemmas sharing a prefix."""
    words = [prefix + a + b for a, b in product(_SUFFIX_LETTERS, repeat=2)]
    if size > len(words):
        raise ValueError(f"at most {len(words)} words per topic, asked for {size}")
    return words[:size]


def planted_corpus(
    n_reviews: int = 200,
    topic_size: int = 20,
    noise: float = 0.05,
    seed: int = 0,
    *,
    app_id: int = 1,
    sentences_range: tuple[int, int] = (3, 6),
    words_range: tuple[int, int] = (4, 8),
) -> tuple[list[RawReview], dict[str, int]]:
    """Generate reviews over two disjoint topic vocabularies.

    Reviews alternate between the topics; every word is drawn from the
    review's own vocabulary except with probability `noise`, when it
    comes from the other one.  Returns the reviews and the planted
    lemma -> topic labels.
    """
    rng = random.Random(seed)
    vocabularies = [topic_vocabulary("terra", topic_size), topic_vocabulary("aqua", topic_size)]
    labels = {word: topic for topic, words in enumerate(vocabularies) for word in words}
    reviews = []
    for i in range(n_reviews):
        topic = i % 2
        own, other = vocabularies[topic], vocabularies[1 - topic]
        sentences = []
        for _ in range(rng.randint(*sentences_range)):
            words = [
                rng.choice(other) if rng.random() < noise else rng.choice(own)
                for _ in range(rng.randint(*words_range))
            ]
            sentences.append(" ".join(words) + ".")
        reviews.append(
            RawReview(
                review_id=f"synthetic-{seed}-{i:04d}",
                app_id=app_id,
                text=" ".join(sentences),
                created_at=_WINDOW_START + i,
                language="english",
                votes_up=i % 7,
            )
        )
    return reviews, labels


def planted_manifest(reviews: list[RawReview], app_id: int = 1) -> CorpusManifest:
    return CorpusManifest(
        app_id=app_id,
        collection_window=[_WINDOW_START, _WINDOW_END],
        filter_min_chars=0,
        review_count_raw=len(reviews),
        review_count_validated=len(reviews),
    )
