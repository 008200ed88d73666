"""Review corpus collection, filtering, and on-disk persistence.

The fetcher walks the public Steam review endpoint's cursor pagination
and yields reviews that fall inside the configured collection window.
Corpora are stored as one JSON object per line plus a sidecar manifest,
so they stay streamable, appendable, and diff-able.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, asdict, field
from pathlib import Path
from typing import Iterator, Sequence

import requests

from semnet.errors import (
    CorpusCorruptionError,
    IntegrityError,
    PayloadError,
    RetriableFetchError,
)

REVIEWS_URL = "https://store.steampowered.com/appreviews/{app_id}"
RATE_LIMIT_ENV = "SEMNET_RATE_LIMIT_RPS"
DEFAULT_MIN_CHARS = 50
PAGE_SIZE = 100

# exactly the fields (and order) of a corpus JSONL record
_REVIEW_FIELDS = ("review_id", "app_id", "text", "created_at", "language", "votes_up")


@dataclass(frozen=True)
class RawReview:
    """One fetched review, as stored in a corpus file."""

    review_id: str
    app_id: int
    text: str
    created_at: int  # UNIX seconds
    language: str
    votes_up: int


@dataclass
class CorpusManifest:
    """Sidecar record of how a corpus file was collected and filtered."""

    app_id: int
    collection_window: list[int]  # [start, end] UNIX seconds, inclusive
    filter_min_chars: int
    review_count_raw: int
    review_count_validated: int
    provenance: dict | None = None

    def __post_init__(self):
        if self.review_count_validated > self.review_count_raw:
            raise IntegrityError(
                "validated count exceeds raw count "
                f"({self.review_count_validated} > {self.review_count_raw})"
            )


class TokenBucket:
    """Token-bucket rate limiter for the single fetch stream.

    `clock` and `sleep` are injectable so tests never wait on real time.
    """

    def __init__(self, rate: float, capacity: float = 1.0, *, clock=time.monotonic, sleep=time.sleep):
        if rate <= 0:
            raise ValueError(f"rate must be positive, got {rate}")
        self.rate = rate
        self.capacity = capacity
        self._clock = clock
        self._sleep = sleep
        self._tokens = capacity
        self._last = clock()

    def acquire(self) -> None:
        now = self._clock()
        self._tokens = min(self.capacity, self._tokens + (now - self._last) * self.rate)
        self._last = now
        if self._tokens < 1.0:
            wait = (1.0 - self._tokens) / self.rate
            self._sleep(wait)
            self._last = self._clock()
            self._tokens = 1.0
        self._tokens -= 1.0


def rate_limit_from_env(default: float = 1.0) -> float:
    """Requests-per-second limit, overridable via SEMNET_RATE_LIMIT_RPS."""
    raw = os.environ.get(RATE_LIMIT_ENV)
    if raw is None:
        return default
    try:
        rate = float(raw)
    except ValueError:
        raise ValueError(f"{RATE_LIMIT_ENV} must be a float, got {raw!r}")
    if rate <= 0:
        raise ValueError(f"{RATE_LIMIT_ENV} must be positive, got {raw!r}")
    return rate


def fetch_reviews(
    app_id: int,
    window: tuple[int, int],
    language: str = "english",
    page_limit: int = 100,
    *,
    start_cursor: str = "*",
    session=None,
    rate_limiter: TokenBucket | None = None,
    max_429_retries: int = 4,
    backoff_base: float = 1.0,
    sleep=time.sleep,
) -> Iterator[RawReview]:
    """Yield reviews from the public endpoint in API order.

    Walks cursor pagination for up to `page_limit` pages, yielding only
    reviews whose creation timestamp lies inside `window` (inclusive)
    and whose language matches.  Stops early when the cursor is
    exhausted.  On a transient failure the raised RetriableFetchError
    carries the page cursor so a caller can resume with `start_cursor`.
    """
    if app_id <= 0:
        raise ValueError(f"app_id must be positive, got {app_id}")
    if page_limit < 1:
        raise ValueError(f"page_limit must be >= 1, got {page_limit}")
    if session is None:
        session = requests.Session()
    if rate_limiter is None:
        rate_limiter = TokenBucket(rate_limit_from_env())

    start, end = window
    cursor = start_cursor
    for _ in range(page_limit):
        payload = _fetch_page(
            session, app_id, cursor, language, rate_limiter, max_429_retries, backoff_base, sleep
        )
        reviews = payload.get("reviews")
        if not isinstance(reviews, list):
            raise PayloadError("reviews", "missing or not a list")
        for item in reviews:
            review = _parse_review(item, app_id)
            if review.language == language and start <= review.created_at <= end:
                yield review
        next_cursor = payload.get("cursor")
        # Steam signals exhaustion with an empty page or a repeated cursor.
        if not reviews or not isinstance(next_cursor, str) or next_cursor == cursor:
            return
        cursor = next_cursor


def _fetch_page(session, app_id, cursor, language, limiter, max_429_retries, backoff_base, sleep):
    url = REVIEWS_URL.format(app_id=app_id)
    # the cursor from the previous response is passed verbatim; requests
    # URL-encodes it exactly once
    params = {
        "json": 1,
        "num_per_page": PAGE_SIZE,
        "cursor": cursor,
        "language": language,
        "filter": "recent",
    }
    attempt = 0
    while True:
        limiter.acquire()
        try:
            response = session.get(url, params=params, timeout=30)
        except requests.RequestException as exc:
            raise RetriableFetchError(f"network failure at cursor {cursor!r}: {exc}", cursor)
        if response.status_code == 429:
            if attempt >= max_429_retries:
                raise RetriableFetchError(
                    f"rate limited ({max_429_retries} retries exhausted) at cursor {cursor!r}",
                    cursor,
                )
            sleep(backoff_base * (2**attempt))
            attempt += 1
            continue
        if response.status_code != 200:
            raise RetriableFetchError(
                f"HTTP {response.status_code} at cursor {cursor!r}", cursor
            )
        try:
            payload = response.json()
        except ValueError as exc:
            raise PayloadError("<document>", f"response is not JSON: {exc}")
        if not isinstance(payload, dict):
            raise PayloadError("<document>", "response is not a JSON object")
        if payload.get("success") != 1:
            raise PayloadError("success", f"expected 1, got {payload.get('success')!r}")
        return payload


def _parse_review(item, app_id: int) -> RawReview:
    if not isinstance(item, dict):
        raise PayloadError("reviews", "review entry is not an object")

    def _str(field_name):
        value = item.get(field_name)
        if not isinstance(value, str) or not value:
            raise PayloadError(field_name, "expected a non-empty string")
        return value

    def _int(field_name, minimum):
        value = item.get(field_name)
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            raise PayloadError(field_name, f"expected an integer >= {minimum}")
        return value

    text = item.get("review")
    if not isinstance(text, str):
        raise PayloadError("review", "expected a string")
    return RawReview(
        review_id=_str("recommendationid"),
        app_id=app_id,
        text=text,
        created_at=_int("timestamp_created", 0),
        language=_str("language"),
        votes_up=_int("votes_up", 0),
    )


def filter_substantive(review: RawReview, min_chars: int = DEFAULT_MIN_CHARS) -> bool:
    """True iff the review text is longer than `min_chars` (strict).

    Length is counted in Unicode scalar values, whitespace included.
    """
    if min_chars < 0:
        raise ValueError(f"min_chars must be >= 0, got {min_chars}")
    return len(review.text) > min_chars


def manifest_path_for(corpus_path: Path) -> Path:
    """`corpus.jsonl` keeps its manifest beside it as `corpus.manifest.json`."""
    corpus_path = Path(corpus_path)
    return corpus_path.with_name(corpus_path.stem + ".manifest.json")


def persist_corpus(reviews: Sequence[RawReview], manifest: CorpusManifest, path) -> None:
    """Write the corpus JSONL file and its sidecar manifest.

    Record order is preserved byte-stably; loading the pair back gives
    an identical (manifest, reviews) value.
    """
    path = Path(path)
    if manifest.review_count_validated != len(reviews):
        raise IntegrityError(
            f"manifest says {manifest.review_count_validated} reviews, got {len(reviews)}"
        )
    seen = set()
    for review in reviews:
        if not review.review_id:
            raise IntegrityError("empty review_id")
        if review.review_id in seen:
            raise IntegrityError(f"duplicate review_id {review.review_id!r}")
        seen.add(review.review_id)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for review in reviews:
            fh.write(json.dumps(asdict(review), ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
    manifest_doc = json.dumps(asdict(manifest), ensure_ascii=False, sort_keys=True, indent=2)
    manifest_path_for(path).write_text(manifest_doc + "\n", encoding="utf-8")


def load_corpus(path) -> tuple[CorpusManifest, list[RawReview]]:
    """Read a corpus written by persist_corpus; verify counts match."""
    path = Path(path)
    manifest = _load_manifest(manifest_path_for(path))
    reviews = []
    seen = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except ValueError as exc:
                raise CorpusCorruptionError(f"{path}:{lineno}: bad JSON ({exc})")
            if not isinstance(record, dict) or set(record) != set(_REVIEW_FIELDS):
                raise CorpusCorruptionError(
                    f"{path}:{lineno}: expected exactly fields {_REVIEW_FIELDS}"
                )
            review = RawReview(**record)
            if not review.review_id or review.review_id in seen:
                raise CorpusCorruptionError(
                    f"{path}:{lineno}: empty or duplicate review_id {review.review_id!r}"
                )
            seen.add(review.review_id)
            reviews.append(review)
    if len(reviews) != manifest.review_count_validated:
        raise CorpusCorruptionError(
            f"{path}: manifest says {manifest.review_count_validated} reviews, "
            f"file holds {len(reviews)}"
        )
    return manifest, reviews


def _load_manifest(path: Path) -> CorpusManifest:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise CorpusCorruptionError(f"{path}: bad manifest JSON ({exc})")
    required = {
        "app_id",
        "collection_window",
        "filter_min_chars",
        "review_count_raw",
        "review_count_validated",
    }
    if not isinstance(doc, dict) or not required.issubset(doc):
        raise CorpusCorruptionError(f"{path}: manifest missing fields {sorted(required - set(doc))}")
    return CorpusManifest(
        app_id=doc["app_id"],
        collection_window=list(doc["collection_window"]),
        filter_min_chars=doc["filter_min_chars"],
        review_count_raw=doc["review_count_raw"],
        review_count_validated=doc["review_count_validated"],
        provenance=doc.get("provenance"),
    )
