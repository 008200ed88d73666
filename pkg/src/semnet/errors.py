"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: DataError subclasses exit 2,
network/IO trouble exits 3.
"""


class SemnetError(Exception):
    """Base class for all toolkit errors."""


class DataError(SemnetError):
    """Input data violates a contract."""


class PayloadError(DataError):
    """The review endpoint returned a payload we cannot interpret."""

    def __init__(self, field: str, detail: str = ""):
        self.field = field
        msg = f"malformed API payload: field {field!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CorpusCorruptionError(DataError):
    """An on-disk corpus does not match its manifest or schema."""


class EmptyCorpusError(DataError):
    """Nothing survived filtering; there is no content to analyze."""


class IntegrityError(DataError):
    """Internal data structures are inconsistent (bad counts, bad ids)."""


class UndefinedMetricError(DataError):
    """The requested metric has no value on this graph."""


class LexiconFormatError(DataError):
    """A lexicon or stop-list data file is malformed."""


class RetriableFetchError(SemnetError):
    """Transient network failure; ``cursor`` lets the caller resume."""

    def __init__(self, message: str, cursor: str):
        self.cursor = cursor
        super().__init__(message)
