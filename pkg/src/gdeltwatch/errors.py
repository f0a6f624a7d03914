"""Exception types shared across the package."""


class GdeltWatchError(Exception):
    """Base class for errors raised by this package."""


class FormatError(GdeltWatchError):
    """Input bytes are not a usable GDELT file (or container)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class IntegrityError(GdeltWatchError):
    """A downloaded file failed its manifest digest check."""


class TransportError(GdeltWatchError):
    """HTTP transfer failed after the configured retries."""


class ApiRangeError(GdeltWatchError):
    """A DOC API request asked for data outside the API's coverage."""


class AlignmentError(GdeltWatchError):
    """Two series that must share bucket sets do not."""

    def __init__(self, message, offending_buckets=()):
        super().__init__(message)
        self.offending_buckets = tuple(offending_buckets)


class CriteriaError(GdeltWatchError):
    """A serialized query-criteria form could not be decoded."""


class StoreError(GdeltWatchError):
    """The backing store is unusable (bad schema version, I/O failure)."""
