"""Exception hierarchy shared across the pipeline.

Every error that can surface through the CLI maps to a process exit code:
configuration problems exit 2, stage-ordering problems exit 3, external
market-data source problems exit 4, classifier-plugin problems exit 5.
"""

from __future__ import annotations


class CalltideError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1


class ConfigurationError(CalltideError):
    """Invalid flag, threshold, proportion, or missing input path."""

    exit_code = 2


class OrderingError(CalltideError):
    """A pipeline stage was invoked before the stage it depends on."""

    exit_code = 3

    def __init__(self, stage: str, missing: str):
        super().__init__(f"stage '{stage}' requires '{missing}' to have run first")
        self.stage = stage
        self.missing = missing


# --- ingestion ---------------------------------------------------------


class UnparsableDocument(CalltideError):
    """No text content could be extracted from a document."""


class DateNotFound(CalltideError):
    """No recognizable report date in a document body."""


# --- market data -------------------------------------------------------


class MarketDataError(CalltideError):
    exit_code = 4


class SourceUnavailable(MarketDataError):
    """Transport-level failure talking to the quote source."""


class UnknownTicker(MarketDataError):
    """The quote source does not know the requested symbol."""


class RateLimited(MarketDataError):
    """The quote source throttled us; `retry_after` is in seconds when known."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class NoQuoteNearby(MarketDataError):
    """No trading day within the search bound of a target date.

    `offset` names which window offset failed (e.g. "+90") when raised
    while assembling a price window.
    """

    def __init__(self, message: str, offset: str | None = None):
        super().__init__(message)
        self.offset = offset


# --- dataset store -----------------------------------------------------


class StoreCorrupt(CalltideError):
    """Schema version mismatch or unreadable database file."""


class ConstraintViolation(CalltideError):
    """A write violated a store constraint."""


class InsufficientExamples(CalltideError):
    """A per-class operation found an empty class."""


# --- classification ----------------------------------------------------


class PluginError(CalltideError):
    exit_code = 5


class PluginCrashed(PluginError):
    """The plugin subprocess exited while work was outstanding."""


class PluginProtocolError(PluginError):
    """The plugin spoke malformed or out-of-contract messages."""


class PluginTimeout(PluginError):
    """The plugin failed to answer within the configured deadline."""


class EmptyPredictionSet(CalltideError):
    """Aggregation was asked to vote over zero chunk predictions."""


class EmptyEvaluation(CalltideError):
    """Metrics were requested for an evaluation with no examples."""
