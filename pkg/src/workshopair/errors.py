"""Exception hierarchy shared across the package.

Ingestion-side errors all derive from IngestError so the subscriber loop can
count and dead-letter them without ever crashing.
"""


class WorkshopAirError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(WorkshopAirError, ValueError):
    """An argument violates a documented precondition."""


class InsufficientDataError(WorkshopAirError, ValueError):
    """Too few samples to fit or evaluate."""


class DegenerateDataError(WorkshopAirError, ValueError):
    """Data present but unusable (constant feature, single class, ...)."""


class SaturatedReadingError(WorkshopAirError, ValueError):
    """ADC code at 0 or full scale; the divider model cannot be inverted."""


class ConfigError(WorkshopAirError):
    """Config file missing, malformed or semantically invalid."""


class PublishError(WorkshopAirError):
    """An MQTT publish failed after retries."""


class ScenarioAbortedError(WorkshopAirError):
    """A scenario run stopped early; carries how many payloads went out."""

    def __init__(self, message: str, published: int):
        super().__init__(message)
        self.published = published


class IngestError(WorkshopAirError):
    """Base for per-message ingestion failures (recorded, never fatal)."""

    code = "ingest_error"


class PayloadParseError(IngestError):
    code = "parse_error"


class PayloadSchemaError(IngestError):
    code = "schema_error"

    def __init__(self, message: str, missing: list[str] | None = None):
        super().__init__(message)
        self.missing = missing or []


class PayloadRangeError(IngestError):
    code = "range_error"

    def __init__(self, message: str, field: str):
        super().__init__(message)
        self.field = field


class RoutingError(IngestError):
    code = "routing_error"


class DuplicatePayloadError(IngestError):
    code = "duplicate"


class UnknownChannelError(WorkshopAirError, KeyError):
    """Query or ingest referenced a channel the store does not know."""
