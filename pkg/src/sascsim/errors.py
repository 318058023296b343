"""Error hierarchy shared by all sascsim modules.

Every error carries the process exit code the command line maps it to.
"""


class SascSimError(Exception):
    """Base class of all expected failures (bad input, impossible configuration)."""

    exit_code = 2


class ParseError(SascSimError):
    """A text input could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ValidationError(SascSimError):
    """A value violates a documented invariant."""


class SchemaError(ValidationError):
    """A JSON document misses a required field or has the wrong type."""

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ExtractionError(SascSimError):
    """Statistics cannot be extracted from an annotation."""


class EstimationError(SascSimError):
    """A density or transform cannot be estimated from the given samples."""


class DomainError(SascSimError):
    """An argument lies outside the domain of a function."""


class ConfigurationError(SascSimError):
    """Parameters are inconsistent with each other or out of range."""


class PairingError(SascSimError):
    """Speaker pairs cannot be formed under the requested reuse limit."""


class UnsupportedFormatError(SascSimError):
    """An audio file uses an encoding this package does not handle."""

    def __init__(self, message: str, property_name: str):
        self.property = property_name
        super().__init__(f"unsupported {property_name}: {message}")


class RenderError(SascSimError):
    """A dialogue plan cannot be rendered to audio."""


class MetricError(SascSimError):
    """Transcripts cannot be scored."""


class InternalInvariantError(SascSimError):
    """An internal consistency check failed; indicates a bug, not bad input."""

    exit_code = 3
