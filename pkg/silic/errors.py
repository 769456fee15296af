class SilicError(ValueError):
    r"""Base error. ``kind`` is the machine-readable reason used by the CLI."""

    kind = "silic-error"

    def __init__(self, message="", **context):
        super(SilicError, self).__init__(message)
        self.context = context
        for key, value in context.items():
            setattr(self, key, value)


class InvalidConfigError(SilicError):
    kind = "invalid-config"


class TerminalStateError(SilicError):
    kind = "terminal-state"


class SchemaError(SilicError):
    kind = "schema-error"


class RowError(SilicError):
    kind = "row-error"


class UnmappedActivityError(SilicError):
    kind = "unmapped-activity"


class InsufficientDataError(SilicError):
    kind = "insufficient-data"


class DivergenceError(SilicError):
    kind = "divergence"


class InvalidGuidanceError(SilicError):
    kind = "invalid-guidance"


class ParseError(SilicError):
    kind = "parse-error"


class ProviderUnavailableError(SilicError):
    kind = "provider-unavailable"


class ContextMissingError(SilicError):
    kind = "context-missing"


class InvalidLabelError(SilicError):
    kind = "invalid-label"


class InvalidLabelsError(SilicError):
    kind = "invalid-labels"


class OracleTooLargeError(SilicError):
    kind = "oracle-too-large"


class PreconditionError(SilicError):
    kind = "precondition"


class ArtifactWriteError(SilicError):
    kind = "artifact-write"


class ClampedWeightWarning(UserWarning):
    pass
